#include "sadir/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sadir {

double rmse(const Image& a, const Image& b) {
    detail::require(a.n == b.n, "rmse: image sizes differ");
    double acc = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        double d = a.data[i] - b.data[i];
        acc += d * d;
    }
    return std::sqrt(acc / (double)a.data.size());
}

namespace {

struct EsfBins {
    std::vector<double> esf;
    double h = 1.0;  // bin width, pixels
};

// Project ROI pixels onto the edge normal and average into bins of width
// 1/os pixels. Fails (returns false) when too few bins get samples, which
// happens for axis-aligned edges where every row shares one sub-pixel phase.
bool bin_esf(const std::vector<std::vector<double>>& rows, double slope,
             double intercept, int os, EsfBins& out) {
    const int hgt = (int)rows.size();
    const int wid = (int)rows[0].size();
    const double h = 1.0 / os;
    const double inv_norm = 1.0 / std::sqrt(1.0 + slope * slope);

    double smin = 0.0, smax = 0.0;
    bool first = true;
    auto sval = [&](int r, int c) {
        return ((c + 0.5) - (slope * (r + 0.5) + intercept)) * inv_norm;
    };
    for (int r = 0; r < hgt; ++r)
        for (int c = 0; c < wid; ++c) {
            double s = sval(r, c);
            if (first || s < smin) smin = s;
            if (first || s > smax) smax = s;
            first = false;
        }
    int nb = (int)std::floor((smax - smin) / h) + 1;
    if (nb < 8) return false;

    std::vector<double> sums((size_t)nb, 0.0);
    std::vector<int> counts((size_t)nb, 0);
    for (int r = 0; r < hgt; ++r)
        for (int c = 0; c < wid; ++c) {
            int idx = (int)((sval(r, c) - smin) / h);
            idx = std::clamp(idx, 0, nb - 1);
            sums[(size_t)idx] += rows[(size_t)r][(size_t)c];
            counts[(size_t)idx] += 1;
        }
    int filled = 0;
    for (int i = 0; i < nb; ++i)
        if (counts[(size_t)i] > 0) ++filled;
    if (filled < (int)std::ceil(0.9 * nb)) return false;

    out.h = h;
    out.esf.assign((size_t)nb, 0.0);
    for (int i = 0; i < nb; ++i)
        if (counts[(size_t)i] > 0)
            out.esf[(size_t)i] = sums[(size_t)i] / counts[(size_t)i];
    // The extremal bins hold the min/max samples by construction; bridge any
    // empty interior bins linearly.
    int prev = 0;
    for (int i = 1; i < nb; ++i) {
        if (counts[(size_t)i] == 0) continue;
        if (i > prev + 1) {
            for (int j = prev + 1; j < i; ++j) {
                double t = (double)(j - prev) / (double)(i - prev);
                out.esf[(size_t)j] = (1.0 - t) * out.esf[(size_t)prev] +
                                     t * out.esf[(size_t)i];
            }
        }
        prev = i;
    }
    return true;
}

}  // namespace

MtfCurve mtf_edge(const Image& img, const Roi& roi, EdgeAxis axis) {
    img.validate();
    detail::require(roi.width >= 8 && roi.height >= 8,
                    "mtf_edge: ROI must be at least 8x8");
    detail::require(roi.x0 >= 0 && roi.y0 >= 0 &&
                        roi.x0 + roi.width <= img.n &&
                        roi.y0 + roi.height <= img.n,
                    "mtf_edge: ROI out of bounds");

    bool transpose = (axis == EdgeAxis::horizontal);
    if (axis == EdgeAxis::auto_detect) {
        double gx = 0.0, gy = 0.0;
        for (int r = 0; r < roi.height; ++r)
            for (int c = 0; c < roi.width; ++c) {
                double v = img.at(roi.y0 + r, roi.x0 + c);
                if (c + 1 < roi.width)
                    gx += std::abs(img.at(roi.y0 + r, roi.x0 + c + 1) - v);
                if (r + 1 < roi.height)
                    gy += std::abs(img.at(roi.y0 + r + 1, roi.x0 + c) - v);
            }
        transpose = gy > gx;
    }

    // rows[r][c] with c crossing the edge.
    const int hgt = transpose ? roi.width : roi.height;
    const int wid = transpose ? roi.height : roi.width;
    std::vector<std::vector<double>> rows((size_t)hgt,
                                          std::vector<double>((size_t)wid));
    for (int r = 0; r < hgt; ++r)
        for (int c = 0; c < wid; ++c)
            rows[(size_t)r][(size_t)c] =
                transpose ? img.at(roi.y0 + c, roi.x0 + r)
                          : img.at(roi.y0 + r, roi.x0 + c);

    // Edge usability: compare the step between the flat quarters against the
    // noise level inside them.
    const int q = std::max(2, wid / 4);
    double contrast = 0.0, noise = 0.0;
    for (int r = 0; r < hgt; ++r) {
        double m1 = 0.0, m2 = 0.0;
        for (int c = 0; c < q; ++c) {
            m1 += rows[(size_t)r][(size_t)c];
            m2 += rows[(size_t)r][(size_t)(wid - 1 - c)];
        }
        m1 /= q;
        m2 /= q;
        double v1 = 0.0, v2 = 0.0;
        for (int c = 0; c < q; ++c) {
            double d1 = rows[(size_t)r][(size_t)c] - m1;
            double d2 = rows[(size_t)r][(size_t)(wid - 1 - c)] - m2;
            v1 += d1 * d1;
            v2 += d2 * d2;
        }
        contrast += std::abs(m2 - m1);
        noise += std::sqrt(std::max(v1, v2) / q);
    }
    contrast /= hgt;
    noise /= hgt;
    if (!(contrast > 0.0) || contrast < 10.0 * noise)
        throw std::invalid_argument(
            "mtf_edge: edge contrast below 10x the noise floor estimate");

    // Per-row |derivative| centroids, then a least-squares line through them.
    std::vector<double> rc, cc;
    for (int r = 0; r < hgt; ++r) {
        double sw = 0.0, sx = 0.0;
        for (int c = 0; c + 1 < wid; ++c) {
            double d = std::abs(rows[(size_t)r][(size_t)(c + 1)] -
                                rows[(size_t)r][(size_t)c]);
            sw += d;
            sx += d * (c + 1.0);
        }
        if (sw > 0.0) {
            rc.push_back(r + 0.5);
            cc.push_back(sx / sw);
        }
    }
    detail::require(
        (int)rc.size() >= (9 * hgt) / 10 && rc.size() >= 2,
        "mtf_edge: edge does not span the ROI");
    double mr = 0.0, mc = 0.0;
    for (size_t i = 0; i < rc.size(); ++i) {
        mr += rc[i];
        mc += cc[i];
    }
    mr /= (double)rc.size();
    mc /= (double)rc.size();
    double srr = 0.0, src = 0.0;
    for (size_t i = 0; i < rc.size(); ++i) {
        srr += (rc[i] - mr) * (rc[i] - mr);
        src += (rc[i] - mr) * (cc[i] - mc);
    }
    double slope = srr > 0.0 ? src / srr : 0.0;
    double intercept = mc - slope * mr;

    EsfBins bins;
    if (!bin_esf(rows, slope, intercept, 4, bins))
        detail::require(bin_esf(rows, slope, intercept, 1, bins),
                        "mtf_edge: could not bin an edge-spread function");
    const int nb = (int)bins.esf.size();
    const double h = bins.h;

    // Central-difference LSF (index i maps to ESF index i+1).
    const int nl = nb - 2;
    detail::require(nl >= 4, "mtf_edge: ESF too short");
    std::vector<double> lsf((size_t)nl);
    for (int i = 0; i < nl; ++i)
        lsf[(size_t)i] =
            (bins.esf[(size_t)(i + 2)] - bins.esf[(size_t)i]) / (2.0 * h);

    // Hann window centered on the LSF peak, extending to the nearer end.
    int ip = 0;
    for (int i = 1; i < nl; ++i)
        if (std::abs(lsf[(size_t)i]) > std::abs(lsf[(size_t)ip])) ip = i;
    const int half = std::min(ip, nl - 1 - ip);
    detail::require(half >= 2, "mtf_edge: edge too close to the ROI boundary");
    for (int i = 0; i < nl; ++i) {
        int d = i - ip;
        double w = std::abs(d) <= half
                       ? 0.5 * (1.0 + std::cos(kPi * (double)d / half))
                       : 0.0;
        lsf[(size_t)i] *= w;
    }

    // Direct DFT magnitude, corrected for the central-difference and
    // bin-box transfer functions, normalized at DC. Frequencies stop short
    // of the binning Nyquist where those corrections become singular.
    const int nfft = std::max(512, 4 * nl);
    const double df = 1.0 / (nfft * h);       // cycles/pixel
    const double fcap = std::min(1.0, 0.45 / h);
    MtfCurve curve;
    for (int j = 0;; ++j) {
        double f = j * df;
        if (f > fcap + 1e-12) break;
        double re = 0.0, im = 0.0;
        for (int i = 0; i < nl; ++i) {
            double ang = 2.0 * kPi * f * (i * h);
            re += lsf[(size_t)i] * std::cos(ang);
            im -= lsf[(size_t)i] * std::sin(ang);
        }
        double mag = std::hypot(re, im);
        if (j > 0) {
            double a1 = 2.0 * kPi * f * h;  // finite-difference transfer
            double a2 = kPi * f * h;        // bin-average transfer
            mag *= (a1 / std::sin(a1)) * (a2 / std::sin(a2));
        }
        curve.frequencies.push_back(f / img.pixel_size);
        curve.values.push_back(mag);
    }
    detail::require(curve.values[0] > 0.0, "mtf_edge: zero response at DC");
    for (size_t j = curve.values.size(); j-- > 0;)
        curve.values[j] /= curve.values[0];
    return curve;
}

double mtf_at(const MtfCurve& curve, double fraction) {
    detail::require(fraction > 0.0 && fraction < 1.0,
                    "mtf_at: fraction must be in (0,1)");
    detail::require(curve.frequencies.size() == curve.values.size() &&
                        curve.values.size() >= 2,
                    "mtf_at: malformed curve");
    for (size_t i = 1; i < curve.values.size(); ++i) {
        double v0 = curve.values[i - 1], v1 = curve.values[i];
        if (v0 >= fraction && v1 < fraction) {
            double t = (fraction - v0) / (v1 - v0);
            return curve.frequencies[i - 1] +
                   t * (curve.frequencies[i] - curve.frequencies[i - 1]);
        }
    }
    double mn = *std::min_element(curve.values.begin(), curve.values.end());
    throw std::invalid_argument(
        "mtf_at: curve never crosses fraction; curve minimum = " +
        std::to_string(mn));
}

namespace {

struct CubicTap {
    int idx[4];
    double w[4];
};

// Catmull-Rom (a = -0.5) taps for one output sample at source position p,
// with indices clamped to [0, n).
CubicTap cubic_tap(double p, int n) {
    double fl = std::floor(p);
    int i0 = (int)fl;
    double t = p - fl;
    CubicTap tap;
    tap.w[0] = ((-0.5 * t + 1.0) * t - 0.5) * t;
    tap.w[1] = (1.5 * t - 2.5) * t * t + 1.0;
    tap.w[2] = ((-1.5 * t + 2.0) * t + 0.5) * t;
    tap.w[3] = (0.5 * t - 0.5) * t * t;
    for (int k = 0; k < 4; ++k) tap.idx[k] = std::clamp(i0 - 1 + k, 0, n - 1);
    return tap;
}

}  // namespace

Image bicubic_upscale2(const Image& img) {
    img.validate();
    const int n = img.n, m = 2 * n;
    // Output centers at quarter offsets: source position 0.5*j - 0.25.
    std::vector<CubicTap> taps((size_t)m);
    for (int j = 0; j < m; ++j) taps[(size_t)j] = cubic_tap(0.5 * j - 0.25, n);

    std::vector<double> tmp((size_t)n * (size_t)m);  // rows upscaled
    for (int r = 0; r < n; ++r)
        for (int j = 0; j < m; ++j) {
            const CubicTap& t = taps[(size_t)j];
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += t.w[k] * img.at(r, t.idx[k]);
            tmp[(size_t)r * (size_t)m + (size_t)j] = acc;
        }
    Image out(m, img.pixel_size * 0.5);
    for (int i = 0; i < m; ++i) {
        const CubicTap& t = taps[(size_t)i];
        for (int j = 0; j < m; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k)
                acc += t.w[k] * tmp[(size_t)t.idx[k] * (size_t)m + (size_t)j];
            out.at(i, j) = acc;
        }
    }
    return out;
}

Image nearest_upscale2(const Image& img) {
    img.validate();
    const int m = 2 * img.n;
    Image out(m, img.pixel_size * 0.5);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out.at(i, j) = img.at(i / 2, j / 2);
    return out;
}

}  // namespace sadir
