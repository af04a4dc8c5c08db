#include "sadir/loss.hpp"

#include <cmath>
#include <vector>

namespace sadir {
namespace {

// Summed-area table over an n×n field, indexed so that
// box(i0,j0,h,w) = Σ field[i0..i0+h) × [j0..j0+w).
struct Sat {
    int n = 0;
    std::vector<double> t;  // (n+1)×(n+1)

    explicit Sat(int n_) : n(n_), t((size_t)(n_ + 1) * (n_ + 1), 0.0) {}

    void build(const double* field, int stride) {
        for (int i = 0; i < n; ++i) {
            double row_acc = 0.0;
            for (int j = 0; j < n; ++j) {
                row_acc += field[(size_t)i * stride + j];
                at(i + 1, j + 1) = at(i, j + 1) + row_acc;
            }
        }
    }

    double& at(int i, int j) { return t[(size_t)i * (n + 1) + j]; }
    double at(int i, int j) const { return t[(size_t)i * (n + 1) + j]; }

    double box(int i0, int j0, int h, int w) const {
        return at(i0 + h, j0 + w) - at(i0, j0 + w) - at(i0 + h, j0) +
               at(i0, j0);
    }
};

}  // namespace

double ssim_with_grad(const Image& p, const Image& q, const LossConfig& cfg,
                      Image* dssim_dp) {
    cfg.validate();
    detail::require(p.n == q.n, "ssim: shape mismatch");
    const int n = p.n;
    const int win = cfg.ssim_window;
    detail::require(n >= win, "ssim: window larger than image");

    const double c1 = cfg.eps1 * cfg.L_range * (cfg.eps1 * cfg.L_range);
    const double c2 = cfg.eps2 * cfg.L_range * (cfg.eps2 * cfg.L_range);
    const int nw = n - win + 1;          // window origins per axis
    const double N = (double)win * win;  // samples per window
    const double W = (double)nw * nw;    // number of windows

    Sat sp(n), sq(n), spp(n), sqq(n), spq(n);
    {
        std::vector<double> tmp((size_t)n * n);
        sp.build(p.data.data(), n);
        sq.build(q.data.data(), n);
        for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = p.data[i] * p.data[i];
        spp.build(tmp.data(), n);
        for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = q.data[i] * q.data[i];
        sqq.build(tmp.data(), n);
        for (size_t i = 0; i < tmp.size(); ++i) tmp[i] = p.data[i] * q.data[i];
        spq.build(tmp.data(), n);
    }

    // Per-window gradient coefficient maps: dS_w/dp_i = α_w + β_w·q_i + γ_w·p_i
    // for every pixel i inside window w.
    std::vector<double> alpha, beta, gamma;
    if (dssim_dp) {
        alpha.resize((size_t)nw * nw);
        beta.resize((size_t)nw * nw);
        gamma.resize((size_t)nw * nw);
    }

    double s_total = 0.0;
    for (int wi = 0; wi < nw; ++wi) {
        for (int wj = 0; wj < nw; ++wj) {
            double mp = sp.box(wi, wj, win, win) / N;
            double mq = sq.box(wi, wj, win, win) / N;
            double vp = spp.box(wi, wj, win, win) / N - mp * mp;
            double vq = sqq.box(wi, wj, win, win) / N - mq * mq;
            double cov = spq.box(wi, wj, win, win) / N - mp * mq;
            double a1 = 2.0 * mp * mq + c1;
            double b1 = mp * mp + mq * mq + c1;
            double a2 = 2.0 * cov + c2;
            double b2 = vp + vq + c2;
            double s = (a1 * a2) / (b1 * b2);
            s_total += s;
            if (dssim_dp) {
                double inv = 2.0 / (N * b1 * b2);
                size_t w = (size_t)wi * nw + wj;
                alpha[w] = inv * (mq * a2 - s * mp * b2 - a1 * mq + s * b1 * mp);
                beta[w] = inv * a1;
                gamma[w] = -inv * s * b1;
            }
        }
    }
    double s_mean = s_total / W;

    if (dssim_dp) {
        // Each pixel sums its covering windows' coefficients; those windows
        // form a rectangle in window-origin space, so three more SATs finish
        // the job in O(n²).
        Sat sa(nw), sb(nw), sg(nw);
        sa.build(alpha.data(), nw);
        sb.build(beta.data(), nw);
        sg.build(gamma.data(), nw);
        *dssim_dp = Image(n, p.pixel_size);
        for (int i = 0; i < n; ++i) {
            int i0 = std::max(0, i - win + 1);
            int i1 = std::min(nw - 1, i);
            if (i1 < i0) continue;
            for (int j = 0; j < n; ++j) {
                int j0 = std::max(0, j - win + 1);
                int j1 = std::min(nw - 1, j);
                if (j1 < j0) continue;
                int h = i1 - i0 + 1, w = j1 - j0 + 1;
                double A = sa.box(i0, j0, h, w);
                double B = sb.box(i0, j0, h, w);
                double G = sg.box(i0, j0, h, w);
                dssim_dp->at(i, j) = (A + B * q.at(i, j) + G * p.at(i, j)) / W;
            }
        }
    }
    return s_mean;
}

double ssim(const Image& p, const Image& q, const LossConfig& cfg) {
    return ssim_with_grad(p, q, cfg, nullptr);
}

double joint_loss_with_grad(const Image& x, const Image& ref,
                            const LossConfig& cfg, Image* dloss_dx) {
    detail::require(x.n == ref.n, "joint_loss: shape mismatch");
    double l2 = 0.0;
    for (size_t i = 0; i < x.data.size(); ++i) {
        double d = x.data[i] - ref.data[i];
        l2 += d * d;
    }
    const double npix = (double)x.data.size();
    if (cfg.l2_mean) l2 /= npix;

    Image dssim;
    double s = ssim_with_grad(x, ref, cfg, dloss_dx ? &dssim : nullptr);
    double root = std::sqrt(1.0 + l2);
    double loss = root * (1.0 - s);

    if (dloss_dx) {
        *dloss_dx = Image(x.n, x.pixel_size);
        double l2_coeff = (1.0 - s) / root * (cfg.l2_mean ? 1.0 / npix : 1.0);
        for (size_t i = 0; i < x.data.size(); ++i) {
            double d = x.data[i] - ref.data[i];
            dloss_dx->data[i] = l2_coeff * d - root * dssim.data[i];
        }
    }
    return loss;
}

double joint_loss(const Image& x, const Image& ref, const LossConfig& cfg) {
    return joint_loss_with_grad(x, ref, cfg, nullptr);
}

}  // namespace sadir
