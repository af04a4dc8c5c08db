#include "sadir/foe.hpp"

#include <cmath>

namespace sadir {

std::vector<double> gmm_phi(const std::vector<double>& x, const GmmParams& p) {
    std::vector<double> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        double acc = 0.0;
        for (int nc = 0; nc < GmmParams::kComponents; ++nc) {
            double d = x[i] - p.mu[(size_t)nc];
            double delta = std::exp(p.log_delta[(size_t)nc]);
            acc += p.gamma[(size_t)nc] * std::exp(-d * d / (2.0 * delta));
        }
        out[i] = acc;
    }
    return out;
}

GmmPhiGrads gmm_phi_grads(const std::vector<double>& x, const GmmParams& p) {
    GmmPhiGrads g;
    g.dx.assign(x.size(), 0.0);
    for (int nc = 0; nc < GmmParams::kComponents; ++nc) {
        g.dgamma[(size_t)nc].resize(x.size());
        g.dmu[(size_t)nc].resize(x.size());
        g.dlog_delta[(size_t)nc].resize(x.size());
    }
    for (size_t i = 0; i < x.size(); ++i) {
        for (int nc = 0; nc < GmmParams::kComponents; ++nc) {
            size_t c = (size_t)nc;
            double d = x[i] - p.mu[c];
            double delta = std::exp(p.log_delta[c]);
            double e = std::exp(-d * d / (2.0 * delta));
            double ratio = d / delta;
            g.dx[i] += p.gamma[c] * (-ratio) * e;
            g.dgamma[c][i] = e;
            g.dmu[c][i] = p.gamma[c] * ratio * e;
            g.dlog_delta[c][i] = p.gamma[c] * e * d * d / (2.0 * delta);
        }
    }
    return g;
}

Image foe_apply(const Image& x, const std::vector<FoeChannel>& channels) {
    detail::require(channels.size() == 4, "foe_apply: exactly 4 channels");
    x.validate();
    Image out(x.n, x.pixel_size);
    for (const FoeChannel& ch : channels) {
        Image r = conv_img(conv_img(conv_img(x, ch.g1), ch.g2), ch.g3);
        Image phi(x.n, x.pixel_size);
        phi.data = gmm_phi(r.data, ch.gmm);
        Image back = conv_adjoint_img(
            conv_adjoint_img(conv_adjoint_img(phi, ch.g3), ch.g2), ch.g1);
        for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += back.data[i];
    }
    return out;
}

}  // namespace sadir
