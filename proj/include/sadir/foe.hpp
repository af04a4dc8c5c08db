#pragma once

#include <array>
#include <vector>

#include "sadir/conv.hpp"
#include "sadir/types.hpp"

namespace sadir {

/// Four-component Gaussian mixture playing the penalty derivative
/// φ(x) = Σ_n γ_n·exp(−(x−μ_n)²/(2δ_n)); δ is stored as log_delta so any
/// unconstrained optimizer update keeps δ = exp(log_delta) positive.
struct GmmParams {
    static constexpr int kComponents = 4;
    std::array<double, 4> gamma{};
    std::array<double, 4> mu{};
    std::array<double, 4> log_delta{};
};

/// One regularization channel: filter cascade g1,g2,g3 with mixture φ.
struct FoeChannel {
    Kernel2D g1, g2, g3;
    GmmParams gmm;
};

/// Elementwise φ(x).
std::vector<double> gmm_phi(const std::vector<double>& x, const GmmParams& p);

/// Elementwise partials of φ: w.r.t. the input and each mixture parameter.
struct GmmPhiGrads {
    std::vector<double> dx;
    std::array<std::vector<double>, 4> dgamma;
    std::array<std::vector<double>, 4> dmu;
    std::array<std::vector<double>, 4> dlog_delta;
};
GmmPhiGrads gmm_phi_grads(const std::vector<double>& x, const GmmParams& p);

/// Σ_k ḡ_{k1}∗ḡ_{k2}∗ḡ_{k3}∗ φ_k(g_{k3}∗g_{k2}∗g_{k1}∗x): the prior's
/// descent direction. Exactly 4 channels.
Image foe_apply(const Image& x, const std::vector<FoeChannel>& channels);

}  // namespace sadir
