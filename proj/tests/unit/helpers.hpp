#pragma once

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "sadir/types.hpp"

namespace testutil {

// Deterministic uniform values in [-1, 1); mt19937 keeps the test inputs
// independent of the library's own generator.
inline std::vector<double> random_vector(size_t count, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> out(count);
    for (auto& v : out) v = u(rng);
    return out;
}

inline sadir::Image random_image(int n, double ps, uint32_t seed) {
    sadir::Image img(n, ps);
    img.data = random_vector(img.size(), seed);
    return img;
}

inline sadir::Sinogram random_sinogram(int v, int d, double ds,
                                       uint32_t seed) {
    sadir::Sinogram s(v, d, ds);
    s.data = random_vector(s.size(), seed);
    return s;
}

inline double rel_err(double a, double b, double floor_ = 1e-12) {
    double denom = std::max({std::abs(a), std::abs(b), floor_});
    return std::abs(a - b) / denom;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// RAII override of the worker-count environment knob.
struct ThreadCountGuard {
    explicit ThreadCountGuard(const char* value) {
        ::setenv("SADIR_THREADS", value, 1);
    }
    ~ThreadCountGuard() { ::unsetenv("SADIR_THREADS"); }
};

}  // namespace testutil
