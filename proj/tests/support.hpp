// Shared helpers for the unit tests.
#pragma once

#include "pnlayer/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace testing {

inline pnlayer::RealField random_field(const pnlayer::GridSpec& g, std::uint64_t seed, double lo = -1.0,
                                       double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    pnlayer::RealField f(g);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = dist(rng);
    return f;
}

/// Smooth random field: a few low modes with random amplitudes, decaying in x.
inline pnlayer::RealField smooth_random_field(const pnlayer::GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> amp(0.0, 1.0);
    std::uniform_real_distribution<double> centre(-0.25, 0.25);
    const double X = g.half_length();
    const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
    const double c1 = centre(rng) * X, c2 = centre(rng) * X;
    const double w = 0.08 * X;
    return pnlayer::sample(g, [=](double x, double y, double) {
        return a1 * std::exp(-(x - c1) * (x - c1) / (w * w)) * (1.0 + 0.3 * std::cos(2.0 * M_PI * y)) +
               a2 * std::exp(-(x - c2) * (x - c2) / (4.0 * w * w)) + a3 * std::exp(-x * x / (9.0 * w * w));
    });
}

inline double max_abs_diff(const pnlayer::RealField& a, const pnlayer::RealField& b) {
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
    return m;
}

}  // namespace testing
