#pragma once

#include "hyperlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace testing {

using hyperlab::cplx;

// Smooth random field: a few Gaussian bumps with random centres, widths and phases.
inline hyperlab::RadialField random_field(hyperlab::GridPtr grid, std::uint64_t seed, int bumps = 4) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    hyperlab::RadialField f(grid);
    const double reach = std::min(8.0, 0.4 * grid->r_max());
    for (int b = 0; b < bumps; ++b) {
        const double c = reach * U(rng);
        const double w = 0.5 + 1.5 * U(rng);
        const cplx amp = std::polar(0.5 + U(rng), 2.0 * M_PI * U(rng));
        const auto r = grid->nodes();
        for (std::size_t j = 0; j < r.size(); ++j) {
            const double x = (r[j] - c) / w;
            f.values[j] += amp * std::exp(-x * x);
        }
    }
    return f;
}

// Fully random nodal values (no smoothness), for exact algebraic identities.
inline hyperlab::RadialField noise_field(hyperlab::GridPtr grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> G(0.0, 1.0);
    hyperlab::RadialField f(grid);
    for (auto& v : f.values) v = {G(rng), G(rng)};
    return f;
}

inline double rel_diff(const hyperlab::RadialField& a, const hyperlab::RadialField& b) {
    return hyperlab::l2_norm(a - b) / std::max(hyperlab::l2_norm(b), 1e-300);
}

inline double max_abs_diff(const hyperlab::RadialField& a, const hyperlab::RadialField& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.values[j] - b.values[j]));
    return m;
}

}  // namespace testing
