#pragma once

#include "hyperlab/geometry.hpp"

#include <cstddef>
#include <vector>

namespace hyperlab {

/// Fixed radial bump: 1 on [0,1], 0 beyond 2, exp(1 - 1/(1-(x-1)^2)) between.
double eta_bump(double x);

/// Unit-mass Euclidean Gaussian exp(-r^2/a^2) on a Euclidean grid wide
/// enough for transplant scales up to N = 256.
RadialField unit_gaussian_profile(double a, std::size_t n = 4096, double r_max = 40.0);

/// T_N phi: heat-regularize by e^{Delta/N}, cut off by eta(r/N^{1/2}), then
/// place N^{3/2} phi_N(N r) on the target hyperbolic grid.
RadialField transplant(const RadialField& phi_euclidean, double N, GridPtr target);
/// Same, on a hyperbolic grid with the input's n and r_max.
RadialField transplant(const RadialField& phi_euclidean, double N);

struct BubbleHit {
    double N = 0.0;
    double t = 0.0;
    double value = 0.0;
};

/// argmax over (N, t) of N^{-3/2} |[e^{it Delta} P_N f](0)|.
BubbleHit bubble_search(const RadialField& f, const std::vector<double>& N_grid,
                        const std::vector<double>& t_grid);
/// Default search: N = 2..256 at two points per octave, 64 times on [-1, 1].
std::vector<double> default_scale_grid(double lo = 2.0, double hi = 256.0, int per_octave = 2);
std::vector<double> default_time_grid(double t_max = 1.0, std::size_t count = 64);

struct ProfileAtom {
    double N = 0.0;
    double t_offset = 0.0;
    RadialField atom;
    double mass_captured = 0.0;
    /// 2|Re <atom, residual>| at the extraction step.
    double cross_term = 0.0;
    /// Bubble-search value of the field before this extraction.
    double search_value = 0.0;
};

struct Decomposition {
    std::vector<ProfileAtom> atoms;
    RadialField residual;
    /// |M(f) - sum M(atom) - M(residual)|.
    double pythagorean_defect = 0.0;
    double input_mass = 0.0;
};

/// Spectral half-width of the extraction window, in octaves on each side of N*.
inline constexpr double kAtomOctaves = 2.0;

/// Greedy bubble extraction.  Each atom is the part of the current residual
/// whose sine spectrum lies in [N*/4, 4N*] (pulled back along e^{-it* Delta},
/// which commutes with the window); extraction stops when the residual's
/// search value drops below delta or max_atoms is reached.
Decomposition greedy_decompose(const RadialField& f, std::size_t max_atoms, double delta,
                               const std::vector<double>& N_grid = default_scale_grid(),
                               const std::vector<double>& t_grid = default_time_grid());

}  // namespace hyperlab
