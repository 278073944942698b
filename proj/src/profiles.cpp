#include "hyperlab/profiles.hpp"

#include "hyperlab/errors.hpp"
#include "hyperlab/nls.hpp"
#include "hyperlab/propagators.hpp"
#include "hyperlab/transform.hpp"

#include <cmath>

namespace hyperlab {

double eta_bump(double x) {
    x = std::abs(x);
    if (x <= 1.0) return 1.0;
    if (x >= 2.0) return 0.0;
    const double s = x - 1.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

RadialField unit_gaussian_profile(double a, std::size_t n, double r_max) {
    if (!(a > 0.0)) throw InvalidArgument("profile width must be positive");
    auto grid = make_grid(Geometry::euclidean(), r_max, n);
    const double inv = 1.0 / (a * a);
    return with_mass(sample(grid, [&](double r) { return cplx(std::exp(-r * r * inv)); }), 1.0);
}

RadialField transplant(const RadialField& phi_euclidean, double N, GridPtr target) {
    if (phi_euclidean.mesh().geometry().is_hyperbolic())
        throw GeometryError("transplant expects a Euclidean profile");
    if (!target->geometry().is_hyperbolic()) throw GeometryError("transplant targets the hyperbolic grid");
    if (!(N >= 1.0)) throw InvalidArgument("transplant scale N must be at least 1");
    if (N * target->spacing() > 1.0)
        throw ResolutionError("transplant scale 1/N = " + std::to_string(1.0 / N) +
                              " is finer than the grid spacing");

    // phi_N = eta(x / N^{1/2}) e^{Delta/N} phi
    RadialField phi_n = heat_propagate(phi_euclidean, 1.0 / N);
    const auto rho = phi_n.mesh().nodes();
    const double root_n = std::sqrt(N);
    for (std::size_t j = 0; j < rho.size(); ++j) phi_n.values[j] *= eta_bump(rho[j] / root_n);
    const SpectralField spectrum = forward(phi_n);

    const double support = std::min(2.0 * root_n, phi_n.mesh().r_max());
    const double amp = N * root_n;
    RadialField out(target);
    const auto r = target->nodes();
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double y = N * r[j];
        if (y >= support) break;
        out.values[j] = amp * evaluate(spectrum, y);
    }
    return out;
}

RadialField transplant(const RadialField& phi_euclidean, double N) {
    return transplant(phi_euclidean, N, companion_grid(phi_euclidean.mesh(), Geometry::hyperbolic()));
}

std::vector<double> default_scale_grid(double lo, double hi, int per_octave) {
    if (!(lo > 0.0 && hi >= lo && per_octave >= 1)) throw InvalidArgument("bad dyadic scale range");
    std::vector<double> out;
    const int steps = static_cast<int>(std::round(std::log2(hi / lo) * per_octave));
    for (int k = 0; k <= steps; ++k) out.push_back(lo * std::exp2(static_cast<double>(k) / per_octave));
    return out;
}

std::vector<double> default_time_grid(double t_max, std::size_t count) {
    if (count < 2) throw InvalidArgument("time grid needs at least two samples");
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = -t_max + 2.0 * t_max * static_cast<double>(k) / static_cast<double>(count - 1);
    return out;
}

BubbleHit bubble_search(const RadialField& f, const std::vector<double>& N_grid,
                        const std::vector<double>& t_grid) {
    if (N_grid.empty() || t_grid.empty()) throw InvalidArgument("empty bubble search grid");
    const SpectralField F = forward(f);
    if (spectral_mass(F) == 0.0) throw InvalidArgument("bubble search on a zero field");

    const auto& grid = f.mesh();
    const auto lambda = grid.dual().modes;
    const auto mu = laplacian_symbol(grid);
    const std::size_t n = lambda.size();
    const double pref = grid.dual().weight * kTransformConstant;

    // origin value of e^{it Delta} P_N f = pref * sum_m lambda_m^2 e^{-it mu_m} p_N(mu_m) F_m
    std::vector<cplx> weighted(n);
    for (std::size_t m = 0; m < n; ++m) weighted[m] = lambda[m] * lambda[m] * F.coeffs[m];

    std::vector<std::vector<double>> bands;
    bands.reserve(N_grid.size());
    for (double N : N_grid) bands.push_back(lp_multiplier(grid, LPBand::band(N)));

    BubbleHit best;
    std::vector<cplx> phase(n);
    for (double t : t_grid) {
        for (std::size_t m = 0; m < n; ++m) phase[m] = std::polar(1.0, -t * mu[m]) * weighted[m];
        for (std::size_t k = 0; k < N_grid.size(); ++k) {
            cplx acc{};
            const auto& b = bands[k];
            for (std::size_t m = 0; m < n; ++m) acc += b[m] * phase[m];
            const double v = std::pow(N_grid[k], -1.5) * pref * std::abs(acc);
            if (v > best.value) best = {N_grid[k], t, v};
        }
    }
    return best;
}

Decomposition greedy_decompose(const RadialField& f, std::size_t max_atoms, double delta,
                               const std::vector<double>& N_grid, const std::vector<double>& t_grid) {
    if (max_atoms < 1) throw InvalidArgument("max_atoms must be at least 1");
    if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");

    Decomposition out;
    out.residual = f;
    out.input_mass = mass(f);
    if (out.input_mass == 0.0) return out;

    const auto lambda = f.mesh().dual().modes;
    const double factor = std::exp2(kAtomOctaves);
    BubbleHit hit = bubble_search(out.residual, N_grid, t_grid);
    while (out.atoms.size() < max_atoms && hit.value >= delta) {
        std::vector<double> window(lambda.size(), 0.0);
        for (std::size_t m = 0; m < lambda.size(); ++m)
            if (lambda[m] >= hit.N / factor && lambda[m] <= hit.N * factor) window[m] = 1.0;

        ProfileAtom atom;
        atom.N = hit.N;
        atom.t_offset = hit.t;
        atom.search_value = hit.value;
        atom.atom = apply_multiplier(out.residual, std::span<const double>(window));
        atom.mass_captured = mass(atom.atom);
        RadialField next = out.residual - atom.atom;
        atom.cross_term = 2.0 * std::abs(std::real(inner_product(atom.atom, next)));
        if (atom.mass_captured == 0.0) break;

        const double next_mass = mass(next);
        const BubbleHit next_hit = next_mass > 0.0 ? bubble_search(next, N_grid, t_grid) : BubbleHit{};
        if (!(next_hit.value < hit.value))
            throw NumericalFailure("bubble extraction did not reduce the search value");
        out.atoms.push_back(std::move(atom));
        out.residual = std::move(next);
        hit = next_hit;
        if (next_mass == 0.0) break;
    }

    double total = mass(out.residual);
    for (const auto& a : out.atoms) total += a.mass_captured;
    out.pythagorean_defect = std::abs(out.input_mass - total);
    return out;
}

}  // namespace hyperlab
