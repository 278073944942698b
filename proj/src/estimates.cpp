#include "hyperlab/estimates.hpp"

#include "hyperlab/errors.hpp"
#include "hyperlab/norms.hpp"
#include "hyperlab/parallel.hpp"
#include "hyperlab/propagators.hpp"
#include "hyperlab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace hyperlab {

namespace {

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) acc += 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
    return acc;
}

// Uniform samples covering [a, b] with spacing at most dt.
std::vector<double> time_samples(double a, double b, double dt) {
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / dt)));
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) t[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(steps);
    return t;
}

// sum_j 4 pi h sigma_j^{2-p} |g_j|^p for the sine-series variable g = sigma u.
double conjugated_lp_integral(const RadialGrid& grid, const std::vector<cplx>& g, double p) {
    const auto sigma = grid.sigma();
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) acc += std::pow(sigma[j], 2.0 - p) * std::pow(std::abs(g[j]), p);
    return 4.0 * M_PI * grid.spacing() * acc;
}

double conjugated_tail(const RadialGrid& grid, const std::vector<cplx>& g) {
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double m = std::norm(g[j]);
        total += m;
        if (j >= grid.tail_begin()) tail += m;
    }
    return total > 0.0 ? tail / total : 0.0;
}

RadialField nonlinearity_of(const RadialField& u) {
    RadialField out = u;
    for (auto& v : out.values) v *= std::pow(std::abs(v), 4.0 / 3.0);
    return out;
}

}  // namespace

FitResult fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("power-law fit needs at least two matched samples");
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw InvalidArgument("power-law fit needs positive samples");
        lx[k] = std::log(x[k]);
        ly[k] = std::log(y[k]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += lx[k];
        my += ly[k];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxy += (lx[k] - mx) * (ly[k] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("power-law fit needs distinct abscissae");
    FitResult fit;
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    fit.constant = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = ly[k] - intercept - fit.exponent * lx[k];
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

double effective_frequency(const RadialField& f, double tol) {
    const auto F = forward(f);
    const auto lambda = F.modes();
    std::vector<double> density(F.size());
    double total = 0.0;
    for (std::size_t m = 0; m < density.size(); ++m) {
        density[m] = lambda[m] * lambda[m] * std::norm(F.coeffs[m]);
        total += density[m];
    }
    if (!(total > 0.0)) throw InvalidArgument("effective frequency of a zero field");
    double tail = 0.0;
    for (std::size_t m = density.size(); m-- > 0;) {
        tail += density[m];
        if (tail > tol * total) return lambda[m];
    }
    return lambda.front();
}

double wall_safe_window(const RadialGrid& grid, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("wall-safe window needs a positive frequency");
    return grid.r_max() / (4.0 * lambda);
}

// ---------------------------------------------------------------- dispersive

double dispersive_exponent(double p) { return -3.0 * (1.0 / p - 0.5); }

DispersiveResult dispersive_fit(const DatumSpec& datum, Geometry geometry, double p, const std::vector<double>& times,
                                const DispersiveOptions& opts) {
    if (!(p >= 1.2 - 1e-12 && p <= 2.0)) throw InvalidArgument("dispersive exponent p must lie in [6/5, 2]");
    if (times.size() < 6) throw InvalidArgument("dispersive fit needs at least six sample times");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= 1.0)) throw InvalidArgument("dispersive sample times must be >= 1");
        if (k > 0 && !(times[k] > times[k - 1])) throw InvalidArgument("dispersive sample times must increase");
    }
    const auto grid = make_grid(geometry, opts.r_max, opts.n);
    const auto f = make_datum(datum, grid);
    const double p_dual = p / (p - 1.0);

    DispersiveResult out;
    out.predicted_exponent = dispersive_exponent(p);
    out.times = times;
    out.datum_norm = lp_norm(f, p);
    out.norms.resize(times.size());
    std::vector<double> tails(times.size());

    FreeEvolution ev(f);
    parallel_for(times.size(), [&](std::size_t k) {
        std::vector<cplx> g;
        ev.conjugated_at(times[k], g);
        tails[k] = conjugated_tail(*grid, g);
        out.norms[k] = std::pow(conjugated_lp_integral(*grid, g, p_dual), 1.0 / p_dual);
    });
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (tails[k] > opts.boundary_tol) throw WallContamination(times[k], tails[k]);
        out.max_tail = std::max(out.max_tail, tails[k]);
    }
    out.fit = fit_power_law(out.times, out.norms);
    return out;
}

DispersiveComparison compare_dispersive(const DatumSpec& datum, double p, const std::vector<double>& times,
                                        const DispersiveOptions& opts) {
    const auto e = dispersive_fit(datum, Geometry::euclidean(), p, times, opts);
    const auto h = dispersive_fit(datum, Geometry::hyperbolic(), p, times, opts);
    const double expo = e.predicted_exponent;
    DispersiveComparison out;
    out.times = times;
    for (std::size_t k = 0; k < times.size(); ++k)
        out.euclidean_constant =
            std::max(out.euclidean_constant, e.norms[k] / e.datum_norm * std::pow(times[k], -expo));
    out.satisfied = true;
    for (std::size_t k = 0; k < times.size(); ++k) {
        out.hyperbolic_ratio.push_back(h.norms[k] / h.datum_norm);
        out.bound.push_back(out.euclidean_constant * std::pow(times[k], expo));
        if (out.hyperbolic_ratio.back() > out.bound.back()) out.satisfied = false;
    }
    return out;
}

// ------------------------------------------------------------------ bilinear

double bilinear_constant(double N, double L, double q) {
    if (!(q > 4.0 / 3.0)) throw InvalidArgument("bilinear exponent q must exceed 4/3");
    if (!(N > 0.0) || !(L > 0.0)) throw InvalidArgument("bilinear frequencies must be positive");
    if (q <= 2.0) return std::pow(N, 3.5 - 5.0 / q) * std::pow(L, -0.5);
    if (q <= 2.8) return std::pow(N, 2.75 - 3.5 / q) * std::pow(L, -1.5 / q + 0.25);
    return std::pow(N, 1.5) * std::pow(L, 1.5 - 5.0 / q);
}

std::vector<SweepRow> bilinear_sweep(double q, const std::vector<double>& N_list, const std::vector<double>& L_list,
                                     const BilinearOptions& opts) {
    const auto grid = make_grid(opts.geometry, opts.r_max, opts.n);
    const double w = opts.band_width;
    struct Cell {
        double N, L;
    };
    std::vector<Cell> cells;
    for (double N : N_list)
        for (double L : L_list) {
            if (!(N <= L / 4.0))
                throw InvalidArgument("bilinear sweep needs N <= L/4, got N=" + std::to_string(N) +
                                      " L=" + std::to_string(L));
            if (!(L * (1.0 + w) < grid->lambda_max() / 2.0))
                throw ResolutionError("band at L=" + std::to_string(L) + " is not resolvable on this grid");
            cells.push_back({N, L});
        }
    (void)bilinear_constant(1.0, 1.0, q);

    std::vector<SweepRow> rows(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const auto [N, L] = cells[i];
        const auto F = make_datum(DatumSpec::band(N, w), grid);
        const auto G = make_datum(DatumSpec::band(L, w), grid);
        const double top = L * (1.0 + w);
        const auto t = time_samples(0.0, wall_safe_window(*grid, top), opts.time_resolution / (top * top));
        const FreeEvolution ef(F), eg(G);
        const auto sigma = grid->sigma();
        std::vector<cplx> gf, gg;
        std::vector<double> density(t.size());
        for (std::size_t k = 0; k < t.size(); ++k) {
            ef.conjugated_at(t[k], gf);
            eg.conjugated_at(t[k], gg);
            double acc = 0.0;
            for (std::size_t j = 0; j < gf.size(); ++j)
                acc += std::pow(std::abs(gf[j] * gg[j]), q) * std::pow(sigma[j], 2.0 - 2.0 * q);
            density[k] = 4.0 * M_PI * grid->spacing() * acc;
        }
        SweepRow row;
        row.N = N;
        row.L = L;
        row.q = q;
        row.measured = std::pow(trapezoid(t, density), 1.0 / q);
        row.predicted_C = bilinear_constant(N, L, q);
        row.ratio = row.measured / (row.predicted_C * l2_norm(F) * l2_norm(G));
        rows[i] = row;
    });
    return rows;
}

// ------------------------------------------------------------------ improved

ImprovedResult improved_strichartz_check(const RadialField& f, double q, const WindowOptions& opts) {
    if (!(q > 4.0 / 3.0 && q < 5.0 / 3.0)) throw InvalidArgument("improved Strichartz exponent q must lie in (4/3, 5/3)");
    constexpr double kZ = 10.0 / 3.0;
    const double sup_power = kZ - 2.0 * q;
    const double mass_power = 2.0 * q;
    if (std::abs(sup_power + mass_power - kZ) > 1e-15) throw NumericalFailure("improved Strichartz exponents do not close");

    const auto& grid = f.mesh();
    const double lambda = effective_frequency(f, opts.spectral_tol);
    if (lambda >= grid.lambda_max()) throw ResolutionError("datum is not resolved by the grid");
    ImprovedResult out;
    out.horizon = opts.horizon > 0.0 ? opts.horizon : wall_safe_window(grid, lambda);
    const auto t = time_samples(-out.horizon, out.horizon, opts.time_resolution / (lambda * lambda));

    std::vector<double> lhs_density(t.size());
    {
        const FreeEvolution ev(f);
        parallel_for(t.size(), [&](std::size_t k) {
            std::vector<cplx> g;
            ev.conjugated_at(t[k], g);
            lhs_density[k] = conjugated_lp_integral(grid, g, kZ);
        });
    }

    struct Scale {
        double N;
        FreeEvolution ev;
        double bound;
    };
    std::vector<Scale> scales;
    for (double N = 0.5; N <= grid.lambda_max(); N *= 2.0) {
        FreeEvolution ev(lp_project(f, LPBand::band(N)));
        const double bound = std::pow(N, -1.5) * ev.sup_bound();
        scales.push_back({N, std::move(ev), bound});
    }
    // Largest a-priori bound first; a scale whose bound is already beaten
    // cannot hold the supremum and is skipped.
    std::stable_sort(scales.begin(), scales.end(), [](const Scale& x, const Scale& y) { return x.bound > y.bound; });
    const auto sigma = grid.sigma();
    double best = -1.0;
    for (const auto& sc : scales) {
        if (sc.bound < best) continue;
        std::vector<double> peak(t.size());
        parallel_for(t.size(), [&](std::size_t k) {
            std::vector<cplx> g;
            cplx origin;
            sc.ev.conjugated_at(t[k], g, origin);
            double m = std::abs(origin);
            for (std::size_t j = 0; j < g.size(); ++j) m = std::max(m, std::abs(g[j]) / sigma[j]);
            peak[k] = m;
        });
        const double value = std::pow(sc.N, -1.5) * *std::max_element(peak.begin(), peak.end());
        if (value > best) {
            best = value;
            out.argmax_N = sc.N;
        }
    }
    out.sup_term = best;

    out.lhs = trapezoid(t, lhs_density);
    out.rhs = std::pow(out.sup_term, sup_power) * std::pow(l2_norm(f), mass_power);
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

// ------------------------------------------------------------------ Morawetz

std::vector<DatumSpec> morawetz_suite(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<DatumSpec> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double a = 1.5 + 1.5 * unit(rng);
        const double phase = 2.0 * M_PI * unit(rng);
        const double m = 0.1 + 0.9 * unit(rng);
        out.push_back(DatumSpec::gaussian(a, std::polar(1.0, phase)).with_mass(m));
    }
    return out;
}

double morawetz_ratio(const TrajectoryRecord& traj) {
    if (!traj.geometry.is_hyperbolic()) throw GeometryError("Morawetz ratio is defined on hyperbolic trajectories only");
    if (traj.empty() || traj.snapshots.empty()) throw InvalidArgument("Morawetz ratio needs a recorded trajectory");
    const double z = z_integral(traj, traj.step_times.front(), traj.step_times.back());
    if (z == 0.0) return 0.0;
    double mass_sup = 0.0;
    for (double m : traj.mass_series) mass_sup = std::max(mass_sup, m);
    double h1_sup = 0.0;
    for (const auto& u : traj.snapshots) h1_sup = std::max(h1_sup, sobolev_norm(u, 1.0));
    const double denom = std::sqrt(mass_sup) * h1_sup;
    return denom > 0.0 ? z / denom : 0.0;
}

MorawetzDefect morawetz_defect(const TrajectoryRecord& traj, double T_cutoff) {
    if (traj.snapshots.empty()) throw InvalidArgument("Morawetz defect needs recorded snapshots");
    if (!(T_cutoff > 0.0)) throw InvalidArgument("frequency cutoff must be positive");
    if (T_cutoff > traj.snapshots.front().mesh().lambda_max())
        throw ResolutionError("frequency cutoff exceeds the grid's largest mode");
    MorawetzDefect out;
    if (traj.nonlinearity == Nonlinearity::Off) return out;

    const std::size_t K = traj.snapshots.size();
    std::vector<double> du(K), dg(K), fl(K);
    parallel_for(K, [&](std::size_t k) {
        const auto& u = traj.snapshots[k];
        const auto low = lp_project(u, LPBand::low(T_cutoff));
        const auto f_low = lp_project(nonlinearity_of(u), LPBand::low(T_cutoff));
        const auto defect = f_low - nonlinearity_of(low);
        const auto grad = radial_derivative(low);
        const auto w = u.mesh().weights();
        double a = 0.0, b = 0.0, c = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            a += w[j] * std::abs(defect.values[j]) * std::abs(low.values[j]);
            b += w[j] * std::abs(defect.values[j]) * std::abs(grad.values[j]);
            c += w[j] * std::abs(f_low.values[j]) * std::abs(low.values[j]);
        }
        du[k] = a;
        dg[k] = b;
        fl[k] = c;
    });
    out.defect_u = trapezoid(traj.times, du);
    out.defect_grad = trapezoid(traj.times, dg);
    out.flux = trapezoid(traj.times, fl);
    return out;
}

// ------------------------------------------------------ long-time Strichartz

double lts_ratio(const TrajectoryRecord& traj, double N, double T, double r) {
    if (traj.snapshots.empty()) throw InvalidArgument("long-time Strichartz ratio needs recorded snapshots");
    if (!(N > 0.0) || !(T > 0.0)) throw InvalidArgument("N and T must be positive");
    if (N > traj.snapshots.front().mesh().lambda_max()) throw ResolutionError("frequency N exceeds the grid's largest mode");
    if (traj.times.back() < T * (1.0 - 1e-12)) throw InvalidArgument("trajectory does not reach the requested horizon");
    std::vector<double> t, y;
    for (std::size_t k = 0; k < traj.times.size() && traj.times[k] <= T * (1.0 + 1e-12); ++k) t.push_back(traj.times[k]);
    y.resize(t.size());
    parallel_for(t.size(), [&](std::size_t k) {
        const double v = lp_norm(lp_project(traj.snapshots[k], LPBand::high(N)), r);
        y[k] = v * v;
    });
    return std::sqrt(trapezoid(t, y)) / (1.0 + std::sqrt(T / N));
}

// ---------------------------------------------------------- local smoothing

double local_smoothing_ratio(const RadialField& f, double epsilon, double window, double time_resolution) {
    if (!(epsilon > 0.0)) throw InvalidArgument("local smoothing epsilon must be positive");
    if (!(window > 0.0)) throw InvalidArgument("local smoothing window must be positive");
    const double norm = l2_norm(f);
    if (norm == 0.0) return 0.0;
    const auto& grid = f.mesh();
    const double lambda = effective_frequency(f);
    const auto t = time_samples(0.0, window, time_resolution / (lambda * lambda));
    const FreeEvolution ev(fractional_gradient(f, 0.5));

    const auto r = grid.nodes();
    std::vector<double> weight(r.size());
    for (std::size_t j = 0; j < r.size(); ++j)
        weight[j] = 4.0 * M_PI * grid.spacing() * std::pow(1.0 + r[j] * r[j], -0.5 - epsilon);

    std::vector<double> density(t.size());
    parallel_for(t.size(), [&](std::size_t k) {
        std::vector<cplx> g;
        ev.conjugated_at(t[k], g);
        double acc = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) acc += weight[j] * std::norm(g[j]);
        density[k] = acc;
    });
    return std::sqrt(trapezoid(t, density)) / norm;
}

// -------------------------------------------------------- change of variables

double cov_equivalence(const RadialField& datum_h, double t_end, std::size_t samples) {
    if (!datum_h.mesh().geometry().is_hyperbolic()) throw GeometryError("change of variables needs a hyperbolic datum");
    if (!(t_end >= 0.0)) throw InvalidArgument("t_end must be nonnegative");
    if (samples < 2) samples = 2;
    const double norm = l2_norm(datum_h);
    if (norm == 0.0 || t_end == 0.0) return 0.0;
    const FreeEvolution eh(datum_h);
    const FreeEvolution ee(cov_to_euclidean(datum_h, 0.0));
    double worst = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = t_end * static_cast<double>(k) / static_cast<double>(samples - 1);
        const auto diff = eh.at(t) - cov_from_euclidean(ee.at(t), t);
        worst = std::max(worst, l2_norm(diff) / norm);
    }
    return worst;
}

// ---------------------------------------------------------------- scattering

ScatteringDiagnostic scattering_diagnostic(const TrajectoryRecord& traj) {
    if (traj.snapshots.empty()) throw InvalidArgument("scattering diagnostic needs recorded snapshots");
    const std::size_t K = traj.snapshots.size();
    std::vector<RadialField> pulled(K);
    parallel_for(K, [&](std::size_t k) { pulled[k] = schrodinger_propagate(traj.snapshots[k], -traj.times[k]); });
    ScatteringDiagnostic out;
    for (std::size_t k = 1; k < K; ++k) out.cauchy.push_back(l2_norm(pulled[k] - pulled[k - 1]));
    out.u_plus = pulled.back();
    return out;
}

}  // namespace hyperlab
