#pragma once

#include "hyperlab/geometry.hpp"
#include "hyperlab/nls.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hyperlab {

/// Least-squares fit log y = log constant + exponent * log x.
struct FitResult {
    double exponent = 0.0;
    double constant = 0.0;
    /// Root-mean-square misfit in log space.
    double residual = 0.0;
};

FitResult fit_power_law(std::span<const double> x, std::span<const double> y);

/// Smallest lambda_m above which at most `tol` of the spectral mass lies.
double effective_frequency(const RadialField& f, double tol = 1e-10);
/// Wall-safe time horizon r_max / (4 lambda) for content up to frequency lambda.
double wall_safe_window(const RadialGrid& grid, double lambda);

// ---------------------------------------------------------------- dispersive

struct DispersiveOptions {
    double r_max = 80.0;
    std::size_t n = 8192;
    /// Tail-mass threshold for the wall check at each sample time.
    double boundary_tol = 1e-4;
};

struct DispersiveResult {
    FitResult fit;
    double predicted_exponent = 0.0;
    std::vector<double> times;
    /// ||e^{it Delta} f||_{p'} at each time.
    std::vector<double> norms;
    /// ||f||_p.
    double datum_norm = 0.0;
    double max_tail = 0.0;
};

/// -3 (1/p - 1/2).
double dispersive_exponent(double p);

/// Fit ||e^{it Delta} f||_{p'} against t.  p in [6/5, 2]; at least six
/// sample times in [1, inf).  Throws WallContamination at the first sample
/// whose tail mass exceeds the threshold.
DispersiveResult dispersive_fit(const DatumSpec& datum, Geometry geometry, double p,
                                const std::vector<double>& times, const DispersiveOptions& opts = {});

struct DispersiveComparison {
    /// max_k t_k ||e^{it_k Delta} f||_{p'} / ||f||_p on the Euclidean grid.
    double euclidean_constant = 0.0;
    std::vector<double> times;
    /// Hyperbolic ||e^{it Delta} f||_{p'} / ||f||_p.
    std::vector<double> hyperbolic_ratio;
    /// euclidean_constant * t^{exponent}.
    std::vector<double> bound;
    bool satisfied = false;
};

DispersiveComparison compare_dispersive(const DatumSpec& datum, double p, const std::vector<double>& times,
                                        const DispersiveOptions& opts = {});

// ------------------------------------------------------------------ bilinear

/// C(N, L) for radial frequency-separated data, q > 4/3.
double bilinear_constant(double N, double L, double q);

struct SweepRow {
    double N = 0.0;
    double L = 0.0;
    double q = 0.0;
    double measured = 0.0;
    double predicted_C = 0.0;
    double ratio = 0.0;
};

struct BilinearOptions {
    Geometry geometry = Geometry::hyperbolic();
    double r_max = 40.0;
    std::size_t n = 4096;
    double band_width = 0.25;
    /// Time step is resolution / (L (1 + band_width))^2.
    double time_resolution = 0.25;
};

/// ||e^{it Delta} F_N e^{it Delta} G_L||_{L^q_{t,x}} on [0, T], T the
/// wall-safe window of the high band, for unit-mass band data.
std::vector<SweepRow> bilinear_sweep(double q, const std::vector<double>& N_list, const std::vector<double>& L_list,
                                     const BilinearOptions& opts = {});

// ------------------------------------------------------------------ improved

struct WindowOptions {
    /// Spectral tail fraction defining the effective frequency.
    double spectral_tol = 1e-10;
    /// Time step is resolution / lambda_eff^2.
    double time_resolution = 1.0 / 8.0;
    /// Window [-T, T]; T <= 0 selects the wall-safe window.
    double horizon = 0.0;
};

struct ImprovedResult {
    double lhs = 0.0;          // ||e^{it Delta} f||_{10/3}^{10/3} over the window
    double sup_term = 0.0;     // sup_N ||N^{-3/2} e^{it Delta} P_N f||_inf
    double rhs = 0.0;          // sup_term^{10/3 - 2q} ||f||_2^{2q}
    double ratio = 0.0;
    double argmax_N = 0.0;
    double horizon = 0.0;
};

/// q in (4/3, 5/3).
ImprovedResult improved_strichartz_check(const RadialField& f, double q, const WindowOptions& opts = {});

// ------------------------------------------------------------------ Morawetz

/// Seeded suite of Gaussian data for the Morawetz sweep: widths in [1.5, 3],
/// masses in [0.1, 1], random global phase.
std::vector<DatumSpec> morawetz_suite(std::uint64_t seed, std::size_t count);

/// Z-norm^{10/3} / (sup_t ||u||_2 * sup_t ||u||_{H^1}); hyperbolic only.
double morawetz_ratio(const TrajectoryRecord& traj);

struct MorawetzDefect {
    double defect_u = 0.0;     // ||N conj(P_{<=T} u)||_{L^1_{t,x}}
    double defect_grad = 0.0;  // ||N conj(d_r P_{<=T} u)||_{L^1_{t,x}}
    double flux = 0.0;         // ||P_{<=T}(|u|^{4/3} u) conj(P_{<=T} u)||_{L^1_{t,x}}
};

/// Frequency-localized nonlinearity defect
/// N = P_{<=T}(|u|^{4/3}u) - |P_{<=T}u|^{4/3} P_{<=T}u over the snapshots.
MorawetzDefect morawetz_defect(const TrajectoryRecord& traj, double T_cutoff);

// ------------------------------------------------------ long-time Strichartz

/// ||P_{>=N} u||_{L^2_t L^r_x([0,T])} / (1 + sqrt(T/N)).
double lts_ratio(const TrajectoryRecord& traj, double N, double T, double r = 6.0);

// ---------------------------------------------------------- local smoothing

/// ||<x>^{-1/2-eps} |nabla|^{1/2} e^{it Delta} f||_{L^2([0,window] x M)} / ||f||_2.
double local_smoothing_ratio(const RadialField& f, double epsilon, double window, double time_resolution = 1.0 / 8.0);

// -------------------------------------------------------- change of variables

/// Max over sample times in [0, t_end] of the relative L^2 distance between
/// e^{it Delta_H} u and the transported Euclidean evolution.
double cov_equivalence(const RadialField& datum_h, double t_end, std::size_t samples = 21);

// ---------------------------------------------------------------- scattering

struct ScatteringDiagnostic {
    /// ||v_{k+1} - v_k||_2 for the pull-backs v_k = e^{-it_k Delta} u(t_k).
    std::vector<double> cauchy;
    RadialField u_plus;
};

ScatteringDiagnostic scattering_diagnostic(const TrajectoryRecord& traj);

}  // namespace hyperlab
