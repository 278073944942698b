#pragma once

#include "hyperlab/geometry.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace hyperlab {

enum class Nonlinearity { Defocusing, Off };

/// Reproducible initial data.
///  - Gaussian(a): amplitude * exp(-r^2 / a^2).
///  - SpectralBand(N, width): raised-cosine envelope of the sine spectrum
///    over [N(1-width), N(1+width)], scaled to unit mass, times amplitude.
///  - Transplant(a, N): the unit-mass Euclidean Gaussian exp(-r^2/a^2)
///    carried into the hyperbolic grid by T_N, times amplitude.
struct DatumSpec {
    enum class Family { Gaussian, SpectralBand, Transplant };
    Family family = Family::Gaussian;
    double a = 1.0;          // Gaussian / transplant profile width
    double N = 1.0;          // band centre / transplant scale
    double width = 0.25;     // relative band half-width
    cplx amplitude{1.0, 0.0};
    /// When set, the datum is rescaled to this mass after construction.
    std::optional<double> mass;

    static DatumSpec gaussian(double a, cplx amplitude = 1.0);
    static DatumSpec band(double N, double width = 0.25, cplx amplitude = 1.0);
    static DatumSpec transplant(double a, double N, cplx amplitude = 1.0);
    DatumSpec with_mass(double m) const;
};

RadialField make_datum(const DatumSpec& spec, GridPtr grid);

struct SimConfig {
    Geometry geometry = Geometry::hyperbolic();
    double r_max = 40.0;
    std::size_t n = 4096;
    double dt = 1e-3;
    double t_end = 1.0;
    Nonlinearity nonlinearity = Nonlinearity::Defocusing;
    std::size_t record_stride = 10;
    double boundary_tol = 1e-8;
    DatumSpec datum;

    /// Number of steps t_end/dt; throws InvalidArgument when not an integer.
    std::size_t step_count() const;
    void validate() const;
};

/// Time series of one evolution.  The per-step series (step_times, mass,
/// energy, z_density) have one entry per step including t = 0; snapshots
/// are kept every record_stride steps plus the final state.
struct TrajectoryRecord {
    Geometry geometry = Geometry::hyperbolic();
    Nonlinearity nonlinearity = Nonlinearity::Defocusing;
    double dt = 0.0;
    std::vector<double> step_times;
    std::vector<double> mass_series;
    std::vector<double> energy_series;
    /// int |u|^{10/3} dmu at every step.
    std::vector<double> z_density;
    std::vector<double> times;
    std::vector<RadialField> snapshots;

    bool empty() const { return step_times.empty(); }
};

/// M(u) = <u, u>.
double mass(const RadialField& u);
/// E(u) = 1/2 <|nabla| u, |nabla| u> + 3/10 int |u|^{10/3}.
double energy(const RadialField& u);
/// int |u|^{10/3} dmu.
double z_density(const RadialField& u);

/// One Strang step: half linear flow, exact nonlinear phase, half linear flow.
RadialField strang_step(const RadialField& u, double dt, Nonlinearity nonlinearity);

/// Evolve from an explicit initial field.
TrajectoryRecord evolve(const RadialField& u0, const SimConfig& cfg);
TrajectoryRecord evolve(const SimConfig& cfg);

/// Rescale u to the requested mass (u must be nonzero).
RadialField with_mass(RadialField u, double target);

}  // namespace hyperlab
