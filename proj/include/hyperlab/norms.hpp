#pragma once

#include "hyperlab/geometry.hpp"
#include "hyperlab/nls.hpp"

#include <limits>
#include <utility>
#include <vector>

namespace hyperlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Strichartz exponent pair (q, r); q may be infinite.
struct AdmissiblePair {
    double q = 2.0;
    double r = 6.0;

    double inv_q() const { return std::isinf(q) ? 0.0 : 1.0 / q; }
    double inv_r() const { return 1.0 / r; }
};

/// Euclidean: 2/q + 3/r = 3/2.  Hyperbolic: the triangle 2/q + 3/r >= 3/2
/// inside 1/q in [0,1/2], 1/r in (0,1/2), plus the corner (inf, 2).
/// Throws InvalidArgument for q < 2 or r < 2 or non-finite r.
bool is_admissible(double q, double r, Geometry geometry);

/// Diagnostic pair list approximating the S^0 supremum.
std::vector<AdmissiblePair> default_strichartz_pairs(Geometry geometry);

/// L^q_t L^r_x over the recorded snapshots (trapezoid in time, max for q = inf).
double spacetime_norm(const TrajectoryRecord& traj, double q, double r);
/// Max of spacetime_norm over the given pairs.
double strichartz_diagnostic(const TrajectoryRecord& traj, const std::vector<AdmissiblePair>& pairs);

/// int_{t0}^{t1} int |u|^{10/3} dmu dt from the per-step density.
double z_integral(const TrajectoryRecord& traj, double t0, double t1);
/// ||u||_{L^{10/3}_{t,x}([t0,t1])}.
double z_norm(const TrajectoryRecord& traj, double t0, double t1);
double z_norm(const TrajectoryRecord& traj);

/// sqrt(sum (pi/r_max) 4 pi lambda^2 (1 + lambda^2 + rho^2)^s |F|^2), s in [0, 2].
double sobolev_norm(const RadialField& u, double s);

struct LocalConstancyPartition {
    /// Interior times where the cumulative Z-integral crosses 1, 2, ...
    std::vector<double> breakpoints;
    /// int |u|^{10/3} over each interval (breakpoints.size() + 1 entries);
    /// the last entry is the partial remainder.
    std::vector<double> z_mass;

    std::size_t full_intervals() const { return breakpoints.size(); }
};

/// Greedy left-to-right split where the cumulative Z-integral reaches 1.
/// A zero solution gives a single interval and no interior breakpoints.
LocalConstancyPartition partition_local_constancy(const TrajectoryRecord& traj);
/// Same on a bare density series (time stamps must be increasing).
LocalConstancyPartition partition_local_constancy(const std::vector<double>& times,
                                                  const std::vector<double>& density);

}  // namespace hyperlab
