#include "hyperlab/norms.hpp"

#include "hyperlab/errors.hpp"
#include "hyperlab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hyperlab {

bool is_admissible(double q, double r, Geometry geometry) {
    if (std::isnan(q) || std::isnan(r) || q < 2.0 || r < 2.0)
        throw InvalidArgument("Strichartz exponents must satisfy q >= 2 and r >= 2");
    const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
    const double ir = std::isinf(r) ? 0.0 : 1.0 / r;
    const double lhs = 2.0 * iq + 3.0 * ir;
    constexpr double eps = 1e-12;
    if (!geometry.is_hyperbolic()) return std::abs(lhs - 1.5) <= eps && ir > 0.0;
    if (iq == 0.0 && ir == 0.5) return true;
    const bool in_box = iq > 0.0 && iq <= 0.5 && ir > 0.0 && ir < 0.5;
    return in_box && lhs >= 1.5 - eps;
}

std::vector<AdmissiblePair> default_strichartz_pairs(Geometry geometry) {
    std::vector<AdmissiblePair> pairs{{kInf, 2.0}, {2.0, 6.0}, {4.0, 3.0}, {10.0 / 3.0, 10.0 / 3.0}};
    if (geometry.is_hyperbolic()) {
        pairs.push_back({2.0, 4.0});
        pairs.push_back({2.0, 3.0});
    }
    return pairs;
}

double spacetime_norm(const TrajectoryRecord& traj, double q, double r) {
    if (traj.snapshots.empty()) throw InvalidArgument("spacetime norm of an empty trajectory");
    if (!(q >= 1.0) || !(r >= 1.0)) throw InvalidArgument("mixed-norm exponents must be at least 1");
    std::vector<double> spatial(traj.snapshots.size());
    std::transform(traj.snapshots.begin(), traj.snapshots.end(), spatial.begin(),
                   [r](const RadialField& u) { return lp_norm(u, r); });
    if (std::isinf(q)) return *std::max_element(spatial.begin(), spatial.end());
    double acc = 0.0;
    for (std::size_t k = 1; k < spatial.size(); ++k)
        acc += 0.5 * (traj.times[k] - traj.times[k - 1]) * (std::pow(spatial[k], q) + std::pow(spatial[k - 1], q));
    return std::pow(acc, 1.0 / q);
}

double strichartz_diagnostic(const TrajectoryRecord& traj, const std::vector<AdmissiblePair>& pairs) {
    double best = 0.0;
    for (const auto& p : pairs) best = std::max(best, spacetime_norm(traj, p.q, p.r));
    return best;
}

namespace {

// Integral of the piecewise-linear interpolant of (times, density) over [a, b].
double integrate_linear(const std::vector<double>& times, const std::vector<double>& density, double a, double b) {
    double acc = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double t0 = times[k - 1];
        const double t1 = times[k];
        const double lo = std::max(a, t0);
        const double hi = std::min(b, t1);
        if (hi <= lo) continue;
        const double slope = (density[k] - density[k - 1]) / (t1 - t0);
        const double f_lo = density[k - 1] + slope * (lo - t0);
        const double f_hi = density[k - 1] + slope * (hi - t0);
        acc += 0.5 * (hi - lo) * (f_lo + f_hi);
    }
    return acc;
}

}  // namespace

double z_integral(const TrajectoryRecord& traj, double t0, double t1) {
    if (traj.step_times.empty()) throw InvalidArgument("Z-norm of an empty trajectory");
    if (t1 < t0) throw InvalidArgument("Z-norm interval is reversed");
    constexpr double slack = 1e-12;
    if (t0 < traj.step_times.front() - slack || t1 > traj.step_times.back() + slack)
        throw InvalidArgument("Z-norm interval leaves the recorded span");
    return integrate_linear(traj.step_times, traj.z_density, t0, t1);
}

double z_norm(const TrajectoryRecord& traj, double t0, double t1) {
    return std::pow(z_integral(traj, t0, t1), 0.3);
}

double z_norm(const TrajectoryRecord& traj) {
    if (traj.step_times.empty()) throw InvalidArgument("Z-norm of an empty trajectory");
    return z_norm(traj, traj.step_times.front(), traj.step_times.back());
}

double sobolev_norm(const RadialField& u, double s) {
    if (!(s >= 0.0 && s <= 2.0)) throw InvalidArgument("Sobolev order must lie in [0, 2]");
    const SpectralField F = forward(u);
    const auto lambda = F.modes();
    const double shift = u.mesh().geometry().spectral_shift();
    double acc = 0.0;
    for (std::size_t m = 0; m < lambda.size(); ++m) {
        const double l2 = lambda[m] * lambda[m];
        acc += l2 * std::pow(1.0 + l2 + shift, s) * std::norm(F.coeffs[m]);
    }
    return std::sqrt(4.0 * std::numbers::pi * u.mesh().dual().weight * acc);
}

LocalConstancyPartition partition_local_constancy(const std::vector<double>& times,
                                                  const std::vector<double>& density) {
    if (times.size() != density.size()) throw InvalidArgument("time and density series differ in length");
    LocalConstancyPartition out;
    double cumulative = 0.0;   // integral since the last breakpoint
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double t0 = times[k - 1];
        const double dt = times[k] - t0;
        if (!(dt > 0.0)) throw InvalidArgument("time stamps must be strictly increasing");
        const double d0 = density[k - 1];
        const double slope = (density[k] - d0) / dt;
        double start = 0.0;  // offset into this step already consumed
        for (;;) {
            // integral of the linear interpolant over [t0 + start, t0 + tau]
            const double fs = d0 + slope * start;
            const double rest = 0.5 * (dt - start) * (fs + density[k]);
            if (cumulative + rest < 1.0) {
                cumulative += rest;
                break;
            }
            // solve fs x + slope x^2 / 2 = need for x in (0, dt - start]
            const double need = 1.0 - cumulative;
            double x;
            if (std::abs(slope) * (dt - start) < 1e-14 * std::max(fs, 1e-300)) {
                x = need / fs;
            } else {
                const double disc = fs * fs + 2.0 * slope * need;
                x = 2.0 * need / (fs + std::sqrt(std::max(disc, 0.0)));
            }
            x = std::min(x, dt - start);
            start += x;
            out.breakpoints.push_back(t0 + start);
            out.z_mass.push_back(1.0);
            cumulative = 0.0;
        }
    }
    out.z_mass.push_back(cumulative);
    return out;
}

LocalConstancyPartition partition_local_constancy(const TrajectoryRecord& traj) {
    return partition_local_constancy(traj.step_times, traj.z_density);
}

}  // namespace hyperlab
