#pragma once

#include "hyperlab/nls.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hyperlab {

inline constexpr const char* kVersion = "0.1.0";

/// Parsed run configuration.  Keys:
///   geometry (hyperbolic3|euclidean3), r_max, n, dt, t_end,
///   nonlinearity (defocusing|off), record_stride, boundary_tol,
///   datum (gaussian|band|transplant), a, N, width, amplitude, mass, seed.
struct RunConfig {
    SimConfig sim;
    std::uint64_t seed = 0;
    /// Non-fatal notes, e.g. duplicate keys (last one wins).
    std::vector<std::string> warnings;

    /// Every key with its resolved value, in a fixed order.
    std::vector<std::pair<std::string, std::string>> resolved() const;
};

/// "key = value" lines, '#' comments.  Throws ParseError (with line number),
/// UnknownKey, or InvalidArgument when the resolved config fails validation.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::uint64_t seed = 0;
    std::string version = kVersion;
    double duration_s = 0.0;
    std::vector<std::string> warnings;
};

/// 17 significant digits, the CSV number format.
std::string format_number(double x);

/// Writes rows "t,mass,energy,z_density" for every step.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& traj);

/// Run one CLI invocation (argv[0] is the program name).  Returns the exit
/// code: 0 success, 2 validation error, 3 numerical failure.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hyperlab
