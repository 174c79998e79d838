#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include "twave/run_config.hpp"

namespace twave {

/// Exit codes of the command-line front end.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeFailure = 3;

/// Runs the configured solver (Newton, stabilized or classical) from a seed.
SolveResult solve_with(const RunConfig& config, const Problem& problem, const StabilizingFactor* factor,
                       const Field& seed);

/// Each command writes its files under `out` and returns the main report.
/// Errors are thrown; run_command maps them to exit codes.
Json cmd_solve(const RunConfig& config, const std::filesystem::path& out);
Json cmd_spectrum(const RunConfig& config, const std::filesystem::path& out);
Json cmd_continue(const RunConfig& config, const std::filesystem::path& out);
Json cmd_orbital(const RunConfig& config, const std::filesystem::path& out);

/// Loads the configuration, dispatches the command and converts exceptions
/// into exit codes, printing one line per error to `err`. An empty `out`
/// means the directory named in the configuration.
int run_command(const std::string& command, const std::function<RunConfig()>& load,
                const std::filesystem::path& out, std::ostream& log, std::ostream& err);

/// Mean of the field (the pinned zero mode) and the relative defect of the
/// z-reflection symmetry u(x, -z) = u(x, z) on a 2D field.
double mean_value(const Field& u);
double z_reflection_defect(const Field& u);

}  // namespace twave
