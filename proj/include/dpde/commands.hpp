#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dpde/config.hpp"

namespace dpde {

enum class ExitStatus : int {
    Ok = 0,
    Failure = 1,
    ConfigFailure = 2,
    NumericalFailure = 3,
};

/// Command-line values that take precedence over the config file.
struct CommandOverrides {
    std::optional<std::filesystem::path> output_dir;
    std::optional<Scheme> scheme;
    std::optional<int> threads;
    std::optional<std::vector<double>> dx_list;
    std::optional<std::vector<int>> dt_divisors;
    std::optional<ErrorNorm> norm;
};

/// Maps an error kind to the process exit status.
ExitStatus exit_status_for(ErrorKind kind) noexcept;

/// Writes u_t<time>.csv per snapshot time and manifest.txt into the output
/// directory. The manifest is written on every path that reaches the solver.
ExitStatus cmd_solve(const RunConfig& config, const CommandOverrides& overrides,
                     std::ostream& diag);

/// Writes error_table.csv, observed_orders.csv and manifest.txt.
ExitStatus cmd_converge(const RunConfig& config, const CommandOverrides& overrides,
                        std::ostream& diag);

/// Loads the file first; load errors are reported on diag as config failures.
ExitStatus run_solve(const std::filesystem::path& config_path, const CommandOverrides& overrides,
                     std::ostream& diag);
ExitStatus run_converge(const std::filesystem::path& config_path,
                        const CommandOverrides& overrides, std::ostream& diag);

}  // namespace dpde
