#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpde/analysis.hpp"
#include "dpde/problem.hpp"
#include "dpde/solver.hpp"

namespace dpde {

/// A validated run description loaded from a sectioned key = value file.
struct RunConfig {
    std::string name;
    std::filesystem::path source;
    int dimension = 1;

    DelayProblem1D problem_1d;  // dimension == 1
    DelayProblem2D problem_2d;  // dimension == 2
    std::optional<Grid1D> grid_1d;
    std::optional<Grid2D> grid_2d;

    int cells_x = 0;
    int cells_y = 0;
    std::optional<double> dt;          // exactly one of dt / cfl_safety
    std::optional<double> cfl_safety;
    Scheme scheme = Scheme::LaxFriedrichs;
    int threads = 1;

    std::vector<double> snapshot_times;
    std::filesystem::path output_dir = "output";
    ErrorNorm norm = ErrorNorm::MaxAbs;

    std::vector<double> dx_list{1.0 / 100, 1.0 / 200, 1.0 / 400, 1.0 / 800};
    std::vector<int> dt_divisors{2, 4, 8, 16};

    double final_time() const {
        return dimension == 1 ? problem_1d.final_time : problem_2d.final_time;
    }
};

/// Throws ConfigError; expression and grid errors are reported as
/// ConfigError with the offending key and line.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::string_view text, std::string source_name = "<string>");

/// Reads a constant such as "0.5" or "1/100".
double parse_constant(std::string_view text);

Scheme parse_scheme(std::string_view text);
ErrorNorm parse_norm(std::string_view text);

}  // namespace dpde
