#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpde/commands.hpp"

namespace {

std::vector<double> parse_numbers(const std::vector<std::string>& items) {
    std::vector<double> out;
    for (const auto& item : items) out.push_back(dpde::parse_constant(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-difference solver for transport equations with a spatial delay"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string scheme;
    int threads = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "Run configuration file")->required();
        sub->add_option("--out", out_dir, "Output directory (overrides [output] directory)");
        sub->add_option("--scheme", scheme, "lf or leapfrog (overrides the config)");
        sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    };

    CLI::App* solve = app.add_subcommand("solve", "March one problem and write snapshot CSVs");
    add_common(solve);

    std::vector<std::string> dx_list;
    std::vector<int> dt_div;
    std::string norm;
    CLI::App* converge =
        app.add_subcommand("converge", "Build a double-mesh error table for a 1D problem");
    add_common(converge);
    converge->add_option("--dx-list", dx_list, "Column spacings, e.g. 1/100 1/200")
        ->delimiter(',');
    converge->add_option("--dt-div", dt_div, "Row divisors d with dt = dx/d")->delimiter(',');
    converge->add_option("--norm", norm, "max or l2");

    CLI11_PARSE(app, argc, argv);

    dpde::CommandOverrides overrides;
    try {
        if (!out_dir.empty()) overrides.output_dir = out_dir;
        if (!scheme.empty()) overrides.scheme = dpde::parse_scheme(scheme);
        if (threads > 0) overrides.threads = threads;
        if (!dx_list.empty()) overrides.dx_list = parse_numbers(dx_list);
        if (!dt_div.empty()) overrides.dt_divisors = dt_div;
        if (!norm.empty()) overrides.norm = dpde::parse_norm(norm);
    } catch (const dpde::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(dpde::ExitStatus::ConfigFailure);
    }

    const dpde::ExitStatus status = solve->parsed()
                                        ? dpde::run_solve(config_path, overrides, std::cerr)
                                        : dpde::run_converge(config_path, overrides, std::cerr);
    return static_cast<int>(status);
}
