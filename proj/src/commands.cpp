#include "dpde/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <utility>

#include "dpde/format.hpp"

namespace dpde {

namespace fs = std::filesystem;

namespace {

std::string one_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

class Manifest {
public:
    void set(const std::string& key, std::string value) {
        for (auto& [k, v] : entries_) {
            if (k == key) {
                v = std::move(value);
                return;
            }
        }
        entries_.emplace_back(key, std::move(value));
    }

    void write(const fs::path& dir) const {
        std::ofstream out(dir / "manifest.txt", std::ios::binary);
        for (const auto& [k, v] : entries_) out << k << '=' << one_line(v) << '\n';
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for " + path.string());
}

std::string csv_text(const Field1D& field, const Grid1D& grid) {
    std::string text = "x,u\n";
    for (int j = 0; j <= grid.num_cells(); ++j) {
        text += format_shortest(grid.node_position(j));
        text += ',';
        text += format_shortest(field.values[j]);
        text += '\n';
    }
    return text;
}

std::string csv_text(const Field2D& field, const Grid2D& grid) {
    std::string text = "x,y,u\n";
    for (int i = 0; i <= grid.x.num_cells(); ++i) {
        const std::string x = format_shortest(grid.x.node_position(i)) + ',';
        for (int j = 0; j <= grid.y.num_cells(); ++j) {
            text += x;
            text += format_shortest(grid.y.node_position(j));
            text += ',';
            text += format_shortest(field(i, j));
            text += '\n';
        }
    }
    return text;
}

// Writes the requested times that the history reached; returns file names.
template <class Field, class Grid>
std::vector<std::string> write_snapshots(const SolutionHistory<Field>& history, const Grid& grid,
                                         const std::vector<double>& times, long planned_steps,
                                         const fs::path& dir) {
    std::vector<std::string> files;
    for (double t : times) {
        const long step = std::clamp(std::lround(t / history.dt_used), 0L, planned_steps);
        const auto it = std::find_if(history.snapshots.begin(), history.snapshots.end(),
                                     [&](const auto& s) { return s.step == step; });
        if (it == history.snapshots.end()) continue;
        const std::string name = "u_t" + format_shortest(t) + ".csv";
        if (std::find(files.begin(), files.end(), name) != files.end()) continue;
        write_file(dir / name, csv_text(it->field, grid));
        files.push_back(name);
    }
    return files;
}

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

std::string status_name(ExitStatus s) {
    switch (s) {
        case ExitStatus::Ok: return "ok";
        case ExitStatus::ConfigFailure: return "config_error";
        case ExitStatus::NumericalFailure: return "numerical_abort";
        case ExitStatus::Failure: break;
    }
    return "error";
}

void check_report(const ValidationReport& report, std::ostream& diag) {
    for (const auto& m : report.messages) {
        diag << (report.verdict == Verdict::Fatal ? "error: " : "warning: ") << m << '\n';
    }
    if (report.verdict == Verdict::Fatal) {
        throw ConfigError("equation", "", 0, join(report.messages, "; "));
    }
}

void record_cfl(Manifest& manifest, const CflReport& cfl, Scheme scheme, std::ostream& diag) {
    manifest.set("courant", format_shortest(cfl.courant_number));
    manifest.set("cfl_admissible", cfl.admissible() ? "true" : "false");
    if (!cfl.admissible() && scheme == Scheme::LaxFriedrichs) {
        diag << "warning: Courant number " << format_sig6(cfl.courant_number)
             << " exceeds 1; the growth guard will stop the run if it diverges\n";
    }
}

struct SolveRun {
    const RunConfig& config;
    Scheme scheme;
    int workers;
    fs::path dir;
    Manifest& manifest;
    std::ostream& diag;

    std::vector<double> times() const {
        if (config.snapshot_times.empty()) return {config.final_time()};
        return config.snapshot_times;
    }

    template <class Problem, class Grid, class CflFn, class ReportFn, class SolveFn>
    void run(const Problem& problem, const Grid& grid, CflFn max_dt, ReportFn report,
             SolveFn solve) {
        check_report(validate(problem, grid, problem.final_time), diag);
        const double dt = config.dt ? *config.dt : max_dt(problem, grid, *config.cfl_safety, scheme);
        const TimeStepPlan plan = plan_time_steps(problem.final_time, dt);
        manifest.set("dt_used", format_shortest(plan.dt));
        manifest.set("steps", std::to_string(plan.steps));
        record_cfl(manifest, report(problem, grid, plan.dt, scheme), scheme, diag);

        SolveOptions options;
        options.scheme = scheme;
        options.snapshot_times = times();
        options.workers = workers;
        try {
            const auto history = solve(problem, grid, dt, options);
            manifest.set("snapshot_files",
                         join(write_snapshots(history, grid, options.snapshot_times, plan.steps, dir),
                              ","));
        } catch (const NumericalAbort& abort) {
            manifest.set("abort_step", std::to_string(abort.step()));
            std::vector<std::string> files;
            using History = decltype(solve(problem, grid, dt, options));
            if (const auto* partial = std::get_if<History>(&abort.partial())) {
                files = write_snapshots(*partial, grid, options.snapshot_times,
                                        partial->steps_taken, dir);
            }
            manifest.set("snapshot_files", join(files, ","));
            throw;
        }
    }
};

template <class Body>
ExitStatus guarded(Manifest& manifest, std::ostream& diag, const fs::path& dir, Body&& body) {
    const auto start = std::chrono::steady_clock::now();
    ExitStatus status = ExitStatus::Ok;
    try {
        body();
    } catch (const Error& e) {
        status = exit_status_for(e.kind());
        manifest.set("error", std::string(to_string(e.kind())) + ": " + e.what());
        diag << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    } catch (const std::exception& e) {
        status = ExitStatus::Failure;
        manifest.set("error", e.what());
        diag << "error: " << e.what() << '\n';
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    manifest.set("status", status_name(status));
    manifest.set("wall_time_s", format_sig6(elapsed.count()));
    try {
        manifest.write(dir);
    } catch (const std::exception& e) {
        diag << "error: cannot write manifest: " << e.what() << '\n';
        if (status == ExitStatus::Ok) status = ExitStatus::Failure;
    }
    return status;
}

fs::path prepare_dir(const RunConfig& config, const CommandOverrides& overrides) {
    fs::path dir = overrides.output_dir.value_or(config.output_dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

ExitStatus exit_status_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ConfigError:
        case ErrorKind::ParseError:
        case ErrorKind::UnknownVariable:
        case ErrorKind::IncommensurateDelay:
            return ExitStatus::ConfigFailure;
        case ErrorKind::BlowUp:
        case ErrorKind::Unstable:
        case ErrorKind::StrictCflViolation:
            return ExitStatus::NumericalFailure;
        default:
            return ExitStatus::Failure;
    }
}

ExitStatus cmd_solve(const RunConfig& config, const CommandOverrides& overrides,
                     std::ostream& diag) {
    const fs::path dir = prepare_dir(config, overrides);
    const Scheme scheme = overrides.scheme.value_or(config.scheme);
    const int workers = overrides.threads.value_or(config.threads);

    Manifest manifest;
    manifest.set("status", "running");
    manifest.set("error", "");
    manifest.set("command", "solve");
    manifest.set("name", config.name);
    manifest.set("scheme", std::string(to_string(scheme)));
    manifest.set("dimension", std::to_string(config.dimension));
    if (config.dimension == 1 && config.grid_1d) {
        manifest.set("J", std::to_string(config.grid_1d->num_cells()));
        manifest.set("dx", format_shortest(config.grid_1d->cell_width()));
        manifest.set("m0", std::to_string(config.grid_1d->delay_offset()));
    } else if (config.grid_2d) {
        manifest.set("J", std::to_string(config.grid_2d->x.num_cells()));
        manifest.set("dx", format_shortest(config.grid_2d->x.cell_width()));
        manifest.set("m0", std::to_string(config.grid_2d->x.delay_offset()));
        manifest.set("Jy", std::to_string(config.grid_2d->y.num_cells()));
        manifest.set("dy", format_shortest(config.grid_2d->y.cell_width()));
        manifest.set("q0", std::to_string(config.grid_2d->y.delay_offset()));
    }
    manifest.set("t_final", format_shortest(config.final_time()));
    for (const char* key : {"dt_used", "steps", "courant", "cfl_admissible", "abort_step",
                            "snapshot_files"}) {
        manifest.set(key, "");
    }

    return guarded(manifest, diag, dir, [&] {
        SolveRun run{config, scheme, workers, dir, manifest, diag};
        if (config.dimension == 1) {
            if (!config.grid_1d) throw ConfigError("discretization", "cells", 0, "no grid");
            run.run(config.problem_1d, *config.grid_1d,
                    [](const DelayProblem1D& p, const Grid1D& g, double s, Scheme sc) {
                        return cfl_max_dt_1d(p, g, s, sc);
                    },
                    [](const DelayProblem1D& p, const Grid1D& g, double dt, Scheme sc) {
                        return cfl_report_1d(p, g, dt, sc);
                    },
                    [](const DelayProblem1D& p, const Grid1D& g, double dt,
                       const SolveOptions& o) { return solve_1d(p, g, dt, o); });
        } else {
            if (!config.grid_2d) throw ConfigError("discretization", "cells", 0, "no grid");
            run.run(config.problem_2d, *config.grid_2d,
                    [](const DelayProblem2D& p, const Grid2D& g, double s, Scheme sc) {
                        return cfl_max_dt_2d(p, g, s, sc);
                    },
                    [](const DelayProblem2D& p, const Grid2D& g, double dt, Scheme sc) {
                        return cfl_report_2d(p, g, dt, sc);
                    },
                    [](const DelayProblem2D& p, const Grid2D& g, double dt,
                       const SolveOptions& o) { return solve_2d(p, g, dt, o); });
        }
    });
}

ExitStatus cmd_converge(const RunConfig& config, const CommandOverrides& overrides,
                        std::ostream& diag) {
    const fs::path dir = prepare_dir(config, overrides);
    const Scheme scheme = overrides.scheme.value_or(config.scheme);
    const int workers = overrides.threads.value_or(config.threads);
    const ErrorNorm norm = overrides.norm.value_or(config.norm);
    const std::vector<double> dx_list = overrides.dx_list.value_or(config.dx_list);
    const std::vector<int> divisors = overrides.dt_divisors.value_or(config.dt_divisors);

    Manifest manifest;
    manifest.set("status", "running");
    manifest.set("error", "");
    manifest.set("command", "converge");
    manifest.set("name", config.name);
    manifest.set("scheme", std::string(to_string(scheme)));
    manifest.set("norm", std::string(to_string(norm)));
    manifest.set("alpha", format_shortest(config.problem_1d.delay));
    manifest.set("t_final", format_shortest(config.final_time()));
    manifest.set("rows", std::to_string(divisors.size()));
    manifest.set("columns", std::to_string(dx_list.size()));
    manifest.set("files", "");

    return guarded(manifest, diag, dir, [&] {
        if (config.dimension != 1) {
            throw ConfigError("problem", "dimension", 0, "convergence tables are computed in 1D only");
        }
        check_report(validate(config.problem_1d, *config.grid_1d, config.final_time()), diag);
        const ErrorTable table = convergence_table(config.problem_1d, scheme, dx_list, divisors,
                                                   norm, workers, config.name);

        std::string errors = "dt_rule";
        std::string orders = "dt_rule";
        for (std::size_t c = 0; c < table.columns(); ++c) {
            errors += ',' + format_spacing(table.dx_values[c]);
            if (c + 1 < table.columns()) {
                orders += ',' + format_spacing(table.dx_values[c]) + "->" +
                          format_spacing(table.dx_values[c + 1]);
            }
        }
        errors += '\n';
        orders += '\n';
        const auto order_values = table.orders();
        for (std::size_t r = 0; r < table.rows(); ++r) {
            const std::string label = "dx/" + std::to_string(table.dt_divisors[r]);
            errors += label;
            orders += label;
            for (double e : table.entries[r]) errors += ',' + format_sig6(e);
            for (double p : order_values[r]) orders += ',' + format_sig6(p);
            errors += '\n';
            orders += '\n';
        }
        write_file(dir / "error_table.csv", errors);
        write_file(dir / "observed_orders.csv", orders);
        manifest.set("files", "error_table.csv,observed_orders.csv");
    });
}

namespace {

template <class Command>
ExitStatus run_from_file(const fs::path& path, const CommandOverrides& overrides,
                         std::ostream& diag, Command command) {
    RunConfig config;
    try {
        config = load_config(path);
    } catch (const Error& e) {
        diag << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_status_for(e.kind()) == ExitStatus::Ok ? ExitStatus::Failure
                                                            : exit_status_for(e.kind());
    }
    try {
        return command(config, overrides, diag);
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << '\n';
        return ExitStatus::Failure;
    }
}

}  // namespace

ExitStatus run_solve(const fs::path& config_path, const CommandOverrides& overrides,
                     std::ostream& diag) {
    return run_from_file(config_path, overrides, diag, cmd_solve);
}

ExitStatus run_converge(const fs::path& config_path, const CommandOverrides& overrides,
                        std::ostream& diag) {
    return run_from_file(config_path, overrides, diag, cmd_converge);
}

}  // namespace dpde
