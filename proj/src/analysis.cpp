#include "dpde/analysis.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <map>

#include "parallel.hpp"

namespace dpde {

std::string_view to_string(ErrorNorm norm) noexcept {
    switch (norm) {
        case ErrorNorm::MaxAbs: return "max";
        case ErrorNorm::L2: return "l2";
    }
    return "unknown";
}

namespace {

void check_refinement(const SolutionHistory1D& coarse, const SolutionHistory1D& fine) {
    if (coarse.snapshots.empty() || fine.snapshots.empty()) {
        throw Error(ErrorKind::MeshMismatch, "double-mesh comparison needs non-empty histories");
    }
    const std::size_t coarse_nodes = coarse.snapshots.front().field.values.size();
    const std::size_t fine_nodes = fine.snapshots.front().field.values.size();
    if (coarse_nodes < 2 || fine_nodes != 2 * (coarse_nodes - 1) + 1) {
        throw Error(ErrorKind::MeshMismatch,
                    "fine grid has " + std::to_string(fine_nodes) + " nodes, expected " +
                        std::to_string(2 * (coarse_nodes - 1) + 1));
    }
    if (fine.steps_taken != 2 * coarse.steps_taken) {
        throw Error(ErrorKind::MeshMismatch, "fine run must take exactly twice the coarse steps");
    }
    if (std::abs(2.0 * fine.dt_used - coarse.dt_used) > 1e-12 * coarse.dt_used) {
        throw Error(ErrorKind::MeshMismatch, "fine time step is not half the coarse time step");
    }
}

double level_max_diff(const Field1D& coarse, const Field1D& fine) {
    double worst = 0.0;
    for (std::size_t j = 0; j < coarse.values.size(); ++j) {
        worst = std::max(worst, std::abs(coarse.values[j] - fine.values[2 * j]));
    }
    return worst;
}

double level_l2_diff(const Field1D& coarse, const Field1D& fine, double dx) {
    double sum = 0.0;
    for (std::size_t j = 0; j < coarse.values.size(); ++j) {
        const double d = coarse.values[j] - fine.values[2 * j];
        sum += d * d;
    }
    return std::sqrt(dx * sum);
}

}  // namespace

double double_mesh_max_error(const SolutionHistory1D& coarse, const SolutionHistory1D& fine) {
    check_refinement(coarse, fine);
    std::map<long, const Field1D*> by_step;
    for (const auto& s : fine.snapshots) by_step[s.step] = &s.field;
    double worst = 0.0;
    for (const auto& s : coarse.snapshots) {
        auto it = by_step.find(2 * s.step);
        if (it == by_step.end()) {
            throw Error(ErrorKind::MeshMismatch,
                        "fine history has no level " + std::to_string(2 * s.step));
        }
        worst = std::max(worst, level_max_diff(s.field, *it->second));
    }
    return worst;
}

double double_mesh_l2_error(const SolutionHistory1D& coarse, const SolutionHistory1D& fine) {
    check_refinement(coarse, fine);
    const auto& c = coarse.snapshots.back();
    const auto& f = fine.snapshots.back();
    if (c.step != coarse.steps_taken || f.step != fine.steps_taken) {
        throw Error(ErrorKind::MeshMismatch, "histories must end with their final level");
    }
    if (!(coarse.cell_width > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "coarse history has no cell width");
    }
    return level_l2_diff(c.field, f.field, coarse.cell_width);
}

double double_mesh_error(const DelayProblem1D& problem, const Grid1D& coarse_grid, double dt,
                         Scheme scheme, ErrorNorm norm) {
    const Grid1D fine_grid = refine(coarse_grid);
    const TimeStepPlan plan = plan_time_steps(problem.final_time, dt);
    if (scheme == Scheme::LeapFrog) {
        const CflReport cfl = cfl_report_1d(problem, coarse_grid, plan.dt, scheme);
        if (!cfl.admissible()) {
            throw Error(ErrorKind::StrictCflViolation,
                        "Leap-Frog needs a Courant number strictly below 1, got " +
                            std::to_string(cfl.courant_number));
        }
    }

    TimeMarcher1D coarse(problem, coarse_grid, plan.dt, scheme);
    TimeMarcher1D fine(problem, fine_grid, plan.dt / 2.0, scheme);
    double worst = level_max_diff(coarse.current(), fine.current());
    for (long n = 1; n <= plan.steps; ++n) {
        coarse.advance();
        fine.advance();
        fine.advance();
        if (norm == ErrorNorm::MaxAbs) {
            worst = std::max(worst, level_max_diff(coarse.current(), fine.current()));
        }
    }
    if (norm == ErrorNorm::L2) {
        return level_l2_diff(coarse.current(), fine.current(), coarse_grid.cell_width());
    }
    return worst;
}

double observed_order(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "observed order needs positive errors");
    }
    return std::log2(e_coarse / e_fine);
}

std::vector<std::vector<double>> ErrorTable::orders() const {
    std::vector<std::vector<double>> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
        for (std::size_t c = 0; c + 1 < columns(); ++c) {
            const double coarse = entries[r][c];
            const double fine = entries[r][c + 1];
            out[r].push_back(coarse > 0.0 && fine > 0.0
                                 ? observed_order(coarse, fine)
                                 : std::numeric_limits<double>::quiet_NaN());
        }
    }
    return out;
}

ErrorTable convergence_table(const DelayProblem1D& problem, Scheme scheme,
                             const std::vector<double>& dx_list,
                             const std::vector<int>& dt_divisors, ErrorNorm norm, int workers,
                             std::string problem_tag) {
    if (dx_list.empty() || dt_divisors.empty()) {
        throw Error(ErrorKind::InvalidArgument, "convergence table needs columns and rows");
    }
    ErrorTable table;
    table.dx_values = dx_list;
    table.dt_divisors = dt_divisors;
    table.norm = norm;
    table.scheme = scheme;
    table.problem_tag = std::move(problem_tag);
    table.delay = problem.delay;
    table.entries.assign(dt_divisors.size(), std::vector<double>(dx_list.size(), 0.0));

    std::vector<Grid1D> grids;
    for (double dx : dx_list) {
        if (!(dx > 0.0)) throw Error(ErrorKind::InvalidArgument, "dx must be positive");
        const int cells = static_cast<int>(std::lround(problem.domain_length / dx));
        grids.push_back(build_grid_1d(problem.domain_length, problem.delay, cells));
    }
    for (int d : dt_divisors) {
        if (d < 1) throw Error(ErrorKind::InvalidArgument, "dt divisors must be positive");
    }

    const int columns = static_cast<int>(dx_list.size());
    const int cells = static_cast<int>(dt_divisors.size()) * columns;
    detail::parallel_for(0, cells, workers, [&](int k) {
        const int row = k / columns;
        const int col = k % columns;
        const double dt = grids[col].cell_width() / dt_divisors[row];
        table.entries[row][col] = double_mesh_error(problem, grids[col], dt, scheme, norm);
    });
    return table;
}

}  // namespace dpde
