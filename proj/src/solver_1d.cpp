#include <algorithm>
#include <cmath>
#include <set>

#include "dpde/solver.hpp"
#include "kernels.hpp"
#include "parallel.hpp"

namespace dpde {

namespace detail {

Kernel1D::Kernel1D(const DelayProblem1D& problem, const Grid1D& grid, int workers)
    : problem_(problem),
      grid_(grid),
      workers_(std::max(1, workers)),
      x_(static_cast<std::size_t>(grid.num_nodes())),
      a_(problem.coeff_a, x_.size(), "t"),
      b_(problem.coeff_b, x_.size(), "t"),
      phi_(problem.history, static_cast<std::size_t>(std::min(grid.delay_offset(), grid.num_cells())),
           "t") {
    for (int j = 0; j <= grid.num_cells(); ++j) x_[j] = grid.node_position(j);
}

const std::vector<double>& Kernel1D::coefficients(CoefficientRow& row, double t) {
    return row.at(t, [&](const CoefficientExpr& e, std::vector<double>& out, double time) {
        parallel_for(0, static_cast<int>(out.size()), workers_,
                     [&](int j) { out[j] = e({x_[j], time}); });
    });
}

const std::vector<double>& Kernel1D::history_row(double t) {
    const int m0 = grid_.delay_offset();
    const double dx = grid_.cell_width();
    return phi_.at(t, [&](const CoefficientExpr& e, std::vector<double>& out, double time) {
        // out[j] = phi((j - m0) dx, t); j = 0 is the boundary node and never read.
        for (std::size_t j = 1; j < out.size(); ++j) {
            out[j] = e({(static_cast<int>(j) - m0) * dx, time});
        }
    });
}

void Kernel1D::apply_boundaries(Field1D& out, double t_next) const {
    const int last = grid_.num_cells();
    out.values[0] = problem_.history({0.0, t_next});
    if (const auto* d = std::get_if<Dirichlet>(&problem_.outflow)) {
        out.values[last] = d->psi({t_next});
    } else {
        out.values[last] = out.values[last - 1];
    }
}

void Kernel1D::lax_friedrichs(const Field1D& level, double dt, double t_next, Field1D& out) {
    const double t = level.time;
    const auto& a = coefficients(a_, t);
    const auto& b = coefficients(b_, t);
    const auto& phi = history_row(t);
    const int m0 = grid_.delay_offset();
    const double half_ratio = dt / (2.0 * grid_.cell_width());
    const double* u = level.values.data();
    out.values.resize(level.values.size());
    double* v = out.values.data();

    parallel_for(1, grid_.num_cells(), workers_, [&](int j) {
        const double delayed = j >= m0 ? u[j - m0] : phi[j];
        v[j] = 0.5 * (u[j + 1] + u[j - 1]) - a[j] * half_ratio * (u[j + 1] - u[j - 1]) +
               dt * b[j] * delayed;
    });
    out.time = t_next;
    apply_boundaries(out, t_next);
    require_finite(out.values, "Lax-Friedrichs", t_next);
}

void Kernel1D::leap_frog(const Field1D& prev, const Field1D& curr, double dt, double t_next,
                         Field1D& out) {
    const double t = curr.time;
    const auto& a = coefficients(a_, t);
    const auto& b = coefficients(b_, t);
    const auto& phi = history_row(t);
    const int m0 = grid_.delay_offset();
    const double ratio = dt / grid_.cell_width();
    const double* w = prev.values.data();
    const double* u = curr.values.data();
    out.values.resize(curr.values.size());
    double* v = out.values.data();

    parallel_for(1, grid_.num_cells(), workers_, [&](int j) {
        const double delayed = j >= m0 ? u[j - m0] : phi[j];
        v[j] = w[j] - a[j] * ratio * (u[j + 1] - u[j - 1]) + 2.0 * dt * b[j] * delayed;
    });
    out.time = t_next;
    apply_boundaries(out, t_next);
    require_finite(out.values, "Leap-Frog", t_next);
}

}  // namespace detail

namespace {

void check_field(const Field1D& field, const Grid1D& grid) {
    if (field.values.size() != static_cast<std::size_t>(grid.num_nodes())) {
        throw Error(ErrorKind::InvalidArgument,
                    "field has " + std::to_string(field.values.size()) + " values, grid has " +
                        std::to_string(grid.num_nodes()) + " nodes");
    }
}

}  // namespace

Field1D sample_initial(const DelayProblem1D& problem, const Grid1D& grid) {
    Field1D field;
    field.values.resize(static_cast<std::size_t>(grid.num_nodes()));
    for (int j = 0; j <= grid.num_cells(); ++j) {
        field.values[j] = problem.initial({grid.node_position(j)});
    }
    detail::require_finite(field.values, "initial data", 0.0);
    return field;
}

double delayed_value_1d(const Field1D& level, int j, const Grid1D& grid,
                        const CoefficientExpr& history) {
    if (j < 0 || j > grid.num_cells()) {
        throw Error(ErrorKind::IndexOutOfRange, "node index " + std::to_string(j) + " outside grid");
    }
    const int shifted = j - grid.delay_offset();
    if (shifted >= 0) return level.values[shifted];
    return history({shifted * grid.cell_width(), level.time});
}

Field1D lax_friedrichs_step_1d(const Field1D& level, const DelayProblem1D& problem,
                               const Grid1D& grid, double dt, int workers) {
    check_field(level, grid);
    detail::Kernel1D kernel(problem, grid, workers);
    Field1D out;
    kernel.lax_friedrichs(level, dt, level.time + dt, out);
    return out;
}

Field1D leap_frog_step_1d(const Field1D& level_prev, const Field1D& level_curr,
                          const DelayProblem1D& problem, const Grid1D& grid, double dt,
                          int workers) {
    check_field(level_prev, grid);
    check_field(level_curr, grid);
    const double gap = level_curr.time - level_prev.time;
    if (std::abs(gap - dt) > 1e-9 * std::max(std::abs(dt), 1e-300)) {
        throw Error(ErrorKind::InvalidArgument, "Leap-Frog levels are not dt apart");
    }
    detail::Kernel1D kernel(problem, grid, workers);
    Field1D out;
    kernel.leap_frog(level_prev, level_curr, dt, level_curr.time + dt, out);
    return out;
}

std::pair<Field1D, Field1D> bootstrap_leap_frog(const Field1D& initial,
                                                const DelayProblem1D& problem,
                                                const Grid1D& grid, double dt, int workers) {
    return {initial, lax_friedrichs_step_1d(initial, problem, grid, dt, workers)};
}

struct TimeMarcher1D::Impl {
    Impl(const DelayProblem1D& p, const Grid1D& g, double dt_, Scheme s, int workers,
         double limit)
        : problem(p), grid(g), kernel(problem, grid, workers), dt(dt_), scheme(s),
          growth_limit(limit) {
        curr = sample_initial(problem, grid);
        initial_norm = max_norm(curr.values);
    }

    DelayProblem1D problem;
    Grid1D grid;
    detail::Kernel1D kernel;
    double dt;
    Scheme scheme;
    double growth_limit;
    double initial_norm = 0.0;
    long step = 0;
    Field1D prev;
    Field1D curr;
    Field1D next;
};

TimeMarcher1D::TimeMarcher1D(const DelayProblem1D& problem, const Grid1D& grid, double dt,
                             Scheme scheme, int workers, double growth_limit)
    : impl_(std::make_unique<Impl>(problem, grid, dt, scheme, workers, growth_limit)) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorKind::InvalidArgument, "time step must be positive");
    }
}

TimeMarcher1D::~TimeMarcher1D() = default;
TimeMarcher1D::TimeMarcher1D(TimeMarcher1D&&) noexcept = default;
TimeMarcher1D& TimeMarcher1D::operator=(TimeMarcher1D&&) noexcept = default;

const Field1D& TimeMarcher1D::current() const noexcept { return impl_->curr; }
long TimeMarcher1D::step_index() const noexcept { return impl_->step; }

void TimeMarcher1D::advance() {
    Impl& m = *impl_;
    const double t_next = static_cast<double>(m.step + 1) * m.dt;
    if (m.scheme == Scheme::LaxFriedrichs || m.step == 0) {
        m.kernel.lax_friedrichs(m.curr, m.dt, t_next, m.next);
    } else {
        m.kernel.leap_frog(m.prev, m.curr, m.dt, t_next, m.next);
    }
    const double norm = max_norm(m.next.values);
    if (norm > m.growth_limit * (1.0 + m.initial_norm)) {
        throw Error(ErrorKind::Unstable,
                    "growth guard tripped at step " + std::to_string(m.step + 1) + ": |U|=" +
                        std::to_string(norm));
    }
    std::swap(m.prev, m.curr);
    std::swap(m.curr, m.next);
    ++m.step;
}

namespace detail {
std::set<long> snapshot_steps(const std::vector<double>& times, double t_final,
                              const TimeStepPlan& plan);
}

SolutionHistory1D solve_1d(const DelayProblem1D& problem, const Grid1D& grid, double dt,
                           const SolveOptions& options) {
    const double t_final = problem.final_time;
    const TimeStepPlan plan = plan_time_steps(t_final, dt);
    const CflReport cfl = cfl_report_1d(problem, grid, plan.dt, options.scheme);
    if (options.scheme == Scheme::LeapFrog && !cfl.admissible()) {
        throw Error(ErrorKind::StrictCflViolation,
                    "Leap-Frog needs a Courant number strictly below 1, got " +
                        std::to_string(cfl.courant_number));
    }
    const std::set<long> wanted = detail::snapshot_steps(options.snapshot_times, t_final, plan);

    SolutionHistory1D history;
    history.dt_used = plan.dt;
    history.cell_width = grid.cell_width();
    history.cfl_admissible = cfl.admissible();

    TimeMarcher1D marcher(problem, grid, plan.dt, options.scheme, options.workers,
                          options.growth_limit);
    history.snapshots.push_back({0, marcher.current()});
    try {
        for (long n = 1; n <= plan.steps; ++n) {
            marcher.advance();
            if (options.record_all_steps || wanted.count(n)) {
                history.snapshots.push_back({n, marcher.current()});
            }
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BlowUp && e.kind() != ErrorKind::Unstable) throw;
        const long failed = marcher.step_index() + 1;
        history.steps_taken = marcher.step_index();
        throw NumericalAbort(e.kind(), std::string(e.what()), failed, std::move(history));
    }
    history.steps_taken = plan.steps;
    return history;
}

}  // namespace dpde
