#include <algorithm>
#include <cmath>
#include <set>

#include "dpde/solver.hpp"
#include "kernels.hpp"
#include "parallel.hpp"

namespace dpde {

namespace detail {

Kernel2D::Kernel2D(const DelayProblem2D& problem, const Grid2D& grid, int workers)
    : problem_(problem),
      grid_(grid),
      workers_(std::max(1, workers)),
      nx_(grid.nodes_x()),
      ny_(grid.nodes_y()),
      x_(static_cast<std::size_t>(nx_)),
      y_(static_cast<std::size_t>(ny_)),
      a_(problem.coeff_a, static_cast<std::size_t>(nx_) * ny_, "t"),
      b_(problem.coeff_b, static_cast<std::size_t>(nx_) * ny_, "t"),
      c_(problem.coeff_c, static_cast<std::size_t>(nx_) * ny_, "t"),
      phi_(static_cast<std::size_t>(nx_) * ny_, 0.0),
      phi_time_dependent_(problem.history.depends_on("t")) {
    for (int i = 0; i < nx_; ++i) x_[i] = grid.x.node_position(i);
    for (int j = 0; j < ny_; ++j) y_[j] = grid.y.node_position(j);
}

const std::vector<double>& Kernel2D::coefficients(CoefficientRow& row, double t) {
    return row.at(t, [&](const CoefficientExpr& e, std::vector<double>& out, double time) {
        parallel_for(0, nx_, workers_, [&](int i) {
            for (int j = 0; j < ny_; ++j) out[static_cast<std::size_t>(i) * ny_ + j] =
                e({x_[i], y_[j], time});
        });
    });
}

void Kernel2D::load_history(double t) {
    if (phi_loaded_ && (!phi_time_dependent_ || t == phi_time_)) return;
    const int m0 = grid_.x.delay_offset();
    const int q0 = grid_.y.delay_offset();
    const double dx = grid_.x.cell_width();
    const double dy = grid_.y.cell_width();
    parallel_for(1, nx_ - 1, workers_, [&](int i) {
        for (int j = 1; j < ny_ - 1; ++j) {
            const int si = i - m0;
            const int sj = j - q0;
            if (si < 0 || sj < 0) {
                phi_[static_cast<std::size_t>(i) * ny_ + j] =
                    problem_.history({si * dx, sj * dy, t});
            }
        }
    });
    phi_loaded_ = true;
    phi_time_ = t;
}

double Kernel2D::delayed(const Field2D& level, int i, int j) const {
    const int si = i - grid_.x.delay_offset();
    const int sj = j - grid_.y.delay_offset();
    if (si >= 0 && sj >= 0) return level(si, sj);
    return phi_[static_cast<std::size_t>(i) * ny_ + j];
}

void Kernel2D::apply_boundaries(Field2D& out, double t_next) const {
    const int ie = nx_ - 1;
    const int jn = ny_ - 1;
    const double X = x_[ie];
    const double Y = y_[jn];
    const auto* east = std::get_if<Dirichlet>(&problem_.outflow_east);
    const auto* north = std::get_if<Dirichlet>(&problem_.outflow_north);

    for (int j = 1; j < jn; ++j) {
        out(ie, j) = east ? east->psi({X, y_[j], t_next}) : out(ie - 1, j);
    }
    for (int i = 1; i < ie; ++i) {
        out(i, jn) = north ? north->psi({x_[i], Y, t_next}) : out(i, jn - 1);
    }
    if (east) {
        out(ie, jn) = east->psi({X, Y, t_next});
    } else if (north) {
        out(ie, jn) = north->psi({X, Y, t_next});
    } else {
        out(ie, jn) = out(ie - 1, jn - 1);
    }
    // Inflow edges trace the history function with the in-domain coordinate
    // passed through as a physical position.
    for (int j = 0; j <= jn; ++j) out(0, j) = problem_.history({0.0, y_[j], t_next});
    for (int i = 1; i <= ie; ++i) out(i, 0) = problem_.history({x_[i], 0.0, t_next});
}

void Kernel2D::lax_friedrichs(const Field2D& level, double dt, double t_next, Field2D& out) {
    const double t = level.time;
    const auto& a = coefficients(a_, t);
    const auto& b = coefficients(b_, t);
    const auto& c = coefficients(c_, t);
    load_history(t);
    const double hx = dt / (2.0 * grid_.x.cell_width());
    const double hy = dt / (2.0 * grid_.y.cell_width());
    if (out.nx != nx_ || out.ny != ny_) out = Field2D(nx_, ny_);

    parallel_for(1, nx_ - 1, workers_, [&](int i) {
        for (int j = 1; j < ny_ - 1; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * ny_ + j;
            const double e = level(i + 1, j), w = level(i - 1, j);
            const double n = level(i, j + 1), s = level(i, j - 1);
            out.values[k] = 0.25 * (e + w + n + s) - hx * a[k] * (e - w) - hy * b[k] * (n - s) +
                            dt * c[k] * delayed(level, i, j);
        }
    });
    out.time = t_next;
    apply_boundaries(out, t_next);
    require_finite(out.values, "Lax-Friedrichs", t_next);
}

void Kernel2D::leap_frog(const Field2D& prev, const Field2D& curr, double dt, double t_next,
                         Field2D& out) {
    const double t = curr.time;
    const auto& a = coefficients(a_, t);
    const auto& b = coefficients(b_, t);
    const auto& c = coefficients(c_, t);
    load_history(t);
    const double rx = dt / grid_.x.cell_width();
    const double ry = dt / grid_.y.cell_width();
    if (out.nx != nx_ || out.ny != ny_) out = Field2D(nx_, ny_);

    parallel_for(1, nx_ - 1, workers_, [&](int i) {
        for (int j = 1; j < ny_ - 1; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * ny_ + j;
            out.values[k] = prev.values[k] - rx * a[k] * (curr(i + 1, j) - curr(i - 1, j)) -
                            ry * b[k] * (curr(i, j + 1) - curr(i, j - 1)) +
                            2.0 * dt * c[k] * delayed(curr, i, j);
        }
    });
    out.time = t_next;
    apply_boundaries(out, t_next);
    require_finite(out.values, "Leap-Frog", t_next);
}

}  // namespace detail

namespace {

void check_field(const Field2D& field, const Grid2D& grid) {
    if (field.nx != grid.nodes_x() || field.ny != grid.nodes_y() ||
        field.values.size() != static_cast<std::size_t>(field.nx) * field.ny) {
        throw Error(ErrorKind::InvalidArgument, "field shape does not match the grid");
    }
}

}  // namespace

Field2D sample_initial(const DelayProblem2D& problem, const Grid2D& grid) {
    Field2D field(grid.nodes_x(), grid.nodes_y());
    for (int i = 0; i < field.nx; ++i) {
        for (int j = 0; j < field.ny; ++j) {
            field(i, j) = problem.initial({grid.x.node_position(i), grid.y.node_position(j)});
        }
    }
    detail::require_finite(field.values, "initial data", 0.0);
    return field;
}

double delayed_value_2d(const Field2D& level, int i, int j, const Grid2D& grid,
                        const CoefficientExpr& history) {
    if (i < 0 || i > grid.x.num_cells() || j < 0 || j > grid.y.num_cells()) {
        throw Error(ErrorKind::IndexOutOfRange, "node index outside grid");
    }
    const int si = i - grid.x.delay_offset();
    const int sj = j - grid.y.delay_offset();
    if (si >= 0 && sj >= 0) return level(si, sj);
    return history({si * grid.x.cell_width(), sj * grid.y.cell_width(), level.time});
}

Field2D lax_friedrichs_step_2d(const Field2D& level, const DelayProblem2D& problem,
                               const Grid2D& grid, double dt, int workers) {
    check_field(level, grid);
    detail::Kernel2D kernel(problem, grid, workers);
    Field2D out;
    kernel.lax_friedrichs(level, dt, level.time + dt, out);
    return out;
}

Field2D leap_frog_step_2d(const Field2D& level_prev, const Field2D& level_curr,
                          const DelayProblem2D& problem, const Grid2D& grid, double dt,
                          int workers) {
    check_field(level_prev, grid);
    check_field(level_curr, grid);
    const double gap = level_curr.time - level_prev.time;
    if (std::abs(gap - dt) > 1e-9 * std::max(std::abs(dt), 1e-300)) {
        throw Error(ErrorKind::InvalidArgument, "Leap-Frog levels are not dt apart");
    }
    detail::Kernel2D kernel(problem, grid, workers);
    Field2D out;
    kernel.leap_frog(level_prev, level_curr, dt, level_curr.time + dt, out);
    return out;
}

std::pair<Field2D, Field2D> bootstrap_leap_frog(const Field2D& initial,
                                                const DelayProblem2D& problem,
                                                const Grid2D& grid, double dt, int workers) {
    return {initial, lax_friedrichs_step_2d(initial, problem, grid, dt, workers)};
}

struct TimeMarcher2D::Impl {
    Impl(const DelayProblem2D& p, const Grid2D& g, double dt_, Scheme s, int workers,
         double limit)
        : problem(p), grid(g), kernel(problem, grid, workers), dt(dt_), scheme(s),
          growth_limit(limit) {
        curr = sample_initial(problem, grid);
        initial_norm = max_norm(curr.values);
    }

    DelayProblem2D problem;
    Grid2D grid;
    detail::Kernel2D kernel;
    double dt;
    Scheme scheme;
    double growth_limit;
    double initial_norm = 0.0;
    long step = 0;
    Field2D prev;
    Field2D curr;
    Field2D next;
};

TimeMarcher2D::TimeMarcher2D(const DelayProblem2D& problem, const Grid2D& grid, double dt,
                             Scheme scheme, int workers, double growth_limit)
    : impl_(std::make_unique<Impl>(problem, grid, dt, scheme, workers, growth_limit)) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorKind::InvalidArgument, "time step must be positive");
    }
}

TimeMarcher2D::~TimeMarcher2D() = default;
TimeMarcher2D::TimeMarcher2D(TimeMarcher2D&&) noexcept = default;
TimeMarcher2D& TimeMarcher2D::operator=(TimeMarcher2D&&) noexcept = default;

const Field2D& TimeMarcher2D::current() const noexcept { return impl_->curr; }
long TimeMarcher2D::step_index() const noexcept { return impl_->step; }

void TimeMarcher2D::advance() {
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

SolutionHistory2D solve_2d(const DelayProblem2D& problem, const Grid2D& grid, double dt,
                           const SolveOptions& options) {
    const double t_final = problem.final_time;
    const TimeStepPlan plan = plan_time_steps(t_final, dt);
    const CflReport cfl = cfl_report_2d(problem, grid, plan.dt, options.scheme);
    if (options.scheme == Scheme::LeapFrog && !cfl.admissible()) {
        throw Error(ErrorKind::StrictCflViolation,
                    "Leap-Frog needs a Courant number strictly below 1, got " +
                        std::to_string(cfl.courant_number));
    }
    const std::set<long> wanted = detail::snapshot_steps(options.snapshot_times, t_final, plan);

    SolutionHistory2D history;
    history.dt_used = plan.dt;
    history.cell_width = grid.x.cell_width();
    history.cfl_admissible = cfl.admissible();

    TimeMarcher2D marcher(problem, grid, plan.dt, options.scheme, options.workers,
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
