#include <algorithm>
#include <cmath>
#include <set>

#include "dpde/solver.hpp"
#include "kernels.hpp"

namespace dpde {

std::string_view to_string(Scheme scheme) noexcept {
    switch (scheme) {
        case Scheme::LaxFriedrichs: return "lax_friedrichs";
        case Scheme::LeapFrog: return "leap_frog";
    }
    return "unknown";
}

double max_norm(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

template <class Field>
const Snapshot<Field>& SolutionHistory<Field>::nearest(double t) const {
    if (snapshots.empty()) throw Error(ErrorKind::InvalidArgument, "history has no snapshots");
    const Snapshot<Field>* best = &snapshots.front();
    for (const auto& s : snapshots) {
        if (std::abs(s.field.time - t) < std::abs(best->field.time - t)) best = &s;
    }
    return *best;
}

template struct SolutionHistory<Field1D>;
template struct SolutionHistory<Field2D>;

TimeStepPlan plan_time_steps(double t_final, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorKind::InvalidArgument, "time step must be positive and finite");
    }
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
        throw Error(ErrorKind::InvalidArgument, "final time must be non-negative and finite");
    }
    if (t_final == 0.0) return {dt, 0};
    const double ratio = t_final / dt;
    const double whole = std::round(ratio);
    if (whole >= 1.0 && std::abs(ratio - whole) <= 1e-12 * whole) {
        return {dt, static_cast<long>(whole)};
    }
    const double steps = std::ceil(ratio);
    return {t_final / steps, static_cast<long>(steps)};
}

namespace detail {

void require_finite(std::span<const double> values, const char* scheme, double time) {
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!std::isfinite(values[j])) {
            throw Error(ErrorKind::BlowUp, std::string(scheme) + " produced a non-finite value at node " +
                                               std::to_string(j) + ", t=" + std::to_string(time));
        }
    }
}

std::set<long> snapshot_steps(const std::vector<double>& times, double t_final,
                              const TimeStepPlan& plan) {
    std::set<long> steps;
    if (plan.steps > 0) steps.insert(plan.steps);
    for (double t : times) {
        if (!(t >= 0.0) || t > t_final * (1.0 + 1e-12)) {
            throw Error(ErrorKind::InvalidArgument,
                        "snapshot time " + std::to_string(t) + " outside [0, t_final]");
        }
        const long n = std::clamp(std::lround(t / plan.dt), 0L, plan.steps);
        if (n > 0) steps.insert(n);
    }
    return steps;
}

}  // namespace detail

namespace {

void check_safety(double safety, Scheme scheme) {
    if (!(safety > 0.0 && safety <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "CFL safety factor must lie in (0, 1]");
    }
    if (scheme == Scheme::LeapFrog && safety >= 1.0) {
        throw Error(ErrorKind::StrictCflViolation,
                    "Leap-Frog needs a Courant number strictly below 1; use a safety factor < 1");
    }
}

}  // namespace

CflReport cfl_report_1d(const DelayProblem1D& problem, const Grid1D& grid, double dt,
                        Scheme scheme, int samples) {
    const Interval box[] = {{0.0, grid.domain_length()}, {0.0, problem.final_time}};
    const double bound_a = sup_abs_sampled(problem.coeff_a, box, samples);
    return {bound_a * dt / grid.cell_width(), 1.0, scheme == Scheme::LeapFrog};
}

CflReport cfl_report_2d(const DelayProblem2D& problem, const Grid2D& grid, double dt,
                        Scheme scheme, int samples) {
    const Interval box[] = {
        {0.0, grid.x.domain_length()}, {0.0, grid.y.domain_length()}, {0.0, problem.final_time}};
    const double bound_a = sup_abs_sampled(problem.coeff_a, box, samples);
    const double bound_b = sup_abs_sampled(problem.coeff_b, box, samples);
    return {bound_a * dt / grid.x.cell_width() + bound_b * dt / grid.y.cell_width(), 1.0,
            scheme == Scheme::LeapFrog};
}

double cfl_max_dt_1d(const DelayProblem1D& problem, const Grid1D& grid, double safety,
                     Scheme scheme, int samples) {
    check_safety(safety, scheme);
    const Interval box[] = {{0.0, grid.domain_length()}, {0.0, problem.final_time}};
    const double bound_a = sup_abs_sampled(problem.coeff_a, box, samples);
    if (bound_a == 0.0) return problem.final_time;
    return safety * grid.cell_width() / bound_a;
}

double cfl_max_dt_2d(const DelayProblem2D& problem, const Grid2D& grid, double safety,
                     Scheme scheme, int samples) {
    check_safety(safety, scheme);
    const Interval box[] = {
        {0.0, grid.x.domain_length()}, {0.0, grid.y.domain_length()}, {0.0, problem.final_time}};
    const double bound_a = sup_abs_sampled(problem.coeff_a, box, samples);
    const double bound_b = sup_abs_sampled(problem.coeff_b, box, samples);
    const double rate = bound_a / grid.x.cell_width() + bound_b / grid.y.cell_width();
    if (rate == 0.0) return problem.final_time;
    return safety / rate;
}

}  // namespace dpde
