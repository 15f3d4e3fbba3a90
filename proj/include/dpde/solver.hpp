#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dpde/mesh.hpp"
#include "dpde/problem.hpp"

namespace dpde {

enum class Scheme { LaxFriedrichs, LeapFrog };

std::string_view to_string(Scheme scheme) noexcept;

/// Values U_j at one time level, j = 0..J.
struct Field1D {
    std::vector<double> values;
    double time = 0.0;
};

/// Values U_{i,j} at one time level, row-major by x-index:
/// values[i * ny + j] for i = 0..Jx, j = 0..Jy.
struct Field2D {
    int nx = 0;
    int ny = 0;
    std::vector<double> values;
    double time = 0.0;

    Field2D() = default;
    Field2D(int nx_, int ny_, double time_ = 0.0)
        : nx(nx_), ny(ny_), values(static_cast<std::size_t>(nx_) * ny_, 0.0), time(time_) {}

    double& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * ny + j]; }
    double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * ny + j]; }
};

template <class Field>
struct Snapshot {
    long step = 0;
    Field field;
};

/// Snapshots in strictly increasing time. The first is always the initial
/// datum and a completed run always ends with its final level.
template <class Field>
struct SolutionHistory {
    std::vector<Snapshot<Field>> snapshots;
    long steps_taken = 0;
    double dt_used = 0.0;
    double cell_width = 0.0;  // x-axis spacing of the grid the run used
    bool cfl_admissible = true;

    const Field& final_field() const { return snapshots.back().field; }

    /// Snapshot whose time is nearest to t.
    const Snapshot<Field>& nearest(double t) const;
};

extern template struct SolutionHistory<Field1D>;
extern template struct SolutionHistory<Field2D>;

using SolutionHistory1D = SolutionHistory<Field1D>;
using SolutionHistory2D = SolutionHistory<Field2D>;

/// BlowUp or Unstable during a solve. Carries the snapshots taken so far.
class NumericalAbort : public Error {
public:
    using Partial = std::variant<SolutionHistory1D, SolutionHistory2D>;

    NumericalAbort(ErrorKind kind, const std::string& message, long step, Partial partial)
        : Error(kind, message), step_(step), partial_(std::move(partial)) {}

    long step() const noexcept { return step_; }
    const Partial& partial() const noexcept { return partial_; }

private:
    long step_;
    Partial partial_;
};

struct CflReport {
    double courant_number = 0.0;  // A dt/dx in 1D; A dt/dx + B dt/dy in 2D
    double limit = 1.0;
    bool strict_required = false;  // Leap-Frog needs courant < limit

    bool admissible() const noexcept {
        return strict_required ? courant_number < limit : courant_number <= limit;
    }
};

CflReport cfl_report_1d(const DelayProblem1D& problem, const Grid1D& grid, double dt,
                        Scheme scheme, int samples = kDefaultBoundSamples);
CflReport cfl_report_2d(const DelayProblem2D& problem, const Grid2D& grid, double dt,
                        Scheme scheme, int samples = kDefaultBoundSamples);

/// dt = safety * dx / A with A the sampled sup |a|. Leap-Frog rejects
/// safety >= 1 with StrictCflViolation. Returns the final time when a == 0.
double cfl_max_dt_1d(const DelayProblem1D& problem, const Grid1D& grid, double safety,
                     Scheme scheme, int samples = kDefaultBoundSamples);

/// dt = safety / (A/dx + B/dy).
double cfl_max_dt_2d(const DelayProblem2D& problem, const Grid2D& grid, double safety,
                     Scheme scheme, int samples = kDefaultBoundSamples);

struct TimeStepPlan {
    double dt = 0.0;
    long steps = 0;
};

/// Keeps dt when t_final / dt is an integer to 1e-12 relative, otherwise
/// shrinks it to t_final / ceil(t_final / dt).
TimeStepPlan plan_time_steps(double t_final, double dt);

// ---------------------------------------------------------------------------
// 1D

Field1D sample_initial(const DelayProblem1D& problem, const Grid1D& grid);

/// U_{j - m0} when that node is inside the domain, else phi((j - m0) dx, t).
double delayed_value_1d(const Field1D& level, int j, const Grid1D& grid,
                        const CoefficientExpr& history);

Field1D lax_friedrichs_step_1d(const Field1D& level, const DelayProblem1D& problem,
                               const Grid1D& grid, double dt, int workers = 1);

/// dt may be negative (time reversal); level_curr.time - level_prev.time must equal dt.
Field1D leap_frog_step_1d(const Field1D& level_prev, const Field1D& level_curr,
                          const DelayProblem1D& problem, const Grid1D& grid, double dt,
                          int workers = 1);

/// (U^0, U^1) with U^1 from one Lax-Friedrichs step.
std::pair<Field1D, Field1D> bootstrap_leap_frog(const Field1D& initial,
                                                const DelayProblem1D& problem,
                                                const Grid1D& grid, double dt, int workers = 1);

inline constexpr double kDefaultGrowthLimit = 1e6;

struct SolveOptions {
    Scheme scheme = Scheme::LaxFriedrichs;
    std::vector<double> snapshot_times;
    bool record_all_steps = false;
    int workers = 1;
    double growth_limit = kDefaultGrowthLimit;  // Unstable once ||U^n|| > limit * (1 + ||U^0||)
};

/// Marches U^n forward one level at a time. Leap-Frog bootstraps its first
/// level with Lax-Friedrichs. t_n is n * dt exactly.
class TimeMarcher1D {
public:
    TimeMarcher1D(const DelayProblem1D& problem, const Grid1D& grid, double dt, Scheme scheme,
                  int workers = 1, double growth_limit = kDefaultGrowthLimit);
    ~TimeMarcher1D();
    TimeMarcher1D(TimeMarcher1D&&) noexcept;
    TimeMarcher1D& operator=(TimeMarcher1D&&) noexcept;

    const Field1D& current() const noexcept;
    long step_index() const noexcept;

    /// Throws Error(BlowUp) on non-finite values, Error(Unstable) on the growth guard.
    void advance();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Full time loop to problem.final_time. Leap-Frog runs are rejected up
/// front when the Courant number is not below 1; Lax-Friedrichs runs above 1
/// proceed with cfl_admissible = false and are caught by the growth guard.
SolutionHistory1D solve_1d(const DelayProblem1D& problem, const Grid1D& grid, double dt,
                           const SolveOptions& options);

// ---------------------------------------------------------------------------
// 2D

Field2D sample_initial(const DelayProblem2D& problem, const Grid2D& grid);

double delayed_value_2d(const Field2D& level, int i, int j, const Grid2D& grid,
                        const CoefficientExpr& history);

Field2D lax_friedrichs_step_2d(const Field2D& level, const DelayProblem2D& problem,
                               const Grid2D& grid, double dt, int workers = 1);

Field2D leap_frog_step_2d(const Field2D& level_prev, const Field2D& level_curr,
                          const DelayProblem2D& problem, const Grid2D& grid, double dt,
                          int workers = 1);

std::pair<Field2D, Field2D> bootstrap_leap_frog(const Field2D& initial,
                                                const DelayProblem2D& problem,
                                                const Grid2D& grid, double dt, int workers = 1);

class TimeMarcher2D {
public:
    TimeMarcher2D(const DelayProblem2D& problem, const Grid2D& grid, double dt, Scheme scheme,
                  int workers = 1, double growth_limit = kDefaultGrowthLimit);
    ~TimeMarcher2D();
    TimeMarcher2D(TimeMarcher2D&&) noexcept;
    TimeMarcher2D& operator=(TimeMarcher2D&&) noexcept;

    const Field2D& current() const noexcept;
    long step_index() const noexcept;
    void advance();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SolutionHistory2D solve_2d(const DelayProblem2D& problem, const Grid2D& grid, double dt,
                           const SolveOptions& options);

/// max_j |U_j|.
double max_norm(std::span<const double> values);

}  // namespace dpde
