#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "dpde/solver.hpp"

namespace dpde::detail {

// Coefficient values on every node for one time level. Time-independent
// coefficients are evaluated once.
class CoefficientRow {
public:
    CoefficientRow(const CoefficientExpr& expr, std::size_t size, const char* time_var)
        : expr_(&expr), values_(size), time_dependent_(expr.depends_on(time_var)) {}

    bool time_dependent() const noexcept { return time_dependent_; }

    template <class Load>
    const std::vector<double>& at(double t, Load&& load) {
        if (!(loaded_ && (!time_dependent_ || t == loaded_time_))) {
            load(*expr_, values_, t);
            loaded_ = true;
            loaded_time_ = t;
        }
        return values_;
    }

private:
    const CoefficientExpr* expr_;
    std::vector<double> values_;
    bool time_dependent_;
    bool loaded_ = false;
    double loaded_time_ = std::numeric_limits<double>::quiet_NaN();
};

class Kernel1D {
public:
    Kernel1D(const DelayProblem1D& problem, const Grid1D& grid, int workers);

    /// U^{n+1} from U^n: coefficients at level.time, boundaries at t_next.
    void lax_friedrichs(const Field1D& level, double dt, double t_next, Field1D& out);
    void leap_frog(const Field1D& prev, const Field1D& curr, double dt, double t_next,
                   Field1D& out);

    void apply_boundaries(Field1D& out, double t_next) const;

private:
    const std::vector<double>& coefficients(CoefficientRow& row, double t);
    const std::vector<double>& history_row(double t);

    const DelayProblem1D& problem_;
    const Grid1D& grid_;
    int workers_;
    std::vector<double> x_;
    CoefficientRow a_;
    CoefficientRow b_;
    CoefficientRow phi_;  // phi((j - m0) dx, t) for j < m0
};

class Kernel2D {
public:
    Kernel2D(const DelayProblem2D& problem, const Grid2D& grid, int workers);

    void lax_friedrichs(const Field2D& level, double dt, double t_next, Field2D& out);
    void leap_frog(const Field2D& prev, const Field2D& curr, double dt, double t_next,
                   Field2D& out);

    void apply_boundaries(Field2D& out, double t_next) const;

private:
    const std::vector<double>& coefficients(CoefficientRow& row, double t);
    double delayed(const Field2D& level, int i, int j) const;
    void load_history(double t);

    const DelayProblem2D& problem_;
    const Grid2D& grid_;
    int workers_;
    int nx_;
    int ny_;
    std::vector<double> x_;
    std::vector<double> y_;
    CoefficientRow a_;
    CoefficientRow b_;
    CoefficientRow c_;
    std::vector<double> phi_;  // phi at shifted nodes with a negative index, per (i, j)
    bool phi_time_dependent_;
    bool phi_loaded_ = false;
    double phi_time_ = 0.0;
};

void require_finite(std::span<const double> values, const char* scheme, double time);

}  // namespace dpde::detail
