#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dpde/expr.hpp"
#include "dpde/mesh.hpp"

namespace dpde {

inline constexpr int kDefaultBoundSamples = 64;
inline constexpr double kDefaultCompatTolerance = 1e-3;

/// Variable lists each coefficient is parsed against.
namespace vars {
inline const std::vector<std::string> coeff_1d{"x", "t"};
inline const std::vector<std::string> initial_1d{"x"};
inline const std::vector<std::string> history_1d{"s", "t"};
inline const std::vector<std::string> outflow_1d{"t"};
inline const std::vector<std::string> coeff_2d{"x", "y", "t"};
inline const std::vector<std::string> initial_2d{"x", "y"};
inline const std::vector<std::string> history_2d{"s1", "s2", "t"};
inline const std::vector<std::string> outflow_2d{"x", "y", "t"};
}  // namespace vars

/// Value at the outflow boundary is prescribed by psi.
struct Dirichlet {
    CoefficientExpr psi;
};

/// Value at the outflow boundary copies the nearest interior node.
struct Extrapolate {};

using OutflowPolicy = std::variant<Dirichlet, Extrapolate>;

/// u_t + a(x,t) u_x = b(x,t) u(x - delay, t) on (0, X), with u = u0 at t = 0
/// and u = phi(s, t) for s in [-delay, 0].
struct DelayProblem1D {
    CoefficientExpr coeff_a;   // (x, t)
    CoefficientExpr coeff_b;   // (x, t)
    double delay = 0.0;
    CoefficientExpr initial;   // (x)
    CoefficientExpr history;   // (s, t)
    OutflowPolicy outflow = Extrapolate{};
    double domain_length = 1.0;
    double final_time = 0.0;
};

/// u_t + a u_x + b u_y = c u(x - delay_x, y - delay_y, t) on (0,X) x (0,Y).
/// The east edge is x = X, the north edge y = Y; both are outflow edges.
struct DelayProblem2D {
    CoefficientExpr coeff_a;   // (x, y, t)
    CoefficientExpr coeff_b;   // (x, y, t)
    CoefficientExpr coeff_c;   // (x, y, t)
    double delay_x = 0.0;
    double delay_y = 0.0;
    CoefficientExpr initial;   // (x, y)
    CoefficientExpr history;   // (s1, s2, t)
    OutflowPolicy outflow_east = Extrapolate{};   // psi over (x, y, t)
    OutflowPolicy outflow_north = Extrapolate{};  // psi over (x, y, t)
    double domain_length_x = 1.0;
    double domain_length_y = 1.0;
    double final_time = 0.0;
};

enum class Verdict { Ok, Warnings, Fatal };

std::string_view to_string(Verdict v) noexcept;

struct ValidationReport {
    double bound_a = 0.0;  // sampled sup |a|
    double bound_b = 0.0;  // sampled sup |b|
    double bound_c = 0.0;  // 2D only: sampled sup |c|
    int sign_a = 0;        // +1, -1, or 0 when a vanishes on every sample
    int sign_b = 0;        // 2D only
    double corner_residual = 0.0;  // |phi(0, 0) - u0(0)|
    Verdict verdict = Verdict::Ok;
    std::vector<std::string> messages;

    bool ok() const noexcept { return verdict != Verdict::Fatal; }
};

/// Samples coefficients over [0, X] x [0, t_final]. Fatal only when a
/// velocity coefficient changes sign on the lattice.
ValidationReport validate(const DelayProblem1D& problem, const Grid1D& grid, double t_final,
                          int samples = kDefaultBoundSamples,
                          double compat_tolerance = kDefaultCompatTolerance);

ValidationReport validate(const DelayProblem2D& problem, const Grid2D& grid, double t_final,
                          int samples = kDefaultBoundSamples,
                          double compat_tolerance = kDefaultCompatTolerance);

/// U_0^n = phi(0, t_n).
double boundary_inflow_value(const DelayProblem1D& problem, double t);

}  // namespace dpde
