#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dpde/solver.hpp"

namespace dpde {

enum class ErrorNorm { MaxAbs, L2 };

std::string_view to_string(ErrorNorm norm) noexcept;

/// max over every coarse (j, n) of |coarse(j, n) - fine(2j, 2n)|. The fine run
/// must be the exact 2x refinement in space and time, and must hold a
/// snapshot at step 2n for every coarse snapshot step n.
double double_mesh_max_error(const SolutionHistory1D& coarse, const SolutionHistory1D& fine);

/// sqrt(dx_coarse * sum_j (coarse(j, N) - fine(2j, 2N))^2) at the final level.
double double_mesh_l2_error(const SolutionHistory1D& coarse, const SolutionHistory1D& fine);

/// Double-mesh error of one (grid, dt) pair. Runs the coarse and the 2x
/// refined solutions in lockstep so no history is kept; the result equals
/// the history-based functions above on full-step histories.
double double_mesh_error(const DelayProblem1D& problem, const Grid1D& coarse_grid, double dt,
                         Scheme scheme, ErrorNorm norm);

/// log2(e_coarse / e_fine).
double observed_order(double e_coarse, double e_fine);

/// Double-mesh errors with columns dx_values and rows dt = dx / divisor.
struct ErrorTable {
    std::vector<double> dx_values;
    std::vector<int> dt_divisors;
    std::vector<std::vector<double>> entries;  // entries[row][column]
    ErrorNorm norm = ErrorNorm::MaxAbs;
    Scheme scheme = Scheme::LaxFriedrichs;
    std::string problem_tag;
    double delay = 0.0;

    std::size_t rows() const noexcept { return dt_divisors.size(); }
    std::size_t columns() const noexcept { return dx_values.size(); }

    /// orders[row][c] = observed_order(entries[row][c], entries[row][c + 1]);
    /// NaN where an entry is zero.
    std::vector<std::vector<double>> orders() const;
};

/// Every cell runs the solver at (dx, dx / divisor) and at (dx/2, dx / (2 divisor)).
/// Cells are independent and run on up to `workers` threads.
ErrorTable convergence_table(const DelayProblem1D& problem, Scheme scheme,
                             const std::vector<double>& dx_list,
                             const std::vector<int>& dt_divisors, ErrorNorm norm,
                             int workers = 1, std::string problem_tag = {});

}  // namespace dpde
