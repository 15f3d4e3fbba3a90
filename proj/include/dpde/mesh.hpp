#pragma once

#include <string>
#include <vector>

#include "dpde/error.hpp"

namespace dpde {

inline constexpr double kDefaultSnapTolerance = 1e-9;

/// Uniform 1D mesh on [0, X] whose spacing divides the delay exactly:
/// delay == delay_offset * cell_width, so x_j - delay is the node j - delay_offset.
/// Nodes with negative index (down to -delay_offset) address the history
/// interval [-delay, 0].
class Grid1D {
public:
    double domain_length() const noexcept { return domain_length_; }
    double cell_width() const noexcept { return cell_width_; }
    int num_cells() const noexcept { return num_cells_; }
    double delay() const noexcept { return delay_; }
    int delay_offset() const noexcept { return delay_offset_; }
    int num_nodes() const noexcept { return num_cells_ + 1; }

    /// index * cell_width for index in [-delay_offset, num_cells].
    double node_position(int index) const;

    bool operator==(const Grid1D&) const = default;

private:
    friend Grid1D build_grid_1d(double, double, int, double);
    Grid1D(double domain_length, double cell_width, int num_cells, double delay, int delay_offset)
        : domain_length_(domain_length), cell_width_(cell_width), num_cells_(num_cells),
          delay_(delay), delay_offset_(delay_offset) {}

    double domain_length_;
    double cell_width_;
    int num_cells_;
    double delay_;
    int delay_offset_;
};

struct Grid2D {
    Grid1D x;
    Grid1D y;

    int nodes_x() const noexcept { return x.num_nodes(); }
    int nodes_y() const noexcept { return y.num_nodes(); }

    bool operator==(const Grid2D&) const = default;
};

/// One candidate spacing for a delay: delay_offset cells per delay.
struct GridCandidate {
    int delay_offset;
    double cell_width;
    int num_cells;
    double residual;  // |num_cells * cell_width - X| / cell_width
};

/// No spacing near the requested resolution puts the delay on a node.
class IncommensurateDelay : public Error {
public:
    IncommensurateDelay(std::string axis, const std::string& message,
                        std::vector<GridCandidate> nearest)
        : Error(ErrorKind::IncommensurateDelay, message),
          axis_(std::move(axis)), nearest_(std::move(nearest)) {}

    const std::string& axis() const noexcept { return axis_; }
    const std::vector<GridCandidate>& nearest() const noexcept { return nearest_; }

private:
    std::string axis_;
    std::vector<GridCandidate> nearest_;
};

/// m0 = max(1, round(delay * requested_cells / X)), dx = delay / m0,
/// J = round(X / dx). Throws IncommensurateDelay when J * dx misses X by more
/// than snap_tolerance * dx.
Grid1D build_grid_1d(double domain_length, double delay, int requested_cells,
                     double snap_tolerance = kDefaultSnapTolerance);

Grid2D build_grid_2d(double domain_length_x, double domain_length_y, double delay_x,
                     double delay_y, int requested_cells_x, int requested_cells_y,
                     double snap_tolerance = kDefaultSnapTolerance);

/// Same delay and domain at twice the requested resolution. Node j of `grid`
/// coincides with node 2j of the result.
Grid1D refine(const Grid1D& grid, double snap_tolerance = kDefaultSnapTolerance);

}  // namespace dpde
