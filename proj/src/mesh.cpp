#include "dpde/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dpde {

namespace {

GridCandidate candidate_for(double domain_length, double delay, int delay_offset) {
    const double dx = delay / delay_offset;
    const double cells = std::round(domain_length / dx);
    const double residual = std::abs(cells * dx - domain_length) / dx;
    return {delay_offset, dx, static_cast<int>(std::min(cells, 2.0e9)), residual};
}

std::string describe(const GridCandidate& c) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "m0=%d dx=%.12g J=%d (residual %.3g dx)", c.delay_offset,
                  c.cell_width, c.num_cells, c.residual);
    return buf;
}

// Best two spacings near the requested resolution. Candidates meeting the
// tolerance rank first (closest J to the request); the rest by residual.
std::vector<GridCandidate> nearest_candidates(double domain_length, double delay,
                                              int requested_cells, double tol) {
    const long long scan_limit =
        std::min<long long>(10LL * requested_cells, 1'000'000LL);
    auto rank = [&](const GridCandidate& c) {
        const bool ok = c.residual <= tol && c.num_cells >= 2;
        return std::pair<int, double>{ok ? 0 : 1,
                                      ok ? std::abs(c.num_cells - requested_cells) : c.residual};
    };
    std::vector<GridCandidate> best;
    for (long long m0 = 1; m0 <= scan_limit; ++m0) {
        GridCandidate c = candidate_for(domain_length, delay, static_cast<int>(m0));
        best.push_back(c);
        std::sort(best.begin(), best.end(),
                  [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
        if (best.size() > 2) best.pop_back();
    }
    return best;
}

}  // namespace

double Grid1D::node_position(int index) const {
    if (index < -delay_offset_ || index > num_cells_) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "node index " + std::to_string(index) + " outside [" +
                        std::to_string(-delay_offset_) + ", " + std::to_string(num_cells_) + "]");
    }
    return index * cell_width_;
}

Grid1D build_grid_1d(double domain_length, double delay, int requested_cells,
                     double snap_tolerance) {
    if (!(domain_length > 0.0) || !std::isfinite(domain_length)) {
        throw Error(ErrorKind::InvalidArgument, "domain length must be positive and finite");
    }
    if (!(delay > 0.0) || !std::isfinite(delay)) {
        throw Error(ErrorKind::InvalidArgument, "delay must be positive and finite");
    }
    if (requested_cells < 2) {
        throw Error(ErrorKind::InvalidArgument, "requested cell count must be at least 2");
    }
    if (!(snap_tolerance > 0.0 && snap_tolerance < 0.5)) {
        throw Error(ErrorKind::InvalidArgument, "snap tolerance must lie in (0, 0.5)");
    }

    const double ideal_offset = delay * requested_cells / domain_length;
    if (ideal_offset > std::numeric_limits<int>::max() / 2) {
        throw Error(ErrorKind::InvalidArgument, "delay is too large relative to the cell width");
    }
    const int delay_offset = std::max(1, static_cast<int>(std::lround(ideal_offset)));
    const GridCandidate c = candidate_for(domain_length, delay, delay_offset);

    if (c.residual > snap_tolerance) {
        auto nearest = nearest_candidates(domain_length, delay, requested_cells, snap_tolerance);
        std::string msg = "delay " + std::to_string(delay) + " is not commensurate with domain " +
                          std::to_string(domain_length) + " near " +
                          std::to_string(requested_cells) + " cells: " + describe(c);
        if (!nearest.empty()) {
            msg += "; nearest candidates:";
            for (const auto& n : nearest) msg += " " + describe(n) + ";";
        }
        throw IncommensurateDelay("x", msg, std::move(nearest));
    }
    if (c.num_cells < 2) {
        throw Error(ErrorKind::InvalidArgument, "grid would have fewer than 2 cells");
    }
    return Grid1D(domain_length, c.cell_width, c.num_cells, delay, delay_offset);
}

Grid2D build_grid_2d(double domain_length_x, double domain_length_y, double delay_x,
                     double delay_y, int requested_cells_x, int requested_cells_y,
                     double snap_tolerance) {
    auto axis = [&](const char* name, double length, double delay, int cells) {
        try {
            return build_grid_1d(length, delay, cells, snap_tolerance);
        } catch (const IncommensurateDelay& e) {
            throw IncommensurateDelay(name, std::string(name) + "-axis: " + e.what(), e.nearest());
        }
    };
    Grid1D gx = axis("x", domain_length_x, delay_x, requested_cells_x);
    Grid1D gy = axis("y", domain_length_y, delay_y, requested_cells_y);
    return Grid2D{gx, gy};
}

Grid1D refine(const Grid1D& grid, double snap_tolerance) {
    Grid1D fine = build_grid_1d(grid.domain_length(), grid.delay(), 2 * grid.num_cells(),
                                snap_tolerance);
    if (fine.delay_offset() != 2 * grid.delay_offset() ||
        fine.num_cells() != 2 * grid.num_cells()) {
        throw Error(ErrorKind::MeshMismatch, "refined grid is not an exact 2x refinement");
    }
    return fine;
}

}  // namespace dpde
