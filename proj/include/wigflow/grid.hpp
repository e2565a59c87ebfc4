#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace wigflow {

/// Uniform phase-space grid.
///
/// The position grid has n_x points x_i = x_min + i*dx with dx = (x_max - x_min)/n_x.
/// The separation grid y_j = (j - n_y/2)*dy, dy = dx/2, is symmetric about 0 so that
/// x_i ± y_j lands on the half-step lattice r_m = x_min + m*dy. The momentum grid
/// p_k = (k - n_y/2)*dp is the exact conjugate of the y-grid under the half-range
/// kernel exp(2ipy/hbar): dp*dy = pi*hbar/n_y.
struct PhaseGrid {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n_x = 0;
    std::size_t n_y = 0;
    double hbar = 1.0;
    double dx = 0.0;
    double dy = 0.0;
    double dp = 0.0;

    std::size_t n_p() const { return n_y; }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }
    double y(std::size_t j) const {
        return (static_cast<double>(j) - static_cast<double>(n_y / 2)) * dy;
    }
    double p(std::size_t k) const {
        return (static_cast<double>(k) - static_cast<double>(n_y / 2)) * dp;
    }
    double p_min() const { return p(0); }

    /// Half-step lattice carrying the wavefunction samples, r_m = x_min + m*dy.
    std::size_t n_refined() const { return 2 * n_x; }
    double refined(std::size_t m) const { return x_min + static_cast<double>(m) * dy; }

    /// Grid point closest to the domain center; phase reference of the momentum route.
    double x_center() const { return x(n_x / 2); }

    bool operator==(const PhaseGrid&) const = default;
};

/// Validates counts (n_x >= 8, n_y >= 8 and a power of two, n_y <= 2 n_x so the
/// y-extent stays within half the x-extent) and builds the conjugate grids.
PhaseGrid make_grid(double x_min, double x_max, std::size_t n_x, std::size_t n_y,
                    double hbar);

/// Real samples on a PhaseGrid, shape (n_x x n_p), row-major in x.
struct ScalarField {
    std::shared_ptr<const PhaseGrid> grid;
    std::vector<double> values;

    double& at(std::size_t i, std::size_t k) { return values[i * grid->n_p() + k]; }
    double at(std::size_t i, std::size_t k) const { return values[i * grid->n_p() + k]; }
    double max_abs() const;

    static ScalarField zeros(std::shared_ptr<const PhaseGrid> grid);
};

/// Two-component field (jx, jp) on one shared grid.
struct VectorField {
    ScalarField jx;
    ScalarField jp;
};

bool same_grid(const PhaseGrid& a, const PhaseGrid& b);
void require_same_grid(const PhaseGrid& a, const PhaseGrid& b, const char* what);

}  // namespace wigflow
