#include "wigflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wigflow/errors.hpp"

namespace wigflow {

namespace {

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

PhaseGrid make_grid(double x_min, double x_max, std::size_t n_x, std::size_t n_y,
                    double hbar) {
    if (!(x_max > x_min)) {
        throw SizingError("make_grid: degenerate domain, x_max must exceed x_min");
    }
    if (!(hbar > 0.0)) {
        throw SizingError("make_grid: hbar must be positive");
    }
    if (n_x < 8) {
        throw SizingError("make_grid: n_x must be at least 8, got " + std::to_string(n_x));
    }
    if (n_y < 8 || !power_of_two(n_y)) {
        throw SizingError("make_grid: n_y must be a power of two >= 8, got " +
                          std::to_string(n_y));
    }
    if (n_y > 2 * n_x) {
        throw SizingError(
            "make_grid: n_y > 2*n_x puts the y-extent beyond half the x-extent (n_y=" +
            std::to_string(n_y) + ", n_x=" + std::to_string(n_x) + ")");
    }

    PhaseGrid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n_x = n_x;
    g.n_y = n_y;
    g.hbar = hbar;
    g.dx = (x_max - x_min) / static_cast<double>(n_x);
    g.dy = g.dx / 2.0;
    g.dp = std::numbers::pi * hbar / (static_cast<double>(n_y) * g.dy);
    return g;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

ScalarField ScalarField::zeros(std::shared_ptr<const PhaseGrid> grid) {
    ScalarField f;
    f.values.assign(grid->n_x * grid->n_p(), 0.0);
    f.grid = std::move(grid);
    return f;
}

bool same_grid(const PhaseGrid& a, const PhaseGrid& b) { return a == b; }

void require_same_grid(const PhaseGrid& a, const PhaseGrid& b, const char* what) {
    if (!same_grid(a, b)) {
        throw GridMismatchError(std::string(what) + ": fields live on different grids");
    }
}

}  // namespace wigflow
