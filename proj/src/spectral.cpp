#include "wigflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>
#include <string>

#include "wigflow/errors.hpp"
#include "wigflow/fft.hpp"

namespace wigflow {

namespace {

// (i*w)^order for each DFT bin of a length-n grid with spacing h.
// Odd orders zero the Nyquist bin (its sign is ambiguous).
std::vector<std::complex<double>> derivative_symbol(std::size_t n, double h,
                                                    std::size_t order) {
    std::vector<std::complex<double>> sym(n);
    const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * h);
    static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::size_t m = 0; m < n; ++m) {
        double s = (m <= n / 2) ? static_cast<double>(m)
                                : static_cast<double>(m) - static_cast<double>(n);
        if (order % 2 == 1 && n % 2 == 0 && m == n / 2) {
            sym[m] = 0.0;
            continue;
        }
        const double w = base * s;
        sym[m] = ipow[order % 4] * std::pow(w, static_cast<double>(order));
    }
    return sym;
}

void warn_edge(double edge, double peak, const char* where) {
    if (peak > 0.0 && edge > 1e-8 * peak) {
        std::cerr << "wigflow: warning: " << where
                  << ": field amplitude at the grid edge is " << edge / peak
                  << " of max; spectral accuracy degrades without edge decay\n";
    }
}

void apply_line(std::vector<std::complex<double>>& line, const Fft& fft,
                const std::vector<std::complex<double>>& sym) {
    fft.forward(line.data());
    for (std::size_t m = 0; m < line.size(); ++m) line[m] *= sym[m];
    fft.backward(line.data());
    const double inv = 1.0 / static_cast<double>(line.size());
    for (auto& v : line) v *= inv;
}

}  // namespace

ScalarField spectral_derivative(const ScalarField& f, Axis axis, std::size_t order) {
    const PhaseGrid& g = *f.grid;
    const std::size_t n = (axis == Axis::X) ? g.n_x : g.n_p();
    if (order > n / 2) {
        throw SizingError("spectral_derivative: order " + std::to_string(order) +
                          " exceeds n/2 = " + std::to_string(n / 2));
    }
    if (order == 0) return f;

    // Edge-decay precondition. Lines that are constant along the axis wrap
    // periodically without error, so only varying lines count.
    double peak = f.max_abs();
    double edge = 0.0;
    if (axis == Axis::X) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            double lo = f.at(0, k), hi = lo;
            for (std::size_t i = 0; i < g.n_x; ++i) {
                lo = std::min(lo, f.at(i, k));
                hi = std::max(hi, f.at(i, k));
            }
            if (hi - lo <= 1e-12 * peak) continue;
            edge = std::max({edge, std::abs(f.at(0, k)), std::abs(f.at(g.n_x - 1, k))});
        }
    } else {
        for (std::size_t i = 0; i < g.n_x; ++i) {
            double lo = f.at(i, 0), hi = lo;
            for (std::size_t k = 0; k < g.n_p(); ++k) {
                lo = std::min(lo, f.at(i, k));
                hi = std::max(hi, f.at(i, k));
            }
            if (hi - lo <= 1e-12 * peak) continue;
            edge = std::max({edge, std::abs(f.at(i, 0)), std::abs(f.at(i, g.n_p() - 1))});
        }
    }
    warn_edge(edge, peak, axis == Axis::X ? "d/dx" : "d/dp");

    const double h = (axis == Axis::X) ? g.dx : g.dp;
    const auto sym = derivative_symbol(n, h, order);
    Fft fft(n);
    ScalarField out = ScalarField::zeros(f.grid);
    std::vector<std::complex<double>> line(n);

    if (axis == Axis::P) {
        for (std::size_t i = 0; i < g.n_x; ++i) {
            for (std::size_t k = 0; k < n; ++k) line[k] = f.at(i, k);
            apply_line(line, fft, sym);
            for (std::size_t k = 0; k < n; ++k) out.at(i, k) = line[k].real();
        }
    } else {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            for (std::size_t i = 0; i < n; ++i) line[i] = f.at(i, k);
            apply_line(line, fft, sym);
            for (std::size_t i = 0; i < n; ++i) out.at(i, k) = line[i].real();
        }
    }
    return out;
}

std::vector<double> spectral_derivative_1d(const std::vector<double>& f, double h,
                                           std::size_t order) {
    const std::size_t n = f.size();
    if (order > n / 2) {
        throw SizingError("spectral_derivative_1d: order exceeds n/2");
    }
    if (order == 0) return f;
    const auto sym = derivative_symbol(n, h, order);
    Fft fft(n);
    std::vector<std::complex<double>> line(f.begin(), f.end());
    apply_line(line, fft, sym);
    std::vector<double> out(n);
    for (std::size_t m = 0; m < n; ++m) out[m] = line[m].real();
    return out;
}

}  // namespace wigflow
