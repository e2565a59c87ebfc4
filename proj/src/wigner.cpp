#include "wigflow/wigner.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "wigflow/errors.hpp"
#include "wigflow/fft.hpp"

namespace wigflow {

namespace {

void check_invariants_impl(const WignerField& f, const char* who) {
    const PhaseGrid& g = *f.w.grid;
    const double wmax = f.w.max_abs();
    if (!std::isfinite(wmax)) {
        throw FieldInvariantError(std::string(who) + ": non-finite values");
    }
    if (f.imag_residual > 1e-10 * wmax) {
        throw RealnessError(std::string(who) + ": imaginary residue " +
                            std::to_string(f.imag_residual) + " exceeds 1e-10 * max|W| (" +
                            std::to_string(1e-10 * wmax) +
                            "); convention bug or aliasing");
    }
    double mass = 0.0;
    for (double v : f.w.values) mass += v;
    mass *= g.dx * g.dp;
    if (std::abs(mass - 1.0) > 1e-6) {
        throw FieldInvariantError(std::string(who) + ": normalization sum W dx dp = " +
                                  std::to_string(mass));
    }
    const double bound = 1.0 / (std::numbers::pi * g.hbar) + 1e-8;
    if (wmax > bound) {
        throw FieldInvariantError(std::string(who) + ": |W| exceeds 1/(pi hbar) bound");
    }
}

}  // namespace

WignerField wigner_from_rho(const DensityMatrix& rho, std::string state_id) {
    const PhaseGrid& g = *rho.grid;
    WignerField f;
    f.w = ScalarField::zeros(rho.grid);
    f.state_id = std::move(state_id);
    f.time = rho.time;

    Fft fft(g.n_y);
    std::vector<std::complex<double>> row(g.n_y);
    const double scale = g.dy / (std::numbers::pi * g.hbar);
    double imag_peak = 0.0;
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t j = 0; j < g.n_y; ++j) row[j] = rho.pair_at(i, j);
        row[0] = 0.0;  // unpaired most-negative y sample: symmetric quadrature window
        centered_dft(row, +1, fft);
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            f.w.at(i, k) = scale * row[k].real();
            imag_peak = std::max(imag_peak, std::abs(scale * row[k].imag()));
        }
    }
    f.imag_residual = imag_peak;
    check_invariants_impl(f, "wigner_from_rho");
    return f;
}

WignerField wigner_from_rho_momentum(const MomentumDensityMatrix& rho_t,
                                     std::string state_id) {
    const PhaseGrid& g = *rho_t.grid;
    WignerField f;
    f.w = ScalarField::zeros(rho_t.grid);
    f.state_id = std::move(state_id);
    f.time = rho_t.time;

    const double ds = g.dp / 2.0;
    const double xbar = g.x_center();
    const double scale = ds / (std::numbers::pi * g.hbar);
    const long n = static_cast<long>(g.n_y);
    const long half_x = static_cast<long>(g.n_x / 2);

    Fft fft(g.n_y);
    std::vector<std::complex<double>> line(g.n_y);
    double imag_peak = 0.0;
    for (std::size_t k = 0; k < g.n_p(); ++k) {
        // Fold the domain-center phase into the input; the remaining kernel over the
        // centered index q = i - n_x/2 is a plain forward DFT with a (-1)^q sign.
        for (std::size_t m = 0; m < g.n_y; ++m) {
            line[m] = rho_t.pair_at(k, m) *
                      std::polar(1.0, -2.0 * xbar * rho_t.s(m) / g.hbar);
        }
        line[0] = 0.0;
        fft.forward(line.data());
        for (std::size_t i = 0; i < g.n_x; ++i) {
            const long q = static_cast<long>(i) - half_x;
            const long bin = ((q % n) + n) % n;
            const double sign = (q % 2 == 0) ? 1.0 : -1.0;
            const std::complex<double> v =
                scale * sign * line[static_cast<std::size_t>(bin)];
            f.w.at(i, k) = v.real();
            imag_peak = std::max(imag_peak, std::abs(v.imag()));
        }
    }
    f.imag_residual = imag_peak;
    check_invariants_impl(f, "wigner_from_rho_momentum");
    return f;
}

std::vector<double> project_position(const WignerField& f) {
    const PhaseGrid& g = *f.w.grid;
    std::vector<double> out(g.n_x, 0.0);
    for (std::size_t i = 0; i < g.n_x; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < g.n_p(); ++k) s += f.w.at(i, k);
        out[i] = s * g.dp;
    }
    return out;
}

std::vector<double> project_momentum(const WignerField& f) {
    const PhaseGrid& g = *f.w.grid;
    std::vector<double> out(g.n_p(), 0.0);
    for (std::size_t k = 0; k < g.n_p(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.n_x; ++i) s += f.w.at(i, k);
        out[k] = s * g.dx;
    }
    return out;
}

double overlap(const WignerField& a, const WignerField& b) {
    require_same_grid(*a.w.grid, *b.w.grid, "overlap");
    const PhaseGrid& g = *a.w.grid;
    double s = 0.0;
    for (std::size_t n = 0; n < a.w.values.size(); ++n) {
        s += a.w.values[n] * b.w.values[n];
    }
    return 2.0 * std::numbers::pi * g.hbar * s * g.dx * g.dp;
}

void check_wigner_invariants(const WignerField& f) {
    check_invariants_impl(f, "wigner_invariants");
}

}  // namespace wigflow
