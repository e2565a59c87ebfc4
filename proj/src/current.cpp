#include "wigflow/current.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "wigflow/errors.hpp"
#include "wigflow/fft.hpp"
#include "wigflow/spectral.hpp"

namespace wigflow {

namespace {

void fill_jx(CurrentField& out, const WignerField& W, double mass) {
    const PhaseGrid& g = *W.w.grid;
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            out.j.jx.at(i, k) = (g.p(k) / mass) * W.w.at(i, k);
        }
    }
}

}  // namespace

CurrentField current_integral(const DensityMatrix& rho, const Potential& V,
                              const WignerField& W) {
    require_same_grid(*rho.grid, *W.w.grid, "current_integral");
    const PhaseGrid& g = *rho.grid;

    CurrentField out;
    out.method = CurrentMethod::Integral;
    out.j.jx = ScalarField::zeros(rho.grid);
    out.j.jp = ScalarField::zeros(rho.grid);
    fill_jx(out, W, V.mass());

    // Potential on the extended half-step lattice covering every x_i +- y_j.
    const long c = static_cast<long>(g.n_y / 2);
    const long n_ext = static_cast<long>(g.n_refined()) + static_cast<long>(g.n_y);
    std::vector<double> v_ext(static_cast<std::size_t>(n_ext));
    for (long m = -c; m < static_cast<long>(g.n_refined()) + c; ++m) {
        v_ext[static_cast<std::size_t>(m + c)] =
            V.value(g.x_min + static_cast<double>(m) * g.dy);
    }

    Fft fft(g.n_y);
    std::vector<std::complex<double>> row(g.n_y);
    const double scale = -g.dy / (std::numbers::pi * g.hbar);
    double imag_peak = 0.0;
    for (std::size_t i = 0; i < g.n_x; ++i) {
        const long base = 2 * static_cast<long>(i);
        if (V.has_kink_at(g.x(i))) out.kink_diagnostic = true;
        for (std::size_t j = 0; j < g.n_y; ++j) {
            const long off = static_cast<long>(j) - c;
            double kernel;
            if (off == 0) {
                kernel = V.derivative(g.x(i), 1);  // removable y = 0 limit
            } else {
                const double y = static_cast<double>(off) * g.dy;
                kernel = (v_ext[static_cast<std::size_t>(base + off + c)] -
                          v_ext[static_cast<std::size_t>(base - off + c)]) /
                         (2.0 * y);
            }
            row[j] = kernel * rho.pair_at(i, j);
        }
        row[0] = 0.0;  // symmetric quadrature window
        centered_dft(row, +1, fft);
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            out.j.jp.at(i, k) = scale * row[k].real();
            imag_peak = std::max(imag_peak, std::abs(scale * row[k].imag()));
        }
    }
    out.imag_residual = imag_peak;
    const double jmax = out.j.jp.max_abs();
    if (!std::isfinite(jmax)) {
        throw RealnessError("current_integral: non-finite values");
    }
    if (imag_peak > 1e-10 * jmax) {
        throw RealnessError("current_integral: imaginary residue " +
                            std::to_string(imag_peak) + " exceeds 1e-10 * max|J_p|");
    }
    return out;
}

CurrentField current_moyal(const WignerField& W, const Potential& V,
                           std::optional<std::size_t> l_max) {
    const PhaseGrid& g = *W.w.grid;
    std::size_t terms;
    if (auto deg = V.taylor_degree()) {
        terms = (*deg >= 3) ? (*deg - 1) / 2 : 0;
        if (l_max && *l_max < terms) terms = *l_max;
    } else {
        if (!l_max) {
            throw std::invalid_argument(
                "current_moyal: non-polynomial potential has no terminating series; "
                "supply an explicit truncation order");
        }
        terms = *l_max;
        std::cerr << "wigflow: warning: current_moyal: truncating a non-terminating "
                     "series at l = " << terms
                  << "; high-order terms may converge poorly\n";
    }

    CurrentField out;
    out.method = CurrentMethod::Moyal;
    out.moyal_terms = terms;
    out.j.jx = ScalarField::zeros(W.w.grid);
    out.j.jp = ScalarField::zeros(W.w.grid);
    fill_jx(out, W, V.mass());

    for (std::size_t i = 0; i < g.n_x; ++i) {
        const double v1 = V.derivative(g.x(i), 1);
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            out.j.jp.at(i, k) = -v1 * W.w.at(i, k);
        }
    }
    double factor = 1.0;  // (hbar/2)^{2l} / (2l+1)! with alternating sign
    for (std::size_t l = 1; l <= terms; ++l) {
        const double ll = static_cast<double>(l);
        factor *= -(g.hbar * g.hbar / 4.0) / (2.0 * ll * (2.0 * ll + 1.0));
        const ScalarField dW = spectral_derivative(W.w, Axis::P, 2 * l);
        for (std::size_t i = 0; i < g.n_x; ++i) {
            const double vd = V.derivative(g.x(i), 2 * l + 1);
            if (vd == 0.0) continue;
            for (std::size_t k = 0; k < g.n_p(); ++k) {
                out.j.jp.at(i, k) -= factor * vd * dW.at(i, k);
            }
        }
    }
    return out;
}

CurrentField classical_current(const WignerField& W, const Potential& V) {
    const PhaseGrid& g = *W.w.grid;
    CurrentField out;
    out.method = CurrentMethod::Classical;
    out.j.jx = ScalarField::zeros(W.w.grid);
    out.j.jp = ScalarField::zeros(W.w.grid);
    fill_jx(out, W, V.mass());
    for (std::size_t i = 0; i < g.n_x; ++i) {
        if (V.has_kink_at(g.x(i))) out.kink_diagnostic = true;
        const double v1 = V.derivative(g.x(i), 1);
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            out.j.jp.at(i, k) = -v1 * W.w.at(i, k);
        }
    }
    return out;
}

ScalarField current_divergence(const CurrentField& J) {
    ScalarField div = spectral_derivative(J.j.jx, Axis::X, 1);
    const ScalarField djp = spectral_derivative(J.j.jp, Axis::P, 1);
    for (std::size_t n = 0; n < div.values.size(); ++n) div.values[n] += djp.values[n];
    return div;
}

}  // namespace wigflow
