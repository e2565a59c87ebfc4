#pragma once

#include <optional>

#include "wigflow/density.hpp"
#include "wigflow/grid.hpp"
#include "wigflow/potential.hpp"
#include "wigflow/wigner.hpp"

namespace wigflow {

enum class CurrentMethod { Integral, Moyal, Classical };

/// Phase-space current J = (J_x, J_p). J_x is (p/M) W built from the same W samples
/// (bitwise). kink_diagnostic marks a piecewise potential whose breakpoint sat on a
/// grid point (mean one-sided slope used there).
struct CurrentField {
    VectorField j;
    CurrentMethod method = CurrentMethod::Integral;
    std::size_t moyal_terms = 0;  // number of l >= 1 tail terms included
    double imag_residual = 0.0;
    bool kink_diagnostic = false;
};

/// Integral form: J_p(x,p) = -(1/pi hbar) sum_y [V(x+y) - V(x-y)]/(2y)
/// rho(x-y, x+y) e^{2ipy/hbar} dy; the y = 0 kernel value is the derivative limit
/// V'(x). rho and W must describe the same state, time and grid.
CurrentField current_integral(const DensityMatrix& rho, const Potential& V,
                              const WignerField& W);

/// Truncated Moyal series:
/// J_p = -W dV/dx - sum_{l>=1} (-1)^l (hbar/2)^{2l} / (2l+1)! d_p^{2l}W d_x^{2l+1}V.
/// Terminates exactly for polynomial V; non-polynomial V requires an explicit l_max
/// (a truncation warning is emitted; the series may converge poorly).
CurrentField current_moyal(const WignerField& W, const Potential& V,
                           std::optional<std::size_t> l_max = std::nullopt);

/// Classical current j = W v with v = (p/M, -dV/dx).
CurrentField classical_current(const WignerField& W, const Potential& V);

/// Spectral divergence d_x J_x + d_p J_p.
ScalarField current_divergence(const CurrentField& J);

}  // namespace wigflow
