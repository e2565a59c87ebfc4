#pragma once

#include <string>
#include <vector>

#include "wigflow/density.hpp"
#include "wigflow/grid.hpp"

namespace wigflow {

/// Real phase-space distribution with provenance. Construction checks realness
/// (imaginary residue <= 1e-10 max|W|), normalization (sum W dx dp = 1 +- 1e-6) and
/// the magnitude bound |W| <= 1/(pi hbar) + 1e-8.
struct WignerField {
    ScalarField w;
    std::string state_id;
    double time = 0.0;
    double imag_residual = 0.0;
};

/// Position-route transform: W(x,p) = (1/pi hbar) sum_y rho(x-y, x+y) e^{2ipy/hbar} dy,
/// row-wise centered FFT. The unpaired most-negative y sample is excluded so the
/// quadrature window is symmetric.
WignerField wigner_from_rho(const DensityMatrix& rho, std::string state_id = "");

/// Momentum-route transform: W(x,p) = (1/pi hbar) sum_s rho~(p-s, p+s) e^{-2ixs/hbar} ds.
/// Agrees with the position route within quadrature tolerance; the comparison is the
/// position/momentum symmetry check.
WignerField wigner_from_rho_momentum(const MomentumDensityMatrix& rho_t,
                                     std::string state_id = "");

/// int W dp: probability density over x (on the x-grid).
std::vector<double> project_position(const WignerField& f);
/// int W dx: probability density over p (on the p-grid).
std::vector<double> project_momentum(const WignerField& f);

/// 2 pi hbar sum W1 W2 dx dp = |<psi1|psi2>|^2. Rejects mismatched grids.
double overlap(const WignerField& a, const WignerField& b);

/// Re-checks the type invariants of an existing field (throws on violation).
void check_wigner_invariants(const WignerField& f);

}  // namespace wigflow
