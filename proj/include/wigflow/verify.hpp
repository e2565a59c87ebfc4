#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wigflow/grid.hpp"
#include "wigflow/potential.hpp"
#include "wigflow/states.hpp"
#include "wigflow/wigner.hpp"

namespace wigflow {

struct CheckReport {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;  // always residual <= tolerance
    std::map<std::string, std::string> meta;
};

/// Continuity: max |[W(t+dt) - W(t-dt)]/(2dt) + div J(t)| with spectral div J.
/// Stationary states report ||div J|| directly against a spectral-floor tolerance;
/// beating states use the exact O(dt^2) centered-difference bias plus a spectral
/// floor. tol < 0 selects the automatic tolerance.
CheckReport check_continuity(const QuantumState& s, const Potential& V,
                             std::shared_ptr<const PhaseGrid> grid, double t, double dt,
                             double tol = -1.0);

/// The four projection identities of the current:
///   (a) int dp J_x  vs the position-space probability current from the wavefunction,
///   (b) int dx J_x  vs (p/M) rho~(p,p),
///   (c) int dx J_p  vs the momentum-space current -int_{-inf}^p dp' d_t rho~(p',p')
///       (lower-edge trapezoid with the dp^2/12 endpoint-derivative correction),
///   (d) int dp J_p  vs -rho(x,x) dV/dx.
std::vector<CheckReport> check_projections(const QuantumState& s, const Potential& V,
                                           std::shared_ptr<const PhaseGrid> grid,
                                           double t, double tol = -1.0);

/// Ehrenfest pairings: {int int J_x, <p>/M, d<x>/dt} and {int int J_p, -<dV/dx>,
/// d<p>/dt}, residuals reported pairwise.
std::vector<CheckReport> check_ehrenfest(const QuantumState& s, const Potential& V,
                                         std::shared_ptr<const PhaseGrid> grid, double t,
                                         double dt, double tol = -1.0);

/// Reports min W and the relative L2 distance to the moment-matched Gaussian;
/// classifies positive-Gaussian vs negative-somewhere. A positive state must be
/// Gaussian (pass tolerance on the fit distance); negative states carry no
/// constraint.
CheckReport check_hudson(const WignerField& W);

/// The full identity suite over the standard state set (harmonic n=0,1,2, coherent,
/// (0,1)-superposition; Morse n=0,1, (0,1)-superposition) at the default grids.
std::vector<CheckReport> run_standard_suite(double dt = 1e-4);

}  // namespace wigflow
