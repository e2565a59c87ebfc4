#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "wigflow/current.hpp"
#include "wigflow/grid.hpp"
#include "wigflow/potential.hpp"
#include "wigflow/wigner.hpp"

namespace wigflow {

/// Velocity field w = J / W. w_x = p/M holds exactly everywhere. Cells with
/// |W| <= eps_w * max|W| are masked unless the singularity is removable: where the
/// local limit estimate l = dJ_p/dW (along p, falling back to x when the zero curve
/// is p-degenerate) reproduces J_p = l*W to 1e-6 * max|J_p|, the cell reports the
/// finite limit and is unmasked.
struct VelocityField {
    VectorField w;
    std::vector<std::uint8_t> mask;  // 1 = singular (not removable)
    double eps_w = 0.0;
};

/// div w = d_p(J_p/W) on the unmasked region (the d_x(p/M) term vanishes identically
/// and is asserted to). Carries the raw values, the (2/pi) arctan compression for
/// export, and the plain-threshold singular mask.
struct DivergenceMap {
    ScalarField div;
    ScalarField div_arctan;
    std::vector<std::uint8_t> mask;  // 1 wherever |W| <= eps_w * max|W|
    double eps_w = 0.0;

    /// Largest |div w| over unmasked cells.
    double unmasked_sup() const;
};

/// Residual R = J_p + W dV/dx together with the best per-column fit of a
/// p-independent correction -W * dV'(x): dynamics is Liouvillian iff the post-fit
/// residual vanishes.
struct LiouvilleFit {
    ScalarField residual;
    ScalarField post_fit;
    std::vector<double> delta_v_prime;  // fitted dV'(x_i) per column
    double residual_norm = 0.0;         // L2, measure dx dp
    double post_fit_norm = 0.0;
    double max_delta_v_prime = 0.0;
};

struct StagnationPoint {
    double x = 0.0;
    double p = 0.0;
    int omega = 0;            // winding rounded to the nearest integer
    double winding = 0.0;     // raw winding number
    double quant_error = 0.0; // |winding - omega|; > 0.1 flags a non-generic zero
    double residual = 0.0;    // |J| interpolated at the refined location
    bool indeterminate = false;  // loop crossed a numerical zero of |J|
};

struct Window {
    double x_lo, x_hi, p_lo, p_hi;
    static Window full(const PhaseGrid& g);
};

enum class FieldlineEnd { LeftDomain, MaxSteps, ReachedStagnation, SeedOutside };

struct Fieldline {
    std::vector<std::array<double, 2>> points;
    FieldlineEnd reason = FieldlineEnd::MaxSteps;
};

VelocityField velocity_field(const CurrentField& J, const WignerField& W, double eps_w);

DivergenceMap divergence_w(const CurrentField& J, const WignerField& W, double eps_w);

/// Literal ratio-path divergence: spectral d_p of J_p/W with masked cells filled by
/// nearest-unmasked continuation along p. Valid where the ratio extends smoothly
/// (quadratic potentials); kept as the consistency route against divergence_w.
ScalarField divergence_w_from_ratio(const CurrentField& J, const WignerField& W,
                                    double eps_w);

LiouvilleFit liouville_residual(const CurrentField& J, const WignerField& W,
                                const Potential& V);

/// Zero cells of both components -> bilinear sub-cell refinement -> winding number
/// on the 8-node loop around the nearest node.
std::vector<StagnationPoint> stagnation_points(const CurrentField& J, const Window& win);
std::vector<StagnationPoint> stagnation_points(const CurrentField& J);

/// Winding of J's angle around the rectangle of half-widths (rx, rp) centered at
/// (x, p), sampled at n perimeter points (bilinear J). hit_zero reports a loop sample
/// with |J| at the numerical floor.
double winding_number(const CurrentField& J, double x, double p, double rx, double rp,
                      std::size_t n, bool* hit_zero = nullptr);

/// Fixed-step 4th-order integration of dX/dtau = J(X) with bilinear interpolation.
/// Terminates on domain exit, step budget, or |J| below the stagnation floor.
/// Out-of-domain seeds are rejected per seed (reason SeedOutside).
std::vector<Fieldline> fieldlines(const CurrentField& J,
                                  const std::vector<std::array<double, 2>>& seeds,
                                  double step, std::size_t max_steps);

/// Bilinear sample of a field at (x, p); empty outside the node hull.
std::optional<double> sample_bilinear(const ScalarField& f, double x, double p);

}  // namespace wigflow
