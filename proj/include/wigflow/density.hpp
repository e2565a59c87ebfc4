#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "wigflow/grid.hpp"
#include "wigflow/states.hpp"

namespace wigflow {

/// Position-representation density matrix sampled at the split-argument pairs
/// (x_i - y_j, x_i + y_j) needed by the half-range transform, plus its diagonal
/// on the half-step lattice. Hermitian by construction; arguments outside the
/// declared domain contribute zero (compact support).
struct DensityMatrix {
    std::shared_ptr<const PhaseGrid> grid;
    double time = 0.0;
    std::vector<std::complex<double>> pair;  // n_x rows, n_y columns
    std::vector<double> diag;                // rho(r_m, r_m), n_refined values

    std::complex<double> pair_at(std::size_t i, std::size_t j) const {
        return pair[i * grid->n_y + j];
    }
};

/// Momentum-representation counterpart, sampled at (p_k - s_m, p_k + s_m) with
/// s_m = (m - n_y/2) * dp/2, plus the diagonal on the p-grid and its exact time
/// derivative (phase rates).
struct MomentumDensityMatrix {
    std::shared_ptr<const PhaseGrid> grid;
    double time = 0.0;
    std::vector<std::complex<double>> pair;  // n_p rows, n_y columns
    std::vector<double> diag;                // rho~(p_k, p_k)
    std::vector<double> diag_rate;           // d/dt rho~(p_k, p_k)

    std::complex<double> pair_at(std::size_t k, std::size_t m) const {
        return pair[k * grid->n_y + m];
    }
    double s(std::size_t m) const {
        return (static_cast<double>(m) - static_cast<double>(grid->n_y / 2)) *
               (grid->dp / 2.0);
    }
};

/// rho(a, b, t) = sum_k P_k Psi_k(a, t) Psi_k*(b, t). Validates the state.
DensityMatrix density_matrix(const QuantumState& s, double t,
                             std::shared_ptr<const PhaseGrid> grid);

/// Momentum-space density matrix from the Fourier transforms of the wavefunctions.
MomentumDensityMatrix momentum_density_matrix(const QuantumState& s, double t,
                                              std::shared_ptr<const PhaseGrid> grid);

/// Diagonal rho~(p_k, p_k, t) only (cheaper than the full pair matrix).
std::vector<double> momentum_diagonal(const QuantumState& s, double t,
                                      const PhaseGrid& grid);

/// Trace via the half-step diagonal, sum rho(r,r) dy.
double trace(const DensityMatrix& rho);

/// Tr rho^2 over the sampled band, sum |rho(a,b)|^2 * dx^2 (the pair-lattice measure).
double purity(const DensityMatrix& rho);

/// Max Hermiticity violation |rho(a,b) - rho(b,a)*| over the sampled pairs.
double hermiticity_defect(const DensityMatrix& rho);

}  // namespace wigflow
