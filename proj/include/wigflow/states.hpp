#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "wigflow/grid.hpp"
#include "wigflow/potential.hpp"

namespace wigflow {

/// Bound-state energy and real eigenfunction samples on the half-step lattice.
struct Eigenpair {
    double energy = 0.0;
    std::vector<double> psi;
};

/// Hermite-function eigenstate of V = (K/2) x^2; E_n = hbar*w*(n + 1/2), w = sqrt(K/M).
/// Throws DecayError when the grid does not contain the state.
Eigenpair harmonic_eigenstate(std::size_t n, double k_spring, double mass,
                              const PhaseGrid& grid);

/// Number of Morse bound states, floor(lambda - 1/2) + 1 with lambda = sqrt(2MD)/(a hbar).
std::size_t morse_bound_count(const Potential& morse, double hbar);

/// Closed-form Morse bound state (associated-Laguerre form, log-domain normalization).
/// E_n = hbar*w0*(n+1/2) - [hbar*w0*(n+1/2)]^2/(4D), w0 = a*sqrt(2D/M).
Eigenpair morse_eigenstate(std::size_t n, const Potential& morse, const PhaseGrid& grid);

/// Independent oracle: eigenpairs of the 3-point finite-difference Hamiltonian on the
/// half-step lattice with Dirichlet boundaries, sorted by energy, grid-normalized.
std::vector<Eigenpair> fd_eigensolve(const Potential& V, const PhaseGrid& grid,
                                     std::size_t n_max);

/// One pure component of a (possibly mixed) state: weight P_k, eigenbasis
/// coefficients, energies, and eigenfunction samples.
struct StateComponent {
    double weight = 1.0;
    std::vector<std::complex<double>> coeff;
    std::vector<double> energy;
    std::vector<std::vector<double>> psi;
};

/// Finite eigenbasis expansion with exact phase time dependence.
struct QuantumState {
    std::vector<StateComponent> components;
    double hbar = 1.0;
    std::string id;

    /// Psi_k(r_m, t) = sum_n c_{k,n} exp(-i E_n t / hbar) psi_n(r_m).
    std::vector<std::complex<double>> wavefunction(std::size_t k, double t) const;
    /// Its exact time derivative (phase rates only).
    std::vector<std::complex<double>> wavefunction_rate(std::size_t k, double t) const;
    /// Largest |E_m - E_n| / hbar over any component, 0 for stationary states.
    double max_beat_frequency() const;
};

QuantumState pure_eigenstate(const Eigenpair& e, double hbar, std::string id);
QuantumState superposition(const std::vector<Eigenpair>& basis,
                           std::vector<std::complex<double>> coeff, double hbar,
                           std::string id);
/// Harmonic coherent state |alpha> truncated to n_trunc terms and renormalized;
/// n_trunc = 0 picks enough terms for a negligible tail. The assembled state must
/// decay on the grid (the individual basis terms need not).
QuantumState coherent_state(std::complex<double> alpha, double k_spring, double mass,
                            double hbar, const PhaseGrid& grid, std::size_t n_trunc = 0);
QuantumState mixture(std::vector<std::pair<double, QuantumState>> parts, std::string id);

/// Weight/coefficient normalization and sampled orthonormality; throws StateError.
void validate_state(const QuantumState& s, const PhaseGrid& grid);

}  // namespace wigflow
