#include "wigflow/states.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "wigflow/errors.hpp"

namespace wigflow {

namespace {

void check_edge_decay(const std::vector<double>& psi, const char* who, bool hard) {
    double peak = 0.0;
    for (double v : psi) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(psi.front()), std::abs(psi.back()));
    if (peak == 0.0 || edge > 1e-8 * peak) {
        if (hard) {
            throw DecayError(std::string(who) +
                             ": eigenfunction does not decay at the grid edge "
                             "(grid too small for this state)");
        }
        std::cerr << "wigflow: warning: " << who
                  << ": eigenfunction edge amplitude is " << edge / peak
                  << " of max; enlarge the domain for full accuracy\n";
    }
}

// Normalized Hermite functions h_n(xi) via the stable three-term recurrence.
double hermite_function(std::size_t n, double xi) {
    const double h0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
    if (n == 0) return h0;
    double hm1 = h0;
    double h = xi * std::numbers::sqrt2 * h0;
    for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        double next = xi * std::sqrt(2.0 / kk) * h - std::sqrt((kk - 1.0) / kk) * hm1;
        hm1 = h;
        h = next;
    }
    return h;
}

// Generalized Laguerre L_n^{(alpha)}(z), upward recurrence.
double laguerre(std::size_t n, double alpha, double z) {
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + alpha - z;
    for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        double next = ((2.0 * kk - 1.0 + alpha - z) * l - (kk - 1.0 + alpha) * lm1) / kk;
        lm1 = l;
        l = next;
    }
    return l;
}

double grid_inner(const std::vector<double>& a, const std::vector<double>& b, double h) {
    double s = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) s += a[m] * b[m];
    return s * h;
}

}  // namespace

namespace {

Eigenpair harmonic_eigenstate_impl(std::size_t n, double k_spring, double mass,
                                   const PhaseGrid& grid) {
    if (!(k_spring > 0.0)) {
        throw std::invalid_argument("harmonic_eigenstate: spring constant must be positive");
    }
    const double omega = std::sqrt(k_spring / mass);
    const double scale = std::sqrt(mass * omega / grid.hbar);
    Eigenpair e;
    e.energy = grid.hbar * omega * (static_cast<double>(n) + 0.5);
    e.psi.resize(grid.n_refined());
    for (std::size_t m = 0; m < e.psi.size(); ++m) {
        e.psi[m] = std::sqrt(scale) * hermite_function(n, scale * grid.refined(m));
    }
    return e;
}

}  // namespace

Eigenpair harmonic_eigenstate(std::size_t n, double k_spring, double mass,
                              const PhaseGrid& grid) {
    Eigenpair e = harmonic_eigenstate_impl(n, k_spring, mass, grid);
    check_edge_decay(e.psi, "harmonic_eigenstate", /*hard=*/true);
    return e;
}

std::size_t morse_bound_count(const Potential& morse, double hbar) {
    if (morse.kind() != Potential::Kind::Morse) {
        throw std::invalid_argument("morse_bound_count: potential is not a Morse well");
    }
    const double lambda = std::sqrt(2.0 * morse.mass() * morse.morse_depth()) /
                          (morse.morse_range() * hbar);
    // Bound states need lambda - n - 1/2 > 0; exclude the marginal integer case.
    std::size_t count = 0;
    while (lambda - static_cast<double>(count) - 0.5 > 1e-9) ++count;
    return count;
}

Eigenpair morse_eigenstate(std::size_t n, const Potential& morse, const PhaseGrid& grid) {
    const std::size_t bound = morse_bound_count(morse, grid.hbar);
    if (n >= bound) {
        throw std::invalid_argument("morse_eigenstate: n=" + std::to_string(n) +
                                    " is beyond the bound spectrum (" +
                                    std::to_string(bound) + " bound states)");
    }
    const double D = morse.morse_depth();
    const double a = morse.morse_range();
    const double M = morse.mass();
    const double hbar = grid.hbar;
    const double lambda = std::sqrt(2.0 * M * D) / (a * hbar);
    const double omega0 = a * std::sqrt(2.0 * D / M);
    const double nn = static_cast<double>(n);

    Eigenpair e;
    const double q = hbar * omega0 * (nn + 0.5);
    e.energy = q - q * q / (4.0 * D);

    // psi_n = N z^{lambda-n-1/2} e^{-z/2} L_n^{(2 lambda - 2n - 1)}(z), z = 2 lambda e^{-ax}.
    // N^2 = a n! (2 lambda - 2n - 1) / Gamma(2 lambda - n); assembled in the log domain.
    const double alpha = 2.0 * lambda - 2.0 * nn - 1.0;
    const double log_norm = 0.5 * (std::log(a) + std::lgamma(nn + 1.0) + std::log(alpha) -
                                   std::lgamma(2.0 * lambda - nn));
    e.psi.resize(grid.n_refined());
    for (std::size_t m = 0; m < e.psi.size(); ++m) {
        const double z = 2.0 * lambda * std::exp(-a * grid.refined(m));
        const double lag = laguerre(n, alpha, z);
        const double log_mag = log_norm + (lambda - nn - 0.5) * std::log(z) - 0.5 * z;
        e.psi[m] = (lag == 0.0) ? 0.0 : std::copysign(std::exp(log_mag + std::log(std::abs(lag))), lag);
    }
    check_edge_decay(e.psi, "morse_eigenstate", /*hard=*/false);
    return e;
}

std::vector<Eigenpair> fd_eigensolve(const Potential& V, const PhaseGrid& grid,
                                     std::size_t n_max) {
    if (n_max == 0) return {};
    if (n_max > 16) {
        throw std::invalid_argument("fd_eigensolve: n_max must be <= 16");
    }
    const auto n = static_cast<lapack_int>(grid.n_refined());
    const double h = grid.dy;
    const double kin = grid.hbar * grid.hbar / (2.0 * V.mass() * h * h);

    std::vector<double> diag(n), off(n - 1);
    for (lapack_int m = 0; m < n; ++m) {
        diag[m] = 2.0 * kin + V.value(grid.refined(static_cast<std::size_t>(m)));
    }
    std::fill(off.begin(), off.end(), -kin);

    const auto want = static_cast<lapack_int>(n_max);
    std::vector<double> w(n), z(static_cast<std::size_t>(n) * n_max);
    std::vector<lapack_int> isuppz(2 * n_max);
    lapack_int found = 0;
    lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(),
                                     0.0, 0.0, 1, want, 0.0, &found, w.data(), z.data(), n,
                                     isuppz.data());
    if (info != 0 || found != want) {
        throw EigensolveError("fd_eigensolve: tridiagonal solve failed (info=" +
                              std::to_string(info) + ", found=" + std::to_string(found) +
                              " of " + std::to_string(n_max) + ")");
    }
    for (std::size_t j = 1; j < n_max; ++j) {
        if (!(w[j] > w[j - 1] - 1e-12)) {
            throw EigensolveError("fd_eigensolve: spectrum not ordered; degenerate discretization");
        }
    }

    std::vector<Eigenpair> out(n_max);
    for (std::size_t j = 0; j < n_max; ++j) {
        out[j].energy = w[j];
        out[j].psi.assign(z.begin() + static_cast<std::ptrdiff_t>(j * n),
                          z.begin() + static_cast<std::ptrdiff_t>((j + 1) * n));
        // LAPACK returns unit 2-norm vectors; convert to unit grid norm.
        const double scale = 1.0 / std::sqrt(h);
        for (auto& v : out[j].psi) v *= scale;
        // Deterministic sign: largest-magnitude sample positive.
        std::size_t peak = 0;
        for (std::size_t m = 1; m < out[j].psi.size(); ++m) {
            if (std::abs(out[j].psi[m]) > std::abs(out[j].psi[peak])) peak = m;
        }
        if (out[j].psi[peak] < 0.0) {
            for (auto& v : out[j].psi) v = -v;
        }
    }
    return out;
}

std::vector<std::complex<double>> QuantumState::wavefunction(std::size_t k, double t) const {
    const StateComponent& c = components.at(k);
    std::vector<std::complex<double>> psi(c.psi.empty() ? 0 : c.psi[0].size(), 0.0);
    for (std::size_t n = 0; n < c.coeff.size(); ++n) {
        const std::complex<double> amp =
            c.coeff[n] * std::polar(1.0, -c.energy[n] * t / hbar);
        for (std::size_t m = 0; m < psi.size(); ++m) psi[m] += amp * c.psi[n][m];
    }
    return psi;
}

std::vector<std::complex<double>> QuantumState::wavefunction_rate(std::size_t k,
                                                                  double t) const {
    const StateComponent& c = components.at(k);
    std::vector<std::complex<double>> dpsi(c.psi.empty() ? 0 : c.psi[0].size(), 0.0);
    for (std::size_t n = 0; n < c.coeff.size(); ++n) {
        const std::complex<double> amp = c.coeff[n] *
                                         std::polar(1.0, -c.energy[n] * t / hbar) *
                                         std::complex<double>(0.0, -c.energy[n] / hbar);
        for (std::size_t m = 0; m < dpsi.size(); ++m) dpsi[m] += amp * c.psi[n][m];
    }
    return dpsi;
}

double QuantumState::max_beat_frequency() const {
    double beat = 0.0;
    for (const auto& c : components) {
        for (std::size_t i = 0; i < c.energy.size(); ++i) {
            if (std::abs(c.coeff[i]) == 0.0) continue;
            for (std::size_t j = i + 1; j < c.energy.size(); ++j) {
                if (std::abs(c.coeff[j]) == 0.0) continue;
                beat = std::max(beat, std::abs(c.energy[i] - c.energy[j]) / hbar);
            }
        }
    }
    return beat;
}

QuantumState pure_eigenstate(const Eigenpair& e, double hbar, std::string id) {
    QuantumState s;
    s.hbar = hbar;
    s.id = std::move(id);
    StateComponent c;
    c.weight = 1.0;
    c.coeff = {1.0};
    c.energy = {e.energy};
    c.psi = {e.psi};
    s.components.push_back(std::move(c));
    return s;
}

QuantumState superposition(const std::vector<Eigenpair>& basis,
                           std::vector<std::complex<double>> coeff, double hbar,
                           std::string id) {
    if (basis.size() != coeff.size() || basis.empty()) {
        throw StateError("superposition: need one coefficient per eigenpair");
    }
    double norm = 0.0;
    for (const auto& a : coeff) norm += std::norm(a);
    if (!(norm > 0.0)) throw StateError("superposition: zero state");
    for (auto& a : coeff) a /= std::sqrt(norm);

    QuantumState s;
    s.hbar = hbar;
    s.id = std::move(id);
    StateComponent c;
    c.weight = 1.0;
    c.coeff = std::move(coeff);
    for (const auto& e : basis) {
        c.energy.push_back(e.energy);
        c.psi.push_back(e.psi);
    }
    s.components.push_back(std::move(c));
    return s;
}

QuantumState coherent_state(std::complex<double> alpha, double k_spring, double mass,
                            double hbar, const PhaseGrid& grid, std::size_t n_trunc) {
    if (n_trunc == 0) {
        // Enough terms for a ~1e-13 truncated tail at this displacement.
        n_trunc = static_cast<std::size_t>(std::ceil(std::norm(alpha))) + 19;
    }
    // High-n basis terms need not decay on the grid by themselves; the assembled
    // state must (checked below).
    std::vector<Eigenpair> basis;
    std::vector<std::complex<double>> coeff;
    double log_fact = 0.0;
    for (std::size_t n = 0; n < n_trunc; ++n) {
        if (n > 0) log_fact += std::log(static_cast<double>(n));
        basis.push_back(harmonic_eigenstate_impl(n, k_spring, mass, grid));
        coeff.push_back(std::pow(alpha, static_cast<double>(n)) *
                        std::exp(-0.5 * std::norm(alpha) - 0.5 * log_fact));
    }
    char id[64];
    std::snprintf(id, sizeof(id), "coherent(%.6g%+.6gi)", alpha.real(), alpha.imag());
    QuantumState s = superposition(basis, std::move(coeff), hbar, id);

    const auto psi = s.wavefunction(0, 0.0);
    std::vector<double> mag(psi.size());
    for (std::size_t m = 0; m < psi.size(); ++m) mag[m] = std::abs(psi[m]);
    check_edge_decay(mag, "coherent_state", /*hard=*/true);
    return s;
}

QuantumState mixture(std::vector<std::pair<double, QuantumState>> parts, std::string id) {
    if (parts.empty()) throw StateError("mixture: empty");
    double total = 0.0;
    for (auto& [w, st] : parts) {
        if (w < 0.0) throw StateError("mixture: negative weight");
        total += w;
    }
    if (!(total > 0.0)) throw StateError("mixture: zero total weight");

    QuantumState s;
    s.hbar = parts.front().second.hbar;
    s.id = std::move(id);
    for (auto& [w, st] : parts) {
        if (st.hbar != s.hbar) throw StateError("mixture: inconsistent hbar");
        for (auto& c : st.components) {
            StateComponent cc = c;
            cc.weight = c.weight * w / total;
            s.components.push_back(std::move(cc));
        }
    }
    return s;
}

void validate_state(const QuantumState& s, const PhaseGrid& grid) {
    if (s.components.empty()) throw StateError("state: no components");
    double wsum = 0.0;
    for (const auto& c : s.components) wsum += c.weight;
    if (std::abs(wsum - 1.0) > 1e-10) {
        throw StateError("state: component weights sum to " + std::to_string(wsum));
    }
    for (const auto& c : s.components) {
        if (c.coeff.size() != c.energy.size() || c.coeff.size() != c.psi.size() ||
            c.coeff.empty()) {
            throw StateError("state: ragged component");
        }
        double norm = 0.0;
        for (const auto& a : c.coeff) norm += std::norm(a);
        if (std::abs(norm - 1.0) > 1e-10) {
            throw StateError("state: coefficient norm deviates from 1 by " +
                             std::to_string(std::abs(norm - 1.0)));
        }
        for (const auto& psi : c.psi) {
            if (psi.size() != grid.n_refined()) {
                throw StateError("state: eigenfunction sampled on a different lattice");
            }
        }
        for (std::size_t i = 0; i < c.psi.size(); ++i) {
            for (std::size_t j = i; j < c.psi.size(); ++j) {
                const double want = (i == j) ? 1.0 : 0.0;
                const double got = grid_inner(c.psi[i], c.psi[j], grid.dy);
                if (std::abs(got - want) > 1e-6) {
                    throw StateError("state: eigenfunctions not orthonormal on the grid (<" +
                                     std::to_string(i) + "|" + std::to_string(j) +
                                     "> = " + std::to_string(got) + ")");
                }
            }
        }
    }
}

}  // namespace wigflow
