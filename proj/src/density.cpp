#include "wigflow/density.hpp"

#include <cmath>
#include <numbers>

#include "wigflow/errors.hpp"

namespace wigflow {

namespace {

// Continuous Fourier transform of a half-step-lattice sample set, evaluated at
// momentum u*ds: psi~(p) = (2 pi hbar)^{-1/2} sum_m psi(r_m) exp(-i p r_m / hbar) dy.
std::vector<std::complex<double>> momentum_samples(
    const std::vector<std::complex<double>>& psi, const PhaseGrid& g,
    long u_lo, long u_hi, double ds) {
    std::vector<std::complex<double>> out(static_cast<std::size_t>(u_hi - u_lo), 0.0);
    const double norm = g.dy / std::sqrt(2.0 * std::numbers::pi * g.hbar);
    for (long u = u_lo; u < u_hi; ++u) {
        const double p = static_cast<double>(u) * ds;
        std::complex<double> acc = 0.0;
        for (std::size_t m = 0; m < psi.size(); ++m) {
            acc += psi[m] * std::polar(1.0, -p * g.refined(m) / g.hbar);
        }
        out[static_cast<std::size_t>(u - u_lo)] = acc * norm;
    }
    return out;
}

}  // namespace

DensityMatrix density_matrix(const QuantumState& s, double t,
                             std::shared_ptr<const PhaseGrid> grid) {
    const PhaseGrid& g = *grid;
    validate_state(s, g);

    DensityMatrix rho;
    rho.grid = grid;
    rho.time = t;
    rho.pair.assign(g.n_x * g.n_y, 0.0);
    rho.diag.assign(g.n_refined(), 0.0);

    const long c = static_cast<long>(g.n_y / 2);
    const long nref = static_cast<long>(g.n_refined());
    for (std::size_t k = 0; k < s.components.size(); ++k) {
        const double w = s.components[k].weight;
        const auto psi = s.wavefunction(k, t);
        for (std::size_t i = 0; i < g.n_x; ++i) {
            const long base = 2 * static_cast<long>(i);
            for (std::size_t j = 0; j < g.n_y; ++j) {
                const long off = static_cast<long>(j) - c;
                const long lo = base - off;  // x - y
                const long hi = base + off;  // x + y
                if (lo < 0 || lo >= nref || hi < 0 || hi >= nref) continue;
                rho.pair[i * g.n_y + j] +=
                    w * psi[static_cast<std::size_t>(lo)] *
                    std::conj(psi[static_cast<std::size_t>(hi)]);
            }
        }
        for (std::size_t m = 0; m < g.n_refined(); ++m) {
            rho.diag[m] += w * std::norm(psi[m]);
        }
    }
    return rho;
}

MomentumDensityMatrix momentum_density_matrix(const QuantumState& s, double t,
                                              std::shared_ptr<const PhaseGrid> grid) {
    const PhaseGrid& g = *grid;
    validate_state(s, g);

    MomentumDensityMatrix rho;
    rho.grid = grid;
    rho.time = t;
    rho.pair.assign(g.n_p() * g.n_y, 0.0);
    rho.diag.assign(g.n_p(), 0.0);
    rho.diag_rate.assign(g.n_p(), 0.0);

    const long c = static_cast<long>(g.n_y / 2);
    const double ds = g.dp / 2.0;
    // p_k ± s_m spans the half-step momentum lattice u*ds with |u| < 3c.
    const long u_lo = -3 * c;
    const long u_hi = 3 * c;

    for (std::size_t k = 0; k < s.components.size(); ++k) {
        const double w = s.components[k].weight;
        const auto psi_t = momentum_samples(s.wavefunction(k, t), g, u_lo, u_hi, ds);
        const auto dpsi_t = momentum_samples(s.wavefunction_rate(k, t), g, u_lo, u_hi, ds);
        auto at = [&](long u) { return psi_t[static_cast<std::size_t>(u - u_lo)]; };
        for (std::size_t kk = 0; kk < g.n_p(); ++kk) {
            const long twice = 2 * (static_cast<long>(kk) - c);
            for (std::size_t m = 0; m < g.n_y; ++m) {
                const long off = static_cast<long>(m) - c;
                rho.pair[kk * g.n_y + m] += w * at(twice - off) * std::conj(at(twice + off));
            }
            rho.diag[kk] += w * std::norm(at(twice));
            rho.diag_rate[kk] +=
                w * 2.0 *
                (dpsi_t[static_cast<std::size_t>(twice - u_lo)] * std::conj(at(twice))).real();
        }
    }
    return rho;
}

std::vector<double> momentum_diagonal(const QuantumState& s, double t,
                                      const PhaseGrid& g) {
    validate_state(s, g);
    std::vector<double> diag(g.n_p(), 0.0);
    const long c = static_cast<long>(g.n_y / 2);
    const double ds = g.dp / 2.0;
    for (std::size_t k = 0; k < s.components.size(); ++k) {
        const double w = s.components[k].weight;
        const auto psi_t =
            momentum_samples(s.wavefunction(k, t), g, -2 * c, 2 * c, ds);
        for (std::size_t kk = 0; kk < g.n_p(); ++kk) {
            const long u = 2 * (static_cast<long>(kk) - c);
            diag[kk] += w * std::norm(psi_t[static_cast<std::size_t>(u + 2 * c)]);
        }
    }
    return diag;
}

double trace(const DensityMatrix& rho) {
    double s = 0.0;
    for (double v : rho.diag) s += v;
    return s * rho.grid->dy;
}

double purity(const DensityMatrix& rho) {
    // Change of variables (a,b) -> (x,y) has Jacobian 2, so the pair-lattice
    // measure is 2 dx dy = dx^2.
    double s = 0.0;
    for (const auto& v : rho.pair) s += std::norm(v);
    return s * rho.grid->dx * rho.grid->dx;
}

double hermiticity_defect(const DensityMatrix& rho) {
    const PhaseGrid& g = *rho.grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t j = 1; j < g.n_y; ++j) {
            const auto d = rho.pair_at(i, j) - std::conj(rho.pair_at(i, g.n_y - j));
            worst = std::max(worst, std::abs(d));
        }
    }
    return worst;
}

}  // namespace wigflow
