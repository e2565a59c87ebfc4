#include "wigflow/verify.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "wigflow/current.hpp"
#include "wigflow/density.hpp"
#include "wigflow/spectral.hpp"

namespace wigflow {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

CheckReport make_report(std::string name, double residual, double tol) {
    CheckReport r;
    r.name = std::move(name);
    r.residual = residual;
    r.tolerance = tol;
    r.pass = residual <= tol;
    return r;
}

// rho(r_m, r_m, t) on the half-step lattice, without building the pair matrix.
std::vector<double> position_diag(const QuantumState& s, double t, const PhaseGrid& g) {
    std::vector<double> diag(g.n_refined(), 0.0);
    for (std::size_t k = 0; k < s.components.size(); ++k) {
        const auto psi = s.wavefunction(k, t);
        for (std::size_t m = 0; m < diag.size(); ++m) {
            diag[m] += s.components[k].weight * std::norm(psi[m]);
        }
    }
    return diag;
}

}  // namespace

CheckReport check_continuity(const QuantumState& s, const Potential& V,
                             std::shared_ptr<const PhaseGrid> grid, double t, double dt,
                             double tol) {
    const PhaseGrid& g = *grid;
    const auto rho = density_matrix(s, t, grid);
    const auto W = wigner_from_rho(rho, s.id);
    const auto J = current_integral(rho, V, W);
    const ScalarField divJ = current_divergence(J);
    const double beat = s.max_beat_frequency();

    CheckReport r;
    if (beat == 0.0) {
        // Stationary: d_t W = 0, so report ||div J|| directly.
        const double jmax = std::max(J.j.jx.max_abs(), J.j.jp.max_abs());
        const double auto_tol = 1e-8 * jmax / std::min(g.dx, g.dp);
        r = make_report("continuity", divJ.max_abs(), tol < 0 ? auto_tol : tol);
        r.meta["mode"] = "stationary";
    } else {
        const auto Wp = wigner_from_rho(density_matrix(s, t + dt, grid), s.id);
        const auto Wm = wigner_from_rho(density_matrix(s, t - dt, grid), s.id);
        double residual = 0.0;
        double cd_max = 0.0;
        for (std::size_t n = 0; n < divJ.values.size(); ++n) {
            const double cd = (Wp.w.values[n] - Wm.w.values[n]) / (2.0 * dt);
            cd_max = std::max(cd_max, std::abs(cd));
            residual = std::max(residual, std::abs(cd + divJ.values[n]));
        }
        // Eigenbasis time dependence is exactly trigonometric, so the centered
        // difference bias is max|dW/dt| (beat dt)^2 / 6; add a spectral floor.
        const double auto_tol =
            cd_max * ((beat * dt) * (beat * dt) / 6.0 * 4.0 + 2e-6) + 1e-13;
        r = make_report("continuity", residual, tol < 0 ? auto_tol : tol);
        r.meta["mode"] = "beating";
        r.meta["cd_max"] = fmt(cd_max);
        r.meta["beat"] = fmt(beat);
    }
    r.meta["state"] = s.id;
    r.meta["dt"] = fmt(dt);
    r.meta["t"] = fmt(t);
    return r;
}

std::vector<CheckReport> check_projections(const QuantumState& s, const Potential& V,
                                           std::shared_ptr<const PhaseGrid> grid,
                                           double t, double tol) {
    const PhaseGrid& g = *grid;
    const auto rho = density_matrix(s, t, grid);
    const auto W = wigner_from_rho(rho, s.id);
    const auto J = current_integral(rho, V, W);
    const auto mdm = momentum_density_matrix(s, t, grid);
    const bool stationary = s.max_beat_frequency() == 0.0;
    const double base_tol = tol < 0 ? (stationary ? 1e-7 : 1e-6) : tol;

    std::vector<CheckReport> out;

    // (a) int dp J_x vs the wavefunction probability current.
    {
        std::vector<double> rhs(g.n_x, 0.0);
        for (std::size_t k = 0; k < s.components.size(); ++k) {
            const auto psi = s.wavefunction(k, t);
            std::vector<double> re(psi.size()), im(psi.size());
            for (std::size_t m = 0; m < psi.size(); ++m) {
                re[m] = psi[m].real();
                im[m] = psi[m].imag();
            }
            const auto dre = spectral_derivative_1d(re, g.dy, 1);
            const auto dim = spectral_derivative_1d(im, g.dy, 1);
            const double w = s.components[k].weight;
            for (std::size_t i = 0; i < g.n_x; ++i) {
                const std::size_t m = 2 * i;
                // (hbar/M) Im[psi* d_x psi]
                const double im_part = re[m] * dim[m] - im[m] * dre[m];
                rhs[i] += w * g.hbar / V.mass() * im_part;
            }
        }
        double residual = 0.0;
        for (std::size_t i = 0; i < g.n_x; ++i) {
            double lhs = 0.0;
            for (std::size_t k = 0; k < g.n_p(); ++k) lhs += J.j.jx.at(i, k);
            lhs *= g.dp;
            residual = std::max(residual, std::abs(lhs - rhs[i]));
        }
        out.push_back(make_report("projection_jx_position", residual, base_tol));
    }

    // (b) int dx J_x vs (p/M) rho~(p,p).
    {
        double residual = 0.0;
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            double lhs = 0.0;
            for (std::size_t i = 0; i < g.n_x; ++i) lhs += J.j.jx.at(i, k);
            lhs *= g.dx;
            residual = std::max(residual, std::abs(lhs - g.p(k) / V.mass() * mdm.diag[k]));
        }
        out.push_back(make_report("projection_jx_momentum", residual, base_tol));
    }

    // (c) int dx J_p vs the momentum-space current from momentum-space continuity.
    {
        const auto& f = mdm.diag_rate;
        const auto f1 = spectral_derivative_1d(f, g.dp, 1);
        const auto f3 = spectral_derivative_1d(f, g.dp, 3);
        const double h2 = g.dp * g.dp;
        std::vector<double> rhs(g.n_p(), 0.0);
        double cum = 0.0;
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            if (k > 0) cum += 0.5 * (f[k] + f[k - 1]) * g.dp;
            // Lower-edge trapezoid with Euler-Maclaurin endpoint corrections.
            rhs[k] = -(cum - h2 / 12.0 * (f1[k] - f1[0]) +
                       h2 * h2 / 720.0 * (f3[k] - f3[0]));
        }
        double residual = 0.0;
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            double lhs = 0.0;
            for (std::size_t i = 0; i < g.n_x; ++i) lhs += J.j.jp.at(i, k);
            lhs *= g.dx;
            residual = std::max(residual, std::abs(lhs - rhs[k]));
        }
        out.push_back(make_report("projection_jp_momentum", residual,
                                  tol < 0 ? (stationary ? 1e-7 : 1e-5) : tol));
    }

    // (d) int dp J_p vs -rho(x,x) dV/dx.
    {
        double residual = 0.0;
        for (std::size_t i = 0; i < g.n_x; ++i) {
            double lhs = 0.0;
            for (std::size_t k = 0; k < g.n_p(); ++k) lhs += J.j.jp.at(i, k);
            lhs *= g.dp;
            const double rhs = -rho.diag[2 * i] * V.derivative(g.x(i), 1);
            residual = std::max(residual, std::abs(lhs - rhs));
        }
        out.push_back(make_report("projection_jp_position", residual, base_tol));
    }

    for (auto& r : out) {
        r.meta["state"] = s.id;
        r.meta["t"] = fmt(t);
    }
    return out;
}

std::vector<CheckReport> check_ehrenfest(const QuantumState& s, const Potential& V,
                                         std::shared_ptr<const PhaseGrid> grid, double t,
                                         double dt, double tol) {
    const PhaseGrid& g = *grid;
    const auto rho = density_matrix(s, t, grid);
    const auto W = wigner_from_rho(rho, s.id);
    const auto J = current_integral(rho, V, W);
    const bool stationary = s.max_beat_frequency() == 0.0;
    const double base_tol = tol < 0 ? (stationary ? 1e-8 : 1e-6) : tol;

    auto grid_sum = [&](const ScalarField& f) {
        double acc = 0.0;
        for (double v : f.values) acc += v;
        return acc * g.dx * g.dp;
    };
    auto mean_x = [&](double tau) {
        const auto diag = position_diag(s, tau, g);
        double acc = 0.0;
        for (std::size_t m = 0; m < diag.size(); ++m) acc += g.refined(m) * diag[m];
        return acc * g.dy;
    };
    auto mean_p = [&](double tau) {
        const auto diag = momentum_diagonal(s, tau, g);
        double acc = 0.0;
        for (std::size_t k = 0; k < diag.size(); ++k) acc += g.p(k) * diag[k];
        return acc * g.dp;
    };

    const double a1 = grid_sum(J.j.jx);
    const double a2 = mean_p(t) / V.mass();
    const double a3 = (mean_x(t + dt) - mean_x(t - dt)) / (2.0 * dt);
    const double b1 = grid_sum(J.j.jp);
    double force = 0.0;
    {
        const auto diag = position_diag(s, t, g);
        for (std::size_t m = 0; m < diag.size(); ++m) {
            force += V.derivative(g.refined(m), 1) * diag[m];
        }
        force *= g.dy;
    }
    const double b2 = -force;
    const double b3 = (mean_p(t + dt) - mean_p(t - dt)) / (2.0 * dt);

    std::vector<CheckReport> out;
    out.push_back(make_report("ehrenfest_jx_vs_p", std::abs(a1 - a2), base_tol));
    out.push_back(make_report("ehrenfest_jx_vs_dxdt", std::abs(a1 - a3), base_tol));
    out.push_back(make_report("ehrenfest_p_vs_dxdt", std::abs(a2 - a3), base_tol));
    out.push_back(make_report("ehrenfest_jp_vs_force", std::abs(b1 - b2), base_tol));
    out.push_back(make_report("ehrenfest_jp_vs_dpdt", std::abs(b1 - b3), base_tol));
    out.push_back(make_report("ehrenfest_force_vs_dpdt", std::abs(b2 - b3), base_tol));
    for (auto& r : out) {
        r.meta["state"] = s.id;
        r.meta["t"] = fmt(t);
        r.meta["dt"] = fmt(dt);
    }
    return out;
}

CheckReport check_hudson(const WignerField& W) {
    const PhaseGrid& g = *W.w.grid;
    double min_w = 0.0;
    double mass = 0.0;
    double mx = 0.0, mp = 0.0;
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            const double w = W.w.at(i, k);
            min_w = std::min(min_w, w);
            mass += w;
            mx += g.x(i) * w;
            mp += g.p(k) * w;
        }
    }
    mass *= g.dx * g.dp;
    mx *= g.dx * g.dp / mass;
    mp *= g.dx * g.dp / mass;
    double sxx = 0.0, spp = 0.0, sxp = 0.0;
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            const double w = W.w.at(i, k);
            const double ux = g.x(i) - mx;
            const double up = g.p(k) - mp;
            sxx += ux * ux * w;
            spp += up * up * w;
            sxp += ux * up * w;
        }
    }
    sxx *= g.dx * g.dp / mass;
    spp *= g.dx * g.dp / mass;
    sxp *= g.dx * g.dp / mass;
    const double det = sxx * spp - sxp * sxp;

    double dist = 1.0;
    if (det > 0.0) {
        double num = 0.0, den = 0.0;
        const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));
        for (std::size_t i = 0; i < g.n_x; ++i) {
            for (std::size_t k = 0; k < g.n_p(); ++k) {
                const double ux = g.x(i) - mx;
                const double up = g.p(k) - mp;
                const double q =
                    (spp * ux * ux - 2.0 * sxp * ux * up + sxx * up * up) / det;
                const double gauss = norm * std::exp(-0.5 * q);
                const double w = W.w.at(i, k);
                num += (w - gauss) * (w - gauss);
                den += w * w;
            }
        }
        dist = std::sqrt(num / den);
    }

    const bool positive = min_w >= -1e-8 * W.w.max_abs();
    CheckReport r = make_report("hudson", positive ? dist : 0.0, 1e-6);
    r.meta["state"] = W.state_id;
    r.meta["min_w"] = fmt(min_w);
    r.meta["gauss_distance"] = fmt(dist);
    r.meta["class"] = positive ? "positive-gaussian" : "negative-somewhere";
    return r;
}

std::vector<CheckReport> run_standard_suite(double dt) {
    std::vector<CheckReport> all;
    auto add = [&](std::vector<CheckReport> v) {
        for (auto& r : v) all.push_back(std::move(r));
    };
    auto add1 = [&](CheckReport r) { all.push_back(std::move(r)); };

    // Harmonic family.
    {
        auto grid = std::make_shared<const PhaseGrid>(make_grid(-8.0, 8.0, 128, 256, 1.0));
        const auto V = Potential::harmonic(1.0, 1.0);
        std::vector<Eigenpair> basis;
        for (std::size_t n = 0; n < 2; ++n) {
            basis.push_back(harmonic_eigenstate(n, 1.0, 1.0, *grid));
        }
        std::vector<std::pair<QuantumState, double>> cases;
        cases.emplace_back(pure_eigenstate(basis[0], 1.0, "harmonic-n0"), 0.0);
        cases.emplace_back(pure_eigenstate(basis[1], 1.0, "harmonic-n1"), 0.0);
        cases.emplace_back(
            pure_eigenstate(harmonic_eigenstate(2, 1.0, 1.0, *grid), 1.0, "harmonic-n2"),
            0.0);
        cases.emplace_back(coherent_state({1.0, 0.0}, 1.0, 1.0, 1.0, *grid), 0.6);
        cases.emplace_back(
            superposition(basis, {{1.0, 0.0}, {1.0, 0.0}}, 1.0, "harmonic-super01"), 0.6);
        for (const auto& [st, t] : cases) {
            add1(check_continuity(st, V, grid, t, dt, -1.0));
            add(check_projections(st, V, grid, t));
            add(check_ehrenfest(st, V, grid, t, dt, -1.0));
            add1(check_hudson(wigner_from_rho(density_matrix(st, t, grid), st.id)));
        }
    }

    // Morse family.
    {
        auto grid = std::make_shared<const PhaseGrid>(make_grid(-6.0, 16.0, 256, 512, 1.0));
        const auto V = Potential::morse(3.0, 1.0 / std::sqrt(6.0), 1.0);
        std::vector<Eigenpair> basis = {morse_eigenstate(0, V, *grid),
                                        morse_eigenstate(1, V, *grid)};
        std::vector<std::pair<QuantumState, double>> cases;
        cases.emplace_back(pure_eigenstate(basis[0], 1.0, "morse-n0"), 0.0);
        cases.emplace_back(pure_eigenstate(basis[1], 1.0, "morse-n1"), 0.0);
        cases.emplace_back(
            superposition(basis, {{1.0, 0.0}, {1.0, 0.0}}, 1.0, "morse-super01"), 0.6);
        for (const auto& [st, t] : cases) {
            const bool beating = st.max_beat_frequency() > 0.0;
            add1(check_continuity(st, V, grid, t, dt, beating ? 1e-5 : -1.0));
            add(check_projections(st, V, grid, t, beating ? 1e-5 : -1.0));
            add(check_ehrenfest(st, V, grid, t, dt, beating ? 1e-5 : -1.0));
            add1(check_hudson(wigner_from_rho(density_matrix(st, t, grid), st.id)));
        }
    }
    return all;
}

}  // namespace wigflow
