#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>

#include "oracles.hpp"
#include "wigflow/density.hpp"
#include "wigflow/errors.hpp"
#include "wigflow/states.hpp"
#include "wigflow/wigner.hpp"

using namespace wigflow;

namespace {

WignerField harmonic_wigner(std::size_t n, std::shared_ptr<const PhaseGrid> g,
                            double t = 0.0) {
    const auto e = harmonic_eigenstate(n, 1.0, 1.0, *g);
    const auto s = pure_eigenstate(e, 1.0, "h" + std::to_string(n));
    return wigner_from_rho(density_matrix(s, t, g), s.id);
}

}  // namespace

TEST_SUITE_BEGIN("wigner");

TEST_CASE("harmonic ground state reproduces the Gaussian closed form") {
    auto g = oracles::harmonic_grid();
    const auto W = harmonic_wigner(0, g);
    CHECK(W.imag_residual <= 1e-10 * W.w.max_abs());

    double worst = 0.0;
    for (std::size_t i = 0; i < g->n_x; ++i) {
        for (std::size_t k = 0; k < g->n_p(); ++k) {
            worst = std::max(worst, std::abs(W.w.at(i, k) -
                                             oracles::harmonic_w0(g->x(i), g->p(k))));
        }
    }
    CHECK(worst <= 1e-10);
    CHECK(W.w.at(g->n_x / 2, g->n_p() / 2) ==
          doctest::Approx(oracles::kW0AtOrigin).epsilon(1e-12));
}

TEST_CASE("harmonic first excited state: negative center and zero circle") {
    auto g = oracles::harmonic_grid();
    const auto W = harmonic_wigner(1, g);
    CHECK(W.w.at(g->n_x / 2, g->n_p() / 2) ==
          doctest::Approx(-oracles::kW0AtOrigin).epsilon(1e-12));
    double worst = 0.0;
    for (std::size_t i = 0; i < g->n_x; ++i) {
        for (std::size_t k = 0; k < g->n_p(); ++k) {
            worst = std::max(worst, std::abs(W.w.at(i, k) -
                                             oracles::harmonic_w1(g->x(i), g->p(k))));
        }
    }
    CHECK(worst <= 1e-10);
    // sign change across r^2 = 1/2 along the positive x axis
    const std::size_t k0 = g->n_p() / 2;
    const double r = 1.0 / std::sqrt(2.0);
    std::size_t below = 0;
    while (g->x(below + 1) < r) ++below;
    CHECK(W.w.at(below, k0) < 0.0);
    CHECK(W.w.at(below + 1, k0) > 0.0);
}

TEST_CASE("position and momentum routes agree") {
    auto g = oracles::harmonic_grid();
    SUBCASE("harmonic eigenstates") {
        for (std::size_t n : {0u, 1u}) {
            const auto e = harmonic_eigenstate(n, 1.0, 1.0, *g);
            const auto s = pure_eigenstate(e, 1.0, "h");
            const auto a = wigner_from_rho(density_matrix(s, 0.0, g), "h");
            const auto b =
                wigner_from_rho_momentum(momentum_density_matrix(s, 0.0, g), "h");
            CHECK(oracles::max_abs_diff(a.w, b.w) <= 1e-8);
        }
    }
    SUBCASE("evolving superposition keeps the symmetry") {
        const auto s = superposition({harmonic_eigenstate(0, 1.0, 1.0, *g),
                                      harmonic_eigenstate(1, 1.0, 1.0, *g)},
                                     {{1, 0}, {1, 0}}, 1.0, "h01");
        const double t = 0.6;
        const auto a = wigner_from_rho(density_matrix(s, t, g), "h01");
        const auto b = wigner_from_rho_momentum(momentum_density_matrix(s, t, g), "h01");
        CHECK(oracles::max_abs_diff(a.w, b.w) <= 1e-8);
    }
    SUBCASE("Morse first excited state") {
        auto gm = oracles::morse_grid();
        const auto morse = Potential::morse(3.0, 1.0 / std::sqrt(6.0), 1.0);
        const auto s = pure_eigenstate(morse_eigenstate(1, morse, *gm), 1.0, "m1");
        const auto a = wigner_from_rho(density_matrix(s, 0.0, gm), "m1");
        const auto b = wigner_from_rho_momentum(momentum_density_matrix(s, 0.0, gm), "m1");
        CHECK(oracles::max_abs_diff(a.w, b.w) <= 1e-6);
    }
}

TEST_CASE("Morse first excited state has a central negative patch") {
    auto gm = oracles::morse_grid();
    const auto morse = Potential::morse(3.0, 1.0 / std::sqrt(6.0), 1.0);
    const auto s = pure_eigenstate(morse_eigenstate(1, morse, *gm), 1.0, "m1");
    const auto W = wigner_from_rho(density_matrix(s, 0.0, gm), "m1");
    const double min_w = *std::min_element(W.w.values.begin(), W.w.values.end());
    CHECK(min_w < -0.1);
    // the minimum sits near the well bottom on the p = 0 line, ringed by a zero contour
    std::size_t arg = 0;
    for (std::size_t n = 1; n < W.w.values.size(); ++n) {
        if (W.w.values[n] < W.w.values[arg]) arg = n;
    }
    const double x_min = gm->x(arg / gm->n_p());
    const double p_min = gm->p(arg % gm->n_p());
    CHECK(std::abs(p_min) < 0.2);
    CHECK(x_min > -1.0);
    CHECK(x_min < 2.0);
    const std::size_t k0 = gm->n_p() / 2;
    const std::size_t i_min = arg / gm->n_p();
    bool zero_left = false, zero_right = false;
    for (std::size_t i = 1; i <= i_min; ++i) {
        if (W.w.at(i - 1, k0) > 0 && W.w.at(i, k0) < 0) zero_left = true;
    }
    for (std::size_t i = i_min; i + 1 < gm->n_x; ++i) {
        if (W.w.at(i, k0) < 0 && W.w.at(i + 1, k0) > 0) zero_right = true;
    }
    CHECK(zero_left);
    CHECK(zero_right);
}

TEST_CASE("projections match the state densities") {
    auto g = oracles::harmonic_grid();
    SUBCASE("harmonic ground state position density") {
        const auto W = harmonic_wigner(0, g);
        const auto px = project_position(W);
        double worst = 0.0;
        for (std::size_t i = 0; i < g->n_x; ++i) {
            const double ref = std::exp(-g->x(i) * g->x(i)) / std::sqrt(oracles::kPi);
            worst = std::max(worst, std::abs(px[i] - ref));
        }
        CHECK(worst <= 1e-8);
    }
    SUBCASE("Morse n=1 against the wavefunction") {
        auto gm = oracles::morse_grid();
        const auto morse = Potential::morse(3.0, 1.0 / std::sqrt(6.0), 1.0);
        const auto e1 = morse_eigenstate(1, morse, *gm);
        const auto s = pure_eigenstate(e1, 1.0, "m1");
        const auto rho = density_matrix(s, 0.0, gm);
        const auto W = wigner_from_rho(rho, "m1");
        const auto px = project_position(W);
        const auto pp = project_momentum(W);
        double worst = 0.0;
        for (std::size_t i = 0; i < gm->n_x; ++i) {
            worst = std::max(worst, std::abs(px[i] - e1.psi[2 * i] * e1.psi[2 * i]));
        }
        CHECK(worst <= 1e-6);
        const auto mdm = momentum_density_matrix(s, 0.0, gm);
        double worst_p = 0.0;
        for (std::size_t k = 0; k < gm->n_p(); ++k) {
            worst_p = std::max(worst_p, std::abs(pp[k] - mdm.diag[k]));
        }
        CHECK(worst_p <= 1e-6);
    }
    SUBCASE("projections are normalized") {
        for (std::size_t n : {0u, 1u, 2u}) {
            const auto W = harmonic_wigner(n, g);
            double sx = 0.0, sp = 0.0;
            for (double v : project_position(W)) sx += v;
            for (double v : project_momentum(W)) sp += v;
            CHECK(std::abs(sx * g->dx - 1.0) <= 1e-6);
            CHECK(std::abs(sp * g->dp - 1.0) <= 1e-6);
        }
    }
}

TEST_CASE("overlaps reproduce state inner products") {
    auto g = oracles::harmonic_grid();
    const auto W0 = harmonic_wigner(0, g);
    const auto W1 = harmonic_wigner(1, g);
    CHECK(std::abs(overlap(W0, W0) - 1.0) <= 1e-6);  // purity
    CHECK(std::abs(overlap(W0, W1)) <= 1e-8);        // orthogonality

    auto gm = oracles::morse_grid();
    const auto morse = Potential::morse(3.0, 1.0 / std::sqrt(6.0), 1.0);
    const auto M0 = wigner_from_rho(
        density_matrix(pure_eigenstate(morse_eigenstate(0, morse, *gm), 1.0, "m0"), 0.0, gm),
        "m0");
    const auto M1 = wigner_from_rho(
        density_matrix(pure_eigenstate(morse_eigenstate(1, morse, *gm), 1.0, "m1"), 0.0, gm),
        "m1");
    CHECK(std::abs(overlap(M0, M1)) <= 1e-5);

    CHECK_THROWS_AS(overlap(W0, M0), GridMismatchError);
}

TEST_CASE("parity covariance of harmonic eigenstates") {
    auto g = oracles::harmonic_grid();
    for (std::size_t n : {0u, 1u, 2u}) {
        const auto W = harmonic_wigner(n, g);
        const double wmax = W.w.max_abs();
        double worst = 0.0;
        for (std::size_t i = 1; i < g->n_x; ++i) {
            for (std::size_t k = 1; k < g->n_p(); ++k) {
                worst = std::max(worst, std::abs(W.w.at(i, k) -
                                                 W.w.at(g->n_x - i, g->n_p() - k)));
            }
        }
        CHECK(worst <= 1e-10 * wmax);
    }
}

TEST_CASE("a non-Hermitian density matrix fails the realness check") {
    auto g = oracles::harmonic_grid();
    const auto s = pure_eigenstate(harmonic_eigenstate(0, 1.0, 1.0, *g), 1.0, "h0");
    DensityMatrix rho = density_matrix(s, 0.0, g);
    rho.pair[42 * g->n_y + 37] += std::complex<double>(0.0, 0.05);
    CHECK_THROWS_AS(wigner_from_rho(rho, "broken"), RealnessError);
}

TEST_SUITE_END();
