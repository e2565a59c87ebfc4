#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "oracles.hpp"
#include "wigflow/current.hpp"
#include "wigflow/density.hpp"
#include "wigflow/errors.hpp"
#include "wigflow/states.hpp"
#include "wigflow/wigner.hpp"

using namespace wigflow;

namespace {

struct GroundState {
    std::shared_ptr<const PhaseGrid> grid;
    DensityMatrix rho;
    WignerField W;
};

GroundState harmonic_ground() {
    GroundState out;
    out.grid = oracles::harmonic_grid();
    const auto s =
        pure_eigenstate(harmonic_eigenstate(0, 1.0, 1.0, *out.grid), 1.0, "h0");
    out.rho = density_matrix(s, 0.0, out.grid);
    out.W = wigner_from_rho(out.rho, "h0");
    return out;
}

std::size_t index_of_x(const PhaseGrid& g, double x) {
    std::size_t i = 0;
    while (i + 1 < g.n_x && std::abs(g.x(i + 1) - x) < std::abs(g.x(i) - x)) ++i;
    return i;
}

}  // namespace

TEST_SUITE_BEGIN("current");

TEST_CASE("harmonic current is exactly classical") {
    const auto gs = harmonic_ground();
    const auto& g = *gs.grid;
    const auto V = Potential::harmonic(1.0, 1.0);
    const auto J = current_integral(gs.rho, V, gs.W);

    // J_x built bitwise from the same W samples
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            CHECK(J.j.jx.at(i, k) == (g.p(k) / 1.0) * gs.W.w.at(i, k));
        }
    }
    // p = 0 row vanishes identically
    for (std::size_t i = 0; i < g.n_x; ++i) {
        CHECK(J.j.jx.at(i, g.n_p() / 2) == 0.0);
    }
    // J_p = -x W to well below the 1e-8 contract
    const double jmax = J.j.jp.max_abs();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            worst = std::max(worst, std::abs(J.j.jp.at(i, k) + g.x(i) * gs.W.w.at(i, k)));
        }
    }
    CHECK(worst <= 1e-8 * jmax);

    // spot values on the x = 1 column from the Gaussian closed form
    const std::size_t i1 = index_of_x(g, 1.0);
    REQUIRE(g.x(i1) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t k : {g.n_p() / 2 + 2, g.n_p() / 2 + 5}) {
        const double p = g.p(k);
        CHECK(J.j.jx.at(i1, k) ==
              doctest::Approx(p * oracles::harmonic_w0(1.0, p)).epsilon(1e-10));
        CHECK(J.j.jp.at(i1, k) ==
              doctest::Approx(-oracles::harmonic_w0(1.0, p)).epsilon(1e-10));
    }

    // classical and Moyal routes coincide with the integral one
    const auto Jc = classical_current(gs.W, V);
    const auto Jm = current_moyal(gs.W, V);
    CHECK(Jm.moyal_terms == 0);
    CHECK(oracles::max_abs_diff(J.j.jp, Jc.j.jp) <= 1e-8 * jmax);
    CHECK(oracles::max_abs_diff(Jm.j.jp, Jc.j.jp) == 0.0);
}

TEST_CASE("quartic potential: integral and Moyal routes agree with the closed form") {
    const auto gs = harmonic_ground();
    const auto& g = *gs.grid;
    const auto quartic = Potential::polynomial({0, 0, 0, 0, 1.0}, 1.0);

    const auto Ji = current_integral(gs.rho, quartic, gs.W);
    const auto Jm = current_moyal(gs.W, quartic);
    CHECK(Jm.moyal_terms == 1);  // series terminates at l = (4-1)/2

    const double jmax = Ji.j.jp.max_abs();
    CHECK(oracles::max_abs_diff(Ji.j.jp, Jm.j.jp) <= 1e-6 * jmax);

    // closed form J_p = -4x^3 W + x (4p^2 - 2) W over the core region
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            worst = std::max(worst,
                             std::abs(Ji.j.jp.at(i, k) -
                                      oracles::quartic_jp_on_gaussian(g.x(i), g.p(k))));
        }
    }
    CHECK(worst <= 1e-9);

    const std::size_t i1 = index_of_x(g, 1.0);
    const std::size_t k0 = g.n_p() / 2;
    CHECK(Ji.j.jp.at(i1, k0) == doctest::Approx(oracles::kQuarticJpAt10).epsilon(1e-9));
    CHECK(Ji.j.jp.at(i1, k0) == doctest::Approx(-6.0 * gs.W.w.at(i1, k0)).epsilon(1e-12));
    CHECK(std::abs(Ji.j.jp.at(i1, k0) - (-0.70258)) <= 5e-5);  // quoted approximation

    const auto Jc = classical_current(gs.W, quartic);
    CHECK(Jc.j.jp.at(i1, k0) == doctest::Approx(oracles::kClassicalJpAt10).epsilon(1e-9));
    CHECK(Ji.j.jp.at(i1, k0) - Jc.j.jp.at(i1, k0) ==
          doctest::Approx(-2.0 * oracles::kW0AtOrigin * std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("classical current vanishes where W vanishes") {
    const auto gs = harmonic_ground();
    const auto quartic = Potential::polynomial({0, 0, 0, 0, 1.0}, 1.0);
    WignerField W = gs.W;
    const auto& g = *gs.grid;
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) W.w.at(i, k) = 0.0;
    }
    const auto Jc = classical_current(W, quartic);
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            CHECK(Jc.j.jp.at(i, k) == 0.0);
            CHECK(Jc.j.jx.at(i, k) == 0.0);
        }
    }
}

TEST_CASE("integral and Moyal routes agree through degree six") {
    const auto gs = harmonic_ground();
    const std::vector<std::vector<double>> polys = {
        {0, 0, 0, 1.0},                    // cubic
        {0, 0, 0, 0, 1.0},                 // quartic
        {0, 0.2, 0.3, 0, -0.1, 0, 0.05},   // mixed degree six
    };
    for (const auto& coeffs : polys) {
        const auto V = Potential::polynomial(coeffs, 1.0);
        const auto Ji = current_integral(gs.rho, V, gs.W);
        const auto Jm = current_moyal(gs.W, V);
        const double rel =
            oracles::max_abs_diff(Ji.j.jp, Jm.j.jp) / Ji.j.jp.max_abs();
        INFO("degree ", coeffs.size() - 1);
        CHECK(rel <= 1e-6);
    }
}

TEST_CASE("Moyal truncation rules") {
    const auto gs = harmonic_ground();
    const auto morse = Potential::morse(3.0, 1.0 / std::sqrt(6.0), 1.0);
    CHECK_THROWS_AS(current_moyal(gs.W, morse), std::invalid_argument);
    const auto J4 = current_moyal(gs.W, morse, 4);
    CHECK(J4.moyal_terms == 4);
    // an explicit order may also shorten a polynomial series
    const auto sext = Potential::polynomial({0, 0, 0, 0, 0, 0, 1.0}, 1.0);
    CHECK(current_moyal(gs.W, sext).moyal_terms == 2);
    CHECK(current_moyal(gs.W, sext, 1).moyal_terms == 1);
}

TEST_CASE("Morse truncation error decreases then stagnates") {
    auto gm = oracles::morse_grid();
    const auto morse = Potential::morse(3.0, 1.0 / std::sqrt(6.0), 1.0);
    const auto s = pure_eigenstate(morse_eigenstate(1, morse, *gm), 1.0, "m1");
    const auto rho = density_matrix(s, 0.0, gm);
    const auto W = wigner_from_rho(rho, "m1");
    const auto Ji = current_integral(rho, morse, W);
    const double scale = Ji.j.jp.max_abs();

    std::vector<double> err;
    for (std::size_t l = 0; l <= 12; ++l) {
        const auto Jl = current_moyal(W, morse, l);
        err.push_back(oracles::max_abs_diff(Jl.j.jp, Ji.j.jp) / scale);
    }
    std::ostringstream curve;
    for (double e : err) curve << e << " ";
    INFO("relative error vs truncation order: ", curve.str());

    for (std::size_t l = 0; l + 1 <= 8; ++l) {
        CHECK(err[l + 1] < 0.5 * err[l]);  // converging regime
    }
    CHECK(err[12] > 0.0);
    CHECK(err[12] >= 0.25 * err[10]);  // stagnation: no real improvement past l = 10
}

TEST_CASE("stationary states carry a divergence-free current") {
    SUBCASE("harmonic n=1") {
        auto g = oracles::harmonic_grid();
        const auto V = Potential::harmonic(1.0, 1.0);
        const auto s = pure_eigenstate(harmonic_eigenstate(1, 1.0, 1.0, *g), 1.0, "h1");
        const auto rho = density_matrix(s, 0.0, g);
        const auto W = wigner_from_rho(rho, "h1");
        const auto J = current_integral(rho, V, W);
        const ScalarField div = current_divergence(J);
        const double scale =
            std::max(J.j.jx.max_abs(), J.j.jp.max_abs()) / std::min(g->dx, g->dp);
        CHECK(div.max_abs() <= 1e-10 * scale);
    }
    SUBCASE("Morse n=1") {
        auto gm = oracles::morse_grid();
        const auto morse = Potential::morse(3.0, 1.0 / std::sqrt(6.0), 1.0);
        const auto s = pure_eigenstate(morse_eigenstate(1, morse, *gm), 1.0, "m1");
        const auto rho = density_matrix(s, 0.0, gm);
        const auto W = wigner_from_rho(rho, "m1");
        const auto J = current_integral(rho, morse, W);
        const ScalarField div = current_divergence(J);
        const double scale =
            std::max(J.j.jx.max_abs(), J.j.jp.max_abs()) / std::min(gm->dx, gm->dp);
        // edge truncation of the slowly decaying Morse tail sets the floor here
        CHECK(div.max_abs() <= 1e-8 * scale);
    }
}

TEST_CASE("piecewise potentials run through the integral form") {
    auto g = std::make_shared<const PhaseGrid>(make_grid(-8.0, 8.0, 256, 512, 1.0));
    const auto vee = Potential::piecewise_linear({-10, 0, 10}, {10, 0, 10}, 1.0);
    const auto fd = fd_eigensolve(vee, *g, 2);
    const auto s = superposition(fd, {{1, 0}, {1, 0}}, 1.0, "pw01");
    const auto rho = density_matrix(s, 0.0, g);
    const auto W = wigner_from_rho(rho, "pw01");
    const auto J = current_integral(rho, vee, W);
    CHECK(J.kink_diagnostic);  // breakpoint x = 0 sits on the grid
    CHECK(J.imag_residual <= 1e-10 * J.j.jp.max_abs());
}

TEST_CASE("grid mismatch is rejected") {
    const auto gs = harmonic_ground();
    auto other = std::make_shared<const PhaseGrid>(make_grid(-7.0, 7.0, 64, 128, 1.0));
    const auto s2 = pure_eigenstate(harmonic_eigenstate(0, 1.0, 1.0, *other), 1.0, "h0");
    const auto W2 = wigner_from_rho(density_matrix(s2, 0.0, other), "h0");
    CHECK_THROWS_AS(current_integral(gs.rho, Potential::harmonic(1.0, 1.0), W2),
                    GridMismatchError);
}

TEST_SUITE_END();
