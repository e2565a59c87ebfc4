#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "wigflow/errors.hpp"
#include "wigflow/fft.hpp"
#include "wigflow/grid.hpp"
#include "wigflow/spectral.hpp"

using namespace wigflow;

TEST_SUITE_BEGIN("grid");

TEST_CASE("make_grid fixes the conjugate momentum step") {
    const PhaseGrid g = make_grid(-8.0, 8.0, 256, 256, 1.0);
    CHECK(g.dy == doctest::Approx(0.03125).epsilon(1e-14));
    CHECK(g.dp == doctest::Approx(std::numbers::pi / (256 * 0.03125)).epsilon(1e-14));
    CHECK(g.dp * g.dy == doctest::Approx(std::numbers::pi / 256).epsilon(1e-14));

    const PhaseGrid tiny = make_grid(-1.0, 1.0, 8, 8, 1.0);
    CHECK(tiny.dp == doctest::Approx(std::numbers::pi).epsilon(1e-14));

    // p- and y-grids centred on zero, x-grid half-open.
    CHECK(g.p(g.n_p() / 2) == 0.0);
    CHECK(g.y(g.n_y / 2) == 0.0);
    CHECK(g.x(0) == -8.0);
    CHECK(g.refined(2 * 5) == g.x(5));
}

TEST_CASE("make_grid rejects bad sizing") {
    CHECK_THROWS_AS(make_grid(0.0, 0.0, 256, 256, 1.0), SizingError);
    CHECK_THROWS_AS(make_grid(1.0, -1.0, 256, 256, 1.0), SizingError);
    CHECK_THROWS_AS(make_grid(-8.0, 8.0, 256, 100, 1.0), SizingError);  // not a power of two
    CHECK_THROWS_AS(make_grid(-8.0, 8.0, 256, 4, 1.0), SizingError);
    CHECK_THROWS_AS(make_grid(-8.0, 8.0, 4, 8, 1.0), SizingError);
    CHECK_THROWS_AS(make_grid(-8.0, 8.0, 64, 256, 1.0), SizingError);  // y-extent too wide
    CHECK_THROWS_AS(make_grid(-8.0, 8.0, 256, 256, 0.0), SizingError);
}

TEST_CASE("centered transform round trip and Parseval") {
    const std::size_t n = 256;
    Fft fft(n);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::complex<double>> in(n);
    for (auto& v : in) v = {u(rng), u(rng)};

    auto fwd = in;
    centered_dft(fwd, +1, fft);

    SUBCASE("round trip") {
        auto back = fwd;
        centered_dft(back, -1, fft);
        double worst = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            worst = std::max(worst, std::abs(back[j] / static_cast<double>(n) - in[j]));
            scale = std::max(scale, std::abs(in[j]));
        }
        CHECK(worst <= 1e-12 * scale);
    }
    SUBCASE("Parseval") {
        double a = 0.0, b = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            a += std::norm(in[j]);
            b += std::norm(fwd[j]);
        }
        b /= static_cast<double>(n);
        CHECK(std::abs(a - b) <= 1e-10 * a);
    }
}

TEST_CASE("spectral derivative matches the Gaussian identity") {
    auto g = oracles::harmonic_grid();
    ScalarField f = ScalarField::zeros(g);
    for (std::size_t i = 0; i < g->n_x; ++i) {
        for (std::size_t k = 0; k < g->n_p(); ++k) {
            f.at(i, k) = std::exp(-g->x(i) * g->x(i) - g->p(k) * g->p(k));
        }
    }
    const ScalarField d2 = spectral_derivative(f, Axis::P, 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < g->n_x; ++i) {
        for (std::size_t k = 0; k < g->n_p(); ++k) {
            const double p = g->p(k);
            worst = std::max(worst, std::abs(d2.at(i, k) - (4 * p * p - 2) * f.at(i, k)));
        }
    }
    CHECK(worst <= 1e-8);

    const ScalarField dx1 = spectral_derivative(f, Axis::X, 1);
    double worst_x = 0.0;
    for (std::size_t i = 0; i < g->n_x; ++i) {
        for (std::size_t k = 0; k < g->n_p(); ++k) {
            worst_x = std::max(worst_x,
                               std::abs(dx1.at(i, k) + 2 * g->x(i) * f.at(i, k)));
        }
    }
    CHECK(worst_x <= 1e-8);
}

TEST_CASE("spectral derivative edge cases") {
    auto g = oracles::harmonic_grid();
    ScalarField f = ScalarField::zeros(g);
    for (std::size_t i = 0; i < g->n_x; ++i) {
        for (std::size_t k = 0; k < g->n_p(); ++k) {
            f.at(i, k) = std::exp(-g->x(i) * g->x(i) - g->p(k) * g->p(k));
        }
    }
    SUBCASE("order zero is the identity") {
        const ScalarField same = spectral_derivative(f, Axis::P, 0);
        CHECK(oracles::max_abs_diff(same, f) == 0.0);
    }
    SUBCASE("constants differentiate to zero") {
        ScalarField c = ScalarField::zeros(g);
        for (auto& v : c.values) v = 3.25;
        for (std::size_t order : {1u, 2u, 3u}) {
            const ScalarField d = spectral_derivative(c, Axis::P, order);
            CHECK(d.max_abs() <= 1e-12);
        }
    }
    SUBCASE("order beyond n/2 is rejected") {
        CHECK_THROWS_AS(spectral_derivative(f, Axis::P, g->n_p() / 2 + 1), SizingError);
        CHECK_THROWS_AS(spectral_derivative(f, Axis::X, g->n_x / 2 + 1), SizingError);
    }
}

TEST_CASE("spectral derivative is linear") {
    auto g = std::make_shared<const PhaseGrid>(make_grid(-4.0, 4.0, 32, 64, 1.0));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ScalarField f = ScalarField::zeros(g);
    ScalarField h = ScalarField::zeros(g);
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        f.values[n] = u(rng);
        h.values[n] = u(rng);
    }
    const double a = 1.7, b = -0.4;
    ScalarField mix = ScalarField::zeros(g);
    for (std::size_t n = 0; n < f.values.size(); ++n) {
        mix.values[n] = a * f.values[n] + b * h.values[n];
    }
    for (auto axis : {Axis::X, Axis::P}) {
        const ScalarField lhs = spectral_derivative(mix, axis, 1);
        const ScalarField df = spectral_derivative(f, axis, 1);
        const ScalarField dh = spectral_derivative(h, axis, 1);
        double worst = 0.0, scale = 0.0;
        for (std::size_t n = 0; n < lhs.values.size(); ++n) {
            worst = std::max(worst,
                             std::abs(lhs.values[n] - a * df.values[n] - b * dh.values[n]));
            scale = std::max(scale, std::abs(lhs.values[n]));
        }
        CHECK(worst <= 1e-12 * scale);
    }
}

TEST_SUITE_END();
