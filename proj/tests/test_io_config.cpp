#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "wigflow/config.hpp"
#include "wigflow/density.hpp"
#include "wigflow/field_io.hpp"
#include "wigflow/states.hpp"
#include "wigflow/wigner.hpp"

using namespace wigflow;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("wigflow_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE_BEGIN("io_config");

TEST_CASE("binary field round trip is exact") {
    TempDir tmp;
    auto g = std::make_shared<const PhaseGrid>(make_grid(-4.0, 4.0, 32, 64, 1.0));
    ScalarField f = ScalarField::zeros(g);
    for (std::size_t i = 0; i < g->n_x; ++i) {
        for (std::size_t k = 0; k < g->n_p(); ++k) {
            f.at(i, k) = std::sin(0.37 * i) * std::cos(0.11 * k) + 1e-17 * k;
        }
    }

    write_field_binary(tmp.file("W.field"), f, "W");
    std::string name;
    const ScalarField back = read_field_binary(tmp.file("W.field"), &name);
    CHECK(name == "W");
    CHECK(*back.grid == *g);
    REQUIRE(back.values.size() == f.values.size());
    for (std::size_t n = 0; n < back.values.size(); ++n) {
        CHECK(back.values[n] == f.values[n]);  // bit-exact
    }

    SUBCASE("repeated writes are byte-identical") {
        write_field_binary(tmp.file("W2.field"), f, "W");
        std::ifstream a(tmp.file("W.field"), std::ios::binary);
        std::ifstream b(tmp.file("W2.field"), std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        CHECK(sa.str() == sb.str());
    }
}

TEST_CASE("csv field export") {
    TempDir tmp;
    auto g = std::make_shared<const PhaseGrid>(make_grid(-1.0, 1.0, 8, 8, 1.0));
    ScalarField f = ScalarField::zeros(g);
    f.at(0, 0) = 1.5;
    write_field_csv(tmp.file("f.csv"), f);
    std::ifstream in(tmp.file("f.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,p,value");
    std::getline(in, line);
    CHECK(line.substr(0, 3) == "-1,");
}

TEST_CASE("reports export as sorted JSON lines") {
    TempDir tmp;
    std::vector<CheckReport> reports(2);
    reports[0].name = "zeta";
    reports[0].residual = 0.5;
    reports[0].tolerance = 1.0;
    reports[0].pass = true;
    reports[1].name = "alpha";
    reports[1].residual = 2.0;
    reports[1].tolerance = 1.0;
    reports[1].pass = false;
    write_reports_jsonl(tmp.file("checks.jsonl"), reports);

    std::ifstream in(tmp.file("checks.jsonl"));
    std::string line;
    std::getline(in, line);
    auto first = nlohmann::json::parse(line);
    CHECK(first.at("name") == "alpha");
    CHECK(first.at("pass") == false);
    std::getline(in, line);
    CHECK(nlohmann::json::parse(line).at("name") == "zeta");
}

TEST_CASE("config JSON round trip") {
    RunConfig c;
    c.x_min = -4;
    c.x_max = 12;
    c.n_x = 512;
    c.n_y = 512;
    c.potential_kind = "morse";
    c.potential_params = {3.0, 0.5};
    c.state.kind = "superposition";
    c.state.components = {{1.0, {{0, {0.6, 0.0}}, {1, {0.0, 0.8}}}}};
    c.time = 0.25;
    c.moyal_order = 3;
    c.seeds = {{0.5, 0.25}};
    c.window = Window{-1, 1, -2, 2};

    const RunConfig back = config_from_json(config_to_json(c));
    CHECK(back.x_min == c.x_min);
    CHECK(back.n_y == c.n_y);
    CHECK(back.potential_kind == "morse");
    CHECK(back.potential_params == c.potential_params);
    CHECK(back.state.kind == "superposition");
    REQUIRE(back.state.components.size() == 1);
    CHECK(back.state.components[0].coefficients[1].c == std::complex<double>(0.0, 0.8));
    CHECK(back.time == c.time);
    CHECK(*back.moyal_order == 3);
    REQUIRE(back.seeds.size() == 1);
    CHECK(back.seeds[0][0] == 0.5);
    CHECK(back.window->p_hi == 2.0);
}

TEST_CASE("flag parsing") {
    RunConfig c;
    parse_grid_flag(c, "-4,12,512,512");
    CHECK(c.x_min == -4.0);
    CHECK(c.n_y == 512);
    CHECK_THROWS(parse_grid_flag(c, "-4,12,512"));
    CHECK_THROWS(parse_grid_flag(c, "a,b,c,d"));

    parse_potential_flag(c, "morse:3,0.40824829046386302");
    CHECK(c.potential_kind == "morse");
    parse_potential_flag(c, "poly:0,0,0.5");
    CHECK(c.potential_params == std::vector<double>{0, 0, 0.5});
    parse_potential_flag(c, "harmonic");
    CHECK(c.potential_params == std::vector<double>{1.0});
    CHECK_THROWS(parse_potential_flag(c, "morse:3"));
    CHECK_THROWS(parse_potential_flag(c, "banana:1"));
    CHECK_THROWS(parse_potential_flag(c, "pwlinear:0,1,2"));

    parse_state_flag(c, "eigen:2");
    CHECK(c.state.kind == "eigen");
    CHECK(c.state.components[0].coefficients[0].n == 2);
    parse_state_flag(c, "super:0,0.70710678,0;1,0,0.70710678");
    CHECK(c.state.kind == "superposition");
    CHECK(c.state.components[0].coefficients.size() == 2);
    parse_state_flag(c, "coherent:1,0.5");
    CHECK(c.state.alpha == std::complex<double>(1.0, 0.5));
    CHECK_THROWS(parse_state_flag(c, "super:1,2"));
    CHECK_THROWS(parse_state_flag(c, "mystery:1"));

    parse_seeds_flag(c, "0:1:3,0:1:2");
    CHECK(c.seeds.size() == 6);
    CHECK_THROWS(parse_seeds_flag(c, "0:1:3"));

    parse_window_flag(c, "-1,1,-2,2");
    CHECK(c.window->x_lo == -1.0);
}

TEST_CASE("state building resolves the right eigenbasis") {
    RunConfig c;
    c.x_min = -8;
    c.x_max = 8;
    c.n_x = 128;
    c.n_y = 256;

    SUBCASE("harmonic closed form") {
        parse_potential_flag(c, "harmonic:1");
        parse_state_flag(c, "eigen:1");
        const auto g = build_grid(c);
        const auto V = build_potential(c);
        const auto s = build_state(c, V, g);
        REQUIRE(s.components.size() == 1);
        CHECK(s.components[0].energy[0] == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("morse closed form") {
        c.x_min = -6;
        c.x_max = 16;
        c.n_x = 256;
        c.n_y = 512;
        parse_potential_flag(c, "morse:3,0.40824829046386302");
        parse_state_flag(c, "eigen:1");
        const auto g = build_grid(c);
        const auto s = build_state(c, build_potential(c), g);
        CHECK(s.components[0].energy[0] == doctest::Approx(1.3125).epsilon(1e-9));
    }
    SUBCASE("general polynomial falls back to the finite-difference solver") {
        parse_potential_flag(c, "poly:0,0,0,0,1");
        parse_state_flag(c, "super:0,1,0;1,1,0");
        const auto g = build_grid(c);
        const auto s = build_state(c, build_potential(c), g);
        CHECK(s.components[0].energy[0] == doctest::Approx(0.667986).epsilon(1e-3));
        CHECK(s.components[0].energy[1] == doctest::Approx(2.393644).epsilon(1e-3));
    }
    SUBCASE("coherent needs a harmonic potential") {
        parse_potential_flag(c, "poly:0,0,0,0,1");
        parse_state_flag(c, "coherent:1");
        const auto g = build_grid(c);
        CHECK_THROWS(build_state(c, build_potential(c), g));
    }
    SUBCASE("mixture from JSON config") {
        nlohmann::json j;
        j["grid"] = {{"x_min", -8.0}, {"x_max", 8.0}, {"n_x", 128}, {"n_y", 256}};
        j["potential"] = {{"kind", "harmonic"}, {"params", {1.0}}};
        j["state"] = {{"kind", "mixture"},
                      {"weights", {0.5, 0.5}},
                      {"coefficients", {{{0, 1.0, 0.0}}, {{1, 1.0, 0.0}}}}};
        const RunConfig mc = config_from_json(j);
        const auto g = build_grid(mc);
        const auto s = build_state(mc, build_potential(mc), g);
        CHECK(s.components.size() == 2);
        const auto rho = density_matrix(s, 0.0, std::make_shared<const PhaseGrid>(g));
        CHECK(purity(rho) == doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_SUITE_END();
