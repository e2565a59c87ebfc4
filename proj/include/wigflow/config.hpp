#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wigflow/flow.hpp"
#include "wigflow/grid.hpp"
#include "wigflow/potential.hpp"
#include "wigflow/states.hpp"

namespace wigflow {

/// One coefficient of an eigenbasis expansion.
struct CoeffSpec {
    std::size_t n = 0;
    std::complex<double> c{1.0, 0.0};
};

/// One pure component of a statistical mixture.
struct ComponentSpec {
    double weight = 1.0;
    std::vector<CoeffSpec> coefficients;
};

struct StateSpec {
    // "eigen" | "superposition" | "coherent" | "mixture"
    std::string kind = "eigen";
    // eigen/superposition use one component; defaults to the ground state
    std::vector<ComponentSpec> components{{1.0, {CoeffSpec{0, {1.0, 0.0}}}}};
    std::complex<double> alpha{0.0, 0.0};  // coherent
};

/// Fully resolved run configuration; parses to valid module-level preconditions or
/// is rejected before any computation.
struct RunConfig {
    double x_min = -8.0, x_max = 8.0;
    std::size_t n_x = 128, n_y = 256;
    double hbar = 1.0;
    double mass = 1.0;

    std::string potential_kind = "harmonic";  // harmonic|poly|morse|pwlinear
    std::vector<double> potential_params = {1.0};

    StateSpec state;
    double time = 0.0;
    double eps_w = 1e-3;
    double dt = 1e-4;
    std::optional<std::size_t> moyal_order;
    std::string method = "integral";  // integral|moyal|classical

    std::vector<std::array<double, 2>> seeds;
    std::optional<Window> window;
    double fieldline_step = 0.05;
    std::size_t fieldline_max_steps = 4000;

    std::string out_dir = "out";
    bool write_meta = true;
    std::string format = "binary";  // binary|csv
};

/// Structured-text round trip. from_json accepts the documented keys
/// (grid, hbar, mass, potential.kind, potential.params, state.*, time, ...).
nlohmann::json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

/// Flag-string parsers used by the CLI; all throw std::invalid_argument on bad input.
void parse_grid_flag(RunConfig& c, const std::string& text);      // "x_min,x_max,nx,ny"
void parse_potential_flag(RunConfig& c, const std::string& text); // "kind:params"
void parse_state_flag(RunConfig& c, const std::string& text);     // "eigen:1" etc.
void parse_seeds_flag(RunConfig& c, const std::string& text);     // "x0:x1:nx,p0:p1:np"
void parse_window_flag(RunConfig& c, const std::string& text);    // "x_lo,x_hi,p_lo,p_hi"

/// Builders; validate and throw before any heavy computation.
PhaseGrid build_grid(const RunConfig& c);
Potential build_potential(const RunConfig& c);
QuantumState build_state(const RunConfig& c, const Potential& V, const PhaseGrid& g);

}  // namespace wigflow
