#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wigflow/config.hpp"
#include "wigflow/current.hpp"
#include "wigflow/density.hpp"
#include "wigflow/errors.hpp"
#include "wigflow/field_io.hpp"
#include "wigflow/flow.hpp"
#include "wigflow/verify.hpp"
#include "wigflow/wigner.hpp"

namespace fs = std::filesystem;
using namespace wigflow;

namespace {

constexpr const char* kVersion = "1.0.0";

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct Flags {
    std::optional<std::string> grid, potential, state, seeds, window, config_path;
    std::optional<double> time, eps_w, dt, step;
    std::optional<std::size_t> moyal_order, max_steps;
    std::optional<std::string> method, format;
    std::string out_dir = "out";
    bool no_meta = false;
};

RunConfig resolve_config(const Flags& f) {
    RunConfig c;
    if (f.config_path) {
        std::ifstream in(*f.config_path);
        if (!in) throw std::invalid_argument("cannot open config file " + *f.config_path);
        nlohmann::json j;
        in >> j;
        c = config_from_json(j);
    }
    if (f.grid) parse_grid_flag(c, *f.grid);
    if (f.potential) parse_potential_flag(c, *f.potential);
    if (f.state) parse_state_flag(c, *f.state);
    if (f.seeds) parse_seeds_flag(c, *f.seeds);
    if (f.window) parse_window_flag(c, *f.window);
    if (f.time) c.time = *f.time;
    if (f.eps_w) c.eps_w = *f.eps_w;
    if (f.dt) c.dt = *f.dt;
    if (f.step) c.fieldline_step = *f.step;
    if (f.moyal_order) c.moyal_order = *f.moyal_order;
    if (f.max_steps) c.fieldline_max_steps = *f.max_steps;
    if (f.method) c.method = *f.method;
    if (f.format) c.format = *f.format;
    c.out_dir = f.out_dir;
    c.write_meta = !f.no_meta;
    return c;
}

void write_run_metadata(const RunConfig& c) {
    fs::create_directories(c.out_dir);
    const std::string dump = config_to_json(c).dump(2);
    std::ofstream cfg(fs::path(c.out_dir) / "resolved_config.json");
    cfg << dump << '\n';
    if (c.write_meta) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a(dump)));
        std::ofstream meta(fs::path(c.out_dir) / "meta.txt");
        meta << "tool=wigflow " << kVersion << "\nconfig_fnv1a=" << buf << '\n';
    }
}

void export_field(const RunConfig& c, const ScalarField& f, const std::string& name) {
    const fs::path dir(c.out_dir);
    if (c.format == "csv") {
        write_field_csv((dir / (name + ".csv")).string(), f);
    } else {
        write_field_binary((dir / (name + ".field")).string(), f, name);
    }
}

struct Computed {
    std::shared_ptr<const PhaseGrid> grid;
    Potential V = Potential::harmonic(1.0, 1.0);
    QuantumState state;
    DensityMatrix rho;
    WignerField W;
};

Computed compute_wigner(const RunConfig& c) {
    Computed out;
    out.grid = std::make_shared<const PhaseGrid>(build_grid(c));
    out.V = build_potential(c);
    out.state = build_state(c, out.V, *out.grid);
    out.rho = density_matrix(out.state, c.time, out.grid);
    out.W = wigner_from_rho(out.rho, out.state.id);
    return out;
}

CurrentField compute_current(const RunConfig& c, const Computed& cw) {
    if (c.method == "integral") return current_integral(cw.rho, cw.V, cw.W);
    if (c.method == "moyal") return current_moyal(cw.W, cw.V, c.moyal_order);
    if (c.method == "classical") return classical_current(cw.W, cw.V);
    throw std::invalid_argument("unknown current method '" + c.method + "'");
}

// Bounding box of the cells carrying at least 1% of max|W|: the dynamically
// relevant core, used as the default stagnation window and seed region.
Window support_window(const PhaseGrid& g, const WignerField& W) {
    const double wmax = W.w.max_abs();
    Window win{g.x(g.n_x - 1), g.x(0), g.p(g.n_p() - 1), g.p(0)};
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            if (std::abs(W.w.at(i, k)) > 1e-2 * wmax) {
                win.x_lo = std::min(win.x_lo, g.x(i));
                win.x_hi = std::max(win.x_hi, g.x(i));
                win.p_lo = std::min(win.p_lo, g.p(k));
                win.p_hi = std::max(win.p_hi, g.p(k));
            }
        }
    }
    return win;
}

std::vector<std::array<double, 2>> default_seeds(const PhaseGrid& g,
                                                 const WignerField& W) {
    const Window win = support_window(g, W);
    std::vector<std::array<double, 2>> seeds;
    const std::size_t nx = 9, np = 7;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t k = 0; k < np; ++k) {
            seeds.push_back(
                {win.x_lo + (win.x_hi - win.x_lo) * (static_cast<double>(i) + 0.5) / nx,
                 win.p_lo + (win.p_hi - win.p_lo) * (static_cast<double>(k) + 0.5) / np});
        }
    }
    return seeds;
}

int run_verify(const RunConfig& c) {
    write_run_metadata(c);
    auto reports = run_standard_suite(c.dt);
    bool all_pass = true;
    for (const auto& r : reports) {
        all_pass = all_pass && r.pass;
        std::printf("[%s] %-28s state=%-18s residual=%.3e tol=%.3e\n",
                    r.pass ? "pass" : "FAIL", r.name.c_str(),
                    r.meta.count("state") ? r.meta.at("state").c_str() : "-", r.residual,
                    r.tolerance);
    }
    write_reports_jsonl((fs::path(c.out_dir) / "checks.jsonl").string(), reports);
    return all_pass ? 0 : 1;
}

int run_command(const std::string& cmd, const RunConfig& c) {
    if (cmd == "verify") return run_verify(c);

    write_run_metadata(c);
    Computed cw = compute_wigner(c);

    if (cmd == "wigner") {
        export_field(c, cw.W.w, "W");
        return 0;
    }
    if (cmd == "current") {
        const CurrentField J = compute_current(c, cw);
        const bool classical = (c.method == "classical");
        export_field(c, J.j.jx, classical ? "jx_classical" : "Jx");
        export_field(c, J.j.jp, classical ? "jp_classical" : "Jp");
        return 0;
    }
    if (cmd == "divergence") {
        const CurrentField J = current_integral(cw.rho, cw.V, cw.W);
        const DivergenceMap dm = divergence_w(J, cw.W, c.eps_w);
        export_field(c, dm.div, "div_w");
        export_field(c, dm.div_arctan, "div_w_arctan");
        write_mask_binary((fs::path(c.out_dir) / "mask.field").string(), dm.div, dm.mask,
                          "mask");
        return 0;
    }
    if (cmd == "stagnation") {
        const CurrentField J = current_integral(cw.rho, cw.V, cw.W);
        const Window win = c.window ? *c.window : support_window(*cw.grid, cw.W);
        write_stagnation_csv((fs::path(c.out_dir) / "stagnation_points.csv").string(),
                             stagnation_points(J, win));
        return 0;
    }
    if (cmd == "fieldlines") {
        const CurrentField J = current_integral(cw.rho, cw.V, cw.W);
        const auto seeds = c.seeds.empty() ? default_seeds(*cw.grid, cw.W) : c.seeds;
        const auto lines = fieldlines(J, seeds, c.fieldline_step, c.fieldline_max_steps);
        write_fieldlines_csv((fs::path(c.out_dir) / "fieldlines.csv").string(),
                             (fs::path(c.out_dir) / "fieldlines_summary.csv").string(),
                             lines);
        return 0;
    }
    if (cmd == "figure1") {
        const CurrentField J = current_integral(cw.rho, cw.V, cw.W);
        export_field(c, cw.W.w, "W");
        export_field(c, J.j.jx, "Jx");
        export_field(c, J.j.jp, "Jp");
        const DivergenceMap dm = divergence_w(J, cw.W, c.eps_w);
        export_field(c, dm.div, "div_w");
        export_field(c, dm.div_arctan, "div_w_arctan");
        write_mask_binary((fs::path(c.out_dir) / "mask.field").string(), dm.div, dm.mask,
                          "mask");
        const Window win = c.window ? *c.window : support_window(*cw.grid, cw.W);
        write_stagnation_csv((fs::path(c.out_dir) / "stagnation_points.csv").string(),
                             stagnation_points(J, win));
        const auto seeds = c.seeds.empty() ? default_seeds(*cw.grid, cw.W) : c.seeds;
        const auto lines = fieldlines(J, seeds, c.fieldline_step, c.fieldline_max_steps);
        write_fieldlines_csv((fs::path(c.out_dir) / "fieldlines.csv").string(),
                             (fs::path(c.out_dir) / "fieldlines_summary.csv").string(),
                             lines);
        return 0;
    }
    throw std::invalid_argument("unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wigflow: Wigner phase-space distributions, currents and flow topology"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Flags f;
    const char* names[] = {"wigner",     "current",    "divergence", "stagnation",
                           "fieldlines", "verify",     "figure1"};
    const char* descs[] = {
        "Wigner distribution of the configured state",
        "Wigner current (method: integral | moyal | classical)",
        "Divergence map of the velocity field w = J/W with singular mask",
        "Stagnation points of J with winding indices",
        "Integrated fieldlines of J",
        "Run the identity suite over the standard state set",
        "One-shot Morse first-excited-state run emitting every figure data layer"};
    for (int s = 0; s < 7; ++s) {
        auto* cmd = app.add_subcommand(names[s], descs[s]);
        cmd->add_option("--config", f.config_path, "JSON config file (flags override)");
        cmd->add_option("--grid", f.grid, "x_min,x_max,nx,ny");
        cmd->add_option("--potential", f.potential,
                        "harmonic:K | poly:c0,c1,... | morse:D,a | pwlinear:x0,v0,...");
        cmd->add_option("--state", f.state,
                        "eigen:n | super:n,re,im;... | coherent:re[,im]");
        cmd->add_option("--time", f.time, "evolution time t");
        cmd->add_option("--eps-w", f.eps_w, "singular-mask threshold fraction");
        cmd->add_option("--moyal-order", f.moyal_order, "Moyal truncation order L");
        cmd->add_option("--dt", f.dt, "time step for centered differences");
        cmd->add_option("--method", f.method, "integral | moyal | classical");
        cmd->add_option("--seeds", f.seeds, "fieldline seed lattice x0:x1:nx,p0:p1:np");
        cmd->add_option("--window", f.window, "stagnation window x_lo,x_hi,p_lo,p_hi");
        cmd->add_option("--step", f.step, "fieldline integrator step");
        cmd->add_option("--max-steps", f.max_steps, "fieldline step budget");
        cmd->add_option("--format", f.format, "binary | csv");
        cmd->add_option("--out", f.out_dir, "output directory");
        cmd->add_flag("--no-meta", f.no_meta, "suppress meta.txt");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    // Validation stage: everything here exits 2 before any computation.
    RunConfig config;
    try {
        config = resolve_config(f);
        if (cmd == "figure1") {
            // Pinned reproduction config; only output/eps_w/seed options are honored.
            config.x_min = -4.0;
            config.x_max = 12.0;
            config.n_x = 512;
            config.n_y = 512;
            config.hbar = 1.0;
            config.mass = 1.0;
            config.potential_kind = "morse";
            config.potential_params = {3.0, 1.0 / std::sqrt(6.0)};
            StateSpec st;
            st.kind = "eigen";
            st.components = {{1.0, {{1, {1.0, 0.0}}}}};
            config.state = st;
            config.time = 0.0;
            config.method = "integral";
        }
        build_grid(config);
        const Potential V = build_potential(config);
        if (config.method == "moyal" && !V.taylor_degree() && !config.moyal_order) {
            throw std::invalid_argument(
                "method=moyal on a non-polynomial potential requires --moyal-order");
        }
        if (config.method != "integral" && config.method != "moyal" &&
            config.method != "classical") {
            throw std::invalid_argument("unknown method '" + config.method + "'");
        }
    } catch (const std::exception& e) {
        std::cerr << "wigflow: usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        return run_command(cmd, config);
    } catch (const std::exception& e) {
        std::cerr << "wigflow: error: " << e.what() << '\n';
        return 1;
    }
}
