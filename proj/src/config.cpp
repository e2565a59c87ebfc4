#include "wigflow/config.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wigflow {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number: '" + s + "'");
    return v;
}

std::size_t to_count(const std::string& s) {
    const double v = to_double(s);
    if (v < 0 || v != std::floor(v)) throw std::invalid_argument("bad count: '" + s + "'");
    return static_cast<std::size_t>(v);
}

nlohmann::json state_to_json(const StateSpec& s) {
    nlohmann::json j;
    j["kind"] = s.kind;
    if (s.kind == "coherent") {
        j["alpha"] = {s.alpha.real(), s.alpha.imag()};
        return j;
    }
    if (s.kind == "mixture") {
        nlohmann::json weights = nlohmann::json::array();
        nlohmann::json coeffs = nlohmann::json::array();
        for (const auto& comp : s.components) {
            weights.push_back(comp.weight);
            nlohmann::json one = nlohmann::json::array();
            for (const auto& c : comp.coefficients) {
                one.push_back({c.n, c.c.real(), c.c.imag()});
            }
            coeffs.push_back(one);
        }
        j["weights"] = weights;
        j["coefficients"] = coeffs;
        return j;
    }
    nlohmann::json coeffs = nlohmann::json::array();
    if (!s.components.empty()) {
        for (const auto& c : s.components[0].coefficients) {
            coeffs.push_back({c.n, c.c.real(), c.c.imag()});
        }
    }
    j["coefficients"] = coeffs;
    return j;
}

StateSpec state_from_json(const nlohmann::json& j) {
    StateSpec s;
    s.components.clear();
    s.kind = j.value("kind", std::string("eigen"));
    if (s.kind == "coherent") {
        const auto a = j.at("alpha");
        s.alpha = {a.at(0).get<double>(), a.at(1).get<double>()};
        return s;
    }
    auto parse_coeffs = [](const nlohmann::json& arr) {
        std::vector<CoeffSpec> out;
        for (const auto& e : arr) {
            CoeffSpec c;
            c.n = e.at(0).get<std::size_t>();
            c.c = {e.at(1).get<double>(), e.size() > 2 ? e.at(2).get<double>() : 0.0};
            out.push_back(c);
        }
        return out;
    };
    if (s.kind == "mixture") {
        const auto& weights = j.at("weights");
        const auto& coeffs = j.at("coefficients");
        if (weights.size() != coeffs.size()) {
            throw std::invalid_argument("state: weights/coefficients length mismatch");
        }
        for (std::size_t k = 0; k < weights.size(); ++k) {
            ComponentSpec comp;
            comp.weight = weights.at(k).get<double>();
            comp.coefficients = parse_coeffs(coeffs.at(k));
            s.components.push_back(std::move(comp));
        }
        return s;
    }
    ComponentSpec comp;
    comp.coefficients = parse_coeffs(j.at("coefficients"));
    s.components.push_back(std::move(comp));
    return s;
}

}  // namespace

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["grid"] = {{"x_min", c.x_min}, {"x_max", c.x_max}, {"n_x", c.n_x}, {"n_y", c.n_y}};
    j["hbar"] = c.hbar;
    j["mass"] = c.mass;
    j["potential"] = {{"kind", c.potential_kind}, {"params", c.potential_params}};
    j["state"] = state_to_json(c.state);
    j["time"] = c.time;
    j["eps_w"] = c.eps_w;
    j["dt"] = c.dt;
    if (c.moyal_order) j["moyal_order"] = *c.moyal_order;
    j["method"] = c.method;
    if (!c.seeds.empty()) {
        nlohmann::json seeds = nlohmann::json::array();
        for (const auto& s : c.seeds) seeds.push_back({s[0], s[1]});
        j["seeds"] = seeds;
    }
    if (c.window) {
        j["window"] = {c.window->x_lo, c.window->x_hi, c.window->p_lo, c.window->p_hi};
    }
    j["fieldline_step"] = c.fieldline_step;
    j["fieldline_max_steps"] = c.fieldline_max_steps;
    j["format"] = c.format;
    return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.x_min = g.value("x_min", c.x_min);
        c.x_max = g.value("x_max", c.x_max);
        c.n_x = g.value("n_x", c.n_x);
        c.n_y = g.value("n_y", c.n_y);
    }
    c.hbar = j.value("hbar", c.hbar);
    c.mass = j.value("mass", c.mass);
    if (j.contains("potential")) {
        c.potential_kind = j.at("potential").value("kind", c.potential_kind);
        if (j.at("potential").contains("params")) {
            c.potential_params = j.at("potential").at("params").get<std::vector<double>>();
        }
    }
    if (j.contains("state")) c.state = state_from_json(j.at("state"));
    c.time = j.value("time", c.time);
    c.eps_w = j.value("eps_w", c.eps_w);
    c.dt = j.value("dt", c.dt);
    if (j.contains("moyal_order")) c.moyal_order = j.at("moyal_order").get<std::size_t>();
    c.method = j.value("method", c.method);
    if (j.contains("seeds")) {
        for (const auto& s : j.at("seeds")) {
            c.seeds.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
        }
    }
    if (j.contains("window")) {
        const auto& w = j.at("window");
        c.window = Window{w.at(0).get<double>(), w.at(1).get<double>(),
                          w.at(2).get<double>(), w.at(3).get<double>()};
    }
    c.fieldline_step = j.value("fieldline_step", c.fieldline_step);
    c.fieldline_max_steps = j.value("fieldline_max_steps", c.fieldline_max_steps);
    c.format = j.value("format", c.format);
    return c;
}

void parse_grid_flag(RunConfig& c, const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4) {
        throw std::invalid_argument("--grid expects x_min,x_max,nx,ny");
    }
    c.x_min = to_double(parts[0]);
    c.x_max = to_double(parts[1]);
    c.n_x = to_count(parts[2]);
    c.n_y = to_count(parts[3]);
}

void parse_potential_flag(RunConfig& c, const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        for (const auto& s : split(text.substr(colon + 1), ',')) {
            params.push_back(to_double(s));
        }
    }
    if (kind == "harmonic") {
        if (params.size() > 1) throw std::invalid_argument("harmonic:K takes one parameter");
        if (params.empty()) params.push_back(1.0);
    } else if (kind == "poly") {
        if (params.empty()) throw std::invalid_argument("poly needs coefficients c0,c1,...");
    } else if (kind == "morse") {
        if (params.size() != 2) throw std::invalid_argument("morse needs D,a");
    } else if (kind == "pwlinear") {
        if (params.size() < 4 || params.size() % 2 != 0) {
            throw std::invalid_argument("pwlinear needs x0,v0,x1,v1,...");
        }
    } else {
        throw std::invalid_argument("unknown potential kind '" + kind + "'");
    }
    c.potential_kind = kind;
    c.potential_params = std::move(params);
}

void parse_state_flag(RunConfig& c, const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    StateSpec s;
    s.components.clear();
    if (kind == "eigen") {
        s.kind = "eigen";
        ComponentSpec comp;
        comp.coefficients.push_back({to_count(rest.empty() ? "0" : rest), {1.0, 0.0}});
        s.components.push_back(comp);
    } else if (kind == "super") {
        s.kind = "superposition";
        ComponentSpec comp;
        for (const auto& term : split(rest, ';')) {
            const auto f = split(term, ',');
            if (f.size() != 3) {
                throw std::invalid_argument("super expects n,re,im terms separated by ';'");
            }
            comp.coefficients.push_back(
                {to_count(f[0]), {to_double(f[1]), to_double(f[2])}});
        }
        if (comp.coefficients.empty()) throw std::invalid_argument("super: empty state");
        s.components.push_back(comp);
    } else if (kind == "coherent") {
        s.kind = "coherent";
        const auto f = split(rest, ',');
        if (f.empty() || f.size() > 2) throw std::invalid_argument("coherent expects re[,im]");
        s.alpha = {to_double(f[0]), f.size() > 1 ? to_double(f[1]) : 0.0};
    } else {
        throw std::invalid_argument("unknown state kind '" + kind +
                                    "' (mixtures are configured via --config)");
    }
    c.state = std::move(s);
}

void parse_seeds_flag(RunConfig& c, const std::string& text) {
    const auto halves = split(text, ',');
    if (halves.size() != 2) {
        throw std::invalid_argument("--seeds expects x0:x1:nx,p0:p1:np");
    }
    auto axis = [](const std::string& s) {
        const auto f = split(s, ':');
        if (f.size() != 3) throw std::invalid_argument("--seeds axis needs lo:hi:count");
        return std::tuple<double, double, std::size_t>(to_double(f[0]), to_double(f[1]),
                                                       to_count(f[2]));
    };
    const auto [x0, x1, nx] = axis(halves[0]);
    const auto [p0, p1, np] = axis(halves[1]);
    if (nx == 0 || np == 0) throw std::invalid_argument("--seeds needs positive counts");
    c.seeds.clear();
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t k = 0; k < np; ++k) {
            const double fx = nx == 1 ? 0.5 : static_cast<double>(i) / (nx - 1.0);
            const double fp = np == 1 ? 0.5 : static_cast<double>(k) / (np - 1.0);
            c.seeds.push_back({x0 + fx * (x1 - x0), p0 + fp * (p1 - p0)});
        }
    }
}

void parse_window_flag(RunConfig& c, const std::string& text) {
    const auto f = split(text, ',');
    if (f.size() != 4) throw std::invalid_argument("--window expects x_lo,x_hi,p_lo,p_hi");
    c.window = Window{to_double(f[0]), to_double(f[1]), to_double(f[2]), to_double(f[3])};
}

PhaseGrid build_grid(const RunConfig& c) {
    return make_grid(c.x_min, c.x_max, c.n_x, c.n_y, c.hbar);
}

Potential build_potential(const RunConfig& c) {
    if (c.potential_kind == "harmonic") {
        return Potential::harmonic(c.potential_params.at(0), c.mass);
    }
    if (c.potential_kind == "poly") {
        return Potential::polynomial(c.potential_params, c.mass);
    }
    if (c.potential_kind == "morse") {
        return Potential::morse(c.potential_params.at(0), c.potential_params.at(1), c.mass);
    }
    if (c.potential_kind == "pwlinear") {
        std::vector<double> xs, vs;
        for (std::size_t i = 0; i + 1 < c.potential_params.size(); i += 2) {
            xs.push_back(c.potential_params[i]);
            vs.push_back(c.potential_params[i + 1]);
        }
        return Potential::piecewise_linear(xs, vs, c.mass);
    }
    throw std::invalid_argument("unknown potential kind '" + c.potential_kind + "'");
}

QuantumState build_state(const RunConfig& c, const Potential& V, const PhaseGrid& g) {
    if (c.state.kind == "coherent") {
        if (V.kind() != Potential::Kind::Polynomial || *V.taylor_degree() != 2) {
            throw std::invalid_argument("coherent states need a harmonic potential");
        }
        const double k_spring = 2.0 * V.coeffs().at(2);
        return coherent_state(c.state.alpha, k_spring, V.mass(), g.hbar, g);
    }

    // Resolve the eigenbasis: closed forms for harmonic / Morse wells, the
    // finite-difference solver otherwise.
    std::size_t n_max = 0;
    for (const auto& comp : c.state.components) {
        for (const auto& coef : comp.coefficients) n_max = std::max(n_max, coef.n + 1);
    }
    std::vector<Eigenpair> basis;
    const bool pure_quadratic = V.kind() == Potential::Kind::Polynomial &&
                                V.coeffs().size() == 3 && V.coeffs()[0] == 0.0 &&
                                V.coeffs()[1] == 0.0 && V.coeffs()[2] > 0.0;
    if (pure_quadratic) {
        for (std::size_t n = 0; n < n_max; ++n) {
            basis.push_back(harmonic_eigenstate(n, 2.0 * V.coeffs()[2], V.mass(), g));
        }
    } else if (V.kind() == Potential::Kind::Morse) {
        for (std::size_t n = 0; n < n_max; ++n) basis.push_back(morse_eigenstate(n, V, g));
    } else {
        basis = fd_eigensolve(V, g, n_max);
    }

    auto build_component = [&](const ComponentSpec& comp, const std::string& id) {
        std::vector<Eigenpair> sub;
        std::vector<std::complex<double>> coeff;
        for (const auto& c2 : comp.coefficients) {
            sub.push_back(basis.at(c2.n));
            coeff.push_back(c2.c);
        }
        return superposition(sub, coeff, g.hbar, id);
    };

    if (c.state.kind == "mixture") {
        std::vector<std::pair<double, QuantumState>> parts;
        for (std::size_t k = 0; k < c.state.components.size(); ++k) {
            parts.emplace_back(c.state.components[k].weight,
                               build_component(c.state.components[k],
                                               "mixture-part" + std::to_string(k)));
        }
        return mixture(std::move(parts), "mixture");
    }
    if (c.state.components.empty()) throw std::invalid_argument("state: no coefficients");
    std::string id = c.state.kind == "eigen"
                         ? "eigen-n" + std::to_string(c.state.components[0].coefficients[0].n)
                         : "superposition";
    return build_component(c.state.components[0], id);
}

}  // namespace wigflow
