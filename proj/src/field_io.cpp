#include "wigflow/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <json.hpp>

namespace wigflow {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; byte swapping is not implemented");

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void require_stream(const std::ios& s, const std::string& path, const char* op) {
    if (!s) throw std::runtime_error(std::string(op) + " failed for " + path);
}

}  // namespace

void write_field_binary(const std::string& path, const ScalarField& f,
                        const std::string& name) {
    const PhaseGrid& g = *f.grid;
    nlohmann::json header = {{"nx", g.n_x},     {"np", g.n_p()}, {"x_min", g.x_min},
                             {"dx", g.dx},      {"p_min", g.p_min()}, {"dp", g.dp},
                             {"hbar", g.hbar},  {"name", name}};
    std::ofstream out(path, std::ios::binary);
    require_stream(out, path, "open");
    out << header.dump() << '\n';
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    require_stream(out, path, "write");
}

ScalarField read_field_binary(const std::string& path, std::string* name) {
    std::ifstream in(path, std::ios::binary);
    require_stream(in, path, "open");
    std::string line;
    std::getline(in, line);
    require_stream(in, path, "read header");
    const auto header = nlohmann::json::parse(line);

    const auto nx = header.at("nx").get<std::size_t>();
    const auto np = header.at("np").get<std::size_t>();
    const double x_min = header.at("x_min").get<double>();
    const double dx = header.at("dx").get<double>();
    const double hbar = header.at("hbar").get<double>();
    if (name) *name = header.at("name").get<std::string>();

    auto grid = std::make_shared<const PhaseGrid>(
        make_grid(x_min, x_min + static_cast<double>(nx) * dx, nx, np, hbar));
    if (std::abs(grid->dp - header.at("dp").get<double>()) > 1e-12 * grid->dp) {
        throw std::runtime_error(path + ": header dp inconsistent with grid convention");
    }
    ScalarField f = ScalarField::zeros(grid);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    require_stream(in, path, "read payload");
    return f;
}

void write_field_csv(const std::string& path, const ScalarField& f) {
    const PhaseGrid& g = *f.grid;
    std::ofstream out(path);
    require_stream(out, path, "open");
    out << "x,p,value\n";
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            out << num(g.x(i)) << ',' << num(g.p(k)) << ',' << num(f.at(i, k)) << '\n';
        }
    }
    require_stream(out, path, "write");
}

void write_mask_binary(const std::string& path, const ScalarField& shape,
                       const std::vector<std::uint8_t>& mask, const std::string& name) {
    ScalarField f = ScalarField::zeros(shape.grid);
    for (std::size_t n = 0; n < mask.size(); ++n) f.values[n] = mask[n] ? 1.0 : 0.0;
    write_field_binary(path, f, name);
}

void write_stagnation_csv(const std::string& path,
                          const std::vector<StagnationPoint>& points) {
    std::ofstream out(path);
    require_stream(out, path, "open");
    out << "x,p,omega,residual,winding,quant_error,indeterminate\n";
    for (const auto& s : points) {
        out << num(s.x) << ',' << num(s.p) << ',' << s.omega << ',' << num(s.residual)
            << ',' << num(s.winding) << ',' << num(s.quant_error) << ','
            << (s.indeterminate ? 1 : 0) << '\n';
    }
    require_stream(out, path, "write");
}

void write_fieldlines_csv(const std::string& path, const std::string& summary_path,
                          const std::vector<Fieldline>& lines) {
    std::ofstream out(path);
    require_stream(out, path, "open");
    out << "id,step,x,p\n";
    for (std::size_t id = 0; id < lines.size(); ++id) {
        for (std::size_t n = 0; n < lines[id].points.size(); ++n) {
            out << id << ',' << n << ',' << num(lines[id].points[n][0]) << ','
                << num(lines[id].points[n][1]) << '\n';
        }
    }
    require_stream(out, path, "write");

    std::ofstream sum(summary_path);
    require_stream(sum, summary_path, "open");
    sum << "id,points,reason\n";
    for (std::size_t id = 0; id < lines.size(); ++id) {
        const char* reason = "max_steps";
        switch (lines[id].reason) {
            case FieldlineEnd::LeftDomain: reason = "left_domain"; break;
            case FieldlineEnd::MaxSteps: reason = "max_steps"; break;
            case FieldlineEnd::ReachedStagnation: reason = "reached_stagnation"; break;
            case FieldlineEnd::SeedOutside: reason = "seed_outside"; break;
        }
        sum << id << ',' << lines[id].points.size() << ',' << reason << '\n';
    }
    require_stream(sum, summary_path, "write");
}

void write_reports_jsonl(const std::string& path, std::vector<CheckReport> reports) {
    std::stable_sort(reports.begin(), reports.end(),
                     [](const CheckReport& a, const CheckReport& b) {
                         if (a.name != b.name) return a.name < b.name;
                         return a.meta < b.meta;
                     });
    std::ofstream out(path);
    require_stream(out, path, "open");
    for (const auto& r : reports) {
        nlohmann::json j = {{"name", r.name},
                            {"residual", r.residual},
                            {"tolerance", r.tolerance},
                            {"pass", r.pass},
                            {"meta", r.meta}};
        out << j.dump() << '\n';
    }
    require_stream(out, path, "write");
}

}  // namespace wigflow
