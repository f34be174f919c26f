#pragma once

// CSV artifacts: a `# {json}` metadata line, a header row, comma-separated rows with
// '.' decimals and LF endings. Numbers are printed with 17 significant digits so the
// files round-trip and are byte-identical across runs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgads/brane.hpp"
#include "kgads/errors.hpp"
#include "kgads/field.hpp"
#include "kgads/halfline.hpp"
#include "kgads/params.hpp"
#include "kgads/verify/report.hpp"

namespace kgads::io {

using nlohmann::json;

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct CsvTable {
    json metadata = json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path.string() + " for writing");
    f << "# " << t.metadata.dump() << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) f << (c ? "," : "") << t.columns[c];
    f << '\n';
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size()) throw ShapeError("csv: row length does not match the header");
        for (std::size_t c = 0; c < row.size(); ++c) f << (c ? "," : "") << format_number(row[c]);
        f << '\n';
    }
}

// Reads a table written by write_csv (or any numeric CSV with optional '#' lines).
inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    bool header = false;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto brace = line.find('{');
            if (brace != std::string::npos) t.metadata = json::parse(line.substr(brace));
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!header) {
            while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
            header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline json params_json(const ModelParams& p) {
    json j{{"mu", p.mu}, {"lambda", p.lambda_index}, {"alpha_plus", p.alpha_plus}, {"alpha_minus", p.alpha_minus}};
    j["nu"] = p.nu ? json(*p.nu) : json(nullptr);
    return j;
}

inline json grid_json(const QuadratureGrid& g) {
    json j{{"size", g.size()}, {"domain_end", g.domain_end}, {"nodes_per_panel", g.nodes_per_panel}};
    if (g.paneled()) j["panels"] = g.panel_count();
    return j;
}

inline json tails_json(const TailReport& t) {
    return {{"position_tail", t.position_tail}, {"velocity_tail", t.velocity_tail}, {"budget", t.budget}};
}

inline CsvTable field_table(const FieldState& s) {
    CsvTable t;
    t.metadata["t"] = s.t;
    t.metadata["transverse_k"] = s.transverse_k;
    t.metadata["z_grid"] = grid_json(s.z_grid);
    if (s.radial()) {
        t.metadata["r_grid"] = grid_json(*s.r_grid);
        t.columns = {"t", "r", "z", "phi", "dphi_dt"};
    } else {
        t.columns = {"t", "z", "phi", "dphi_dt"};
    }
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < s.phi.cols(); ++j) {
            if (s.radial()) t.rows.push_back({s.t, s.r_grid->nodes[i], s.z_grid.nodes[j], s.phi(i, j), s.dphi_dt(i, j)});
            else t.rows.push_back({s.t, s.z_grid.nodes[j], s.phi(i, j), s.dphi_dt(i, j)});
        }
    return t;
}

inline CsvTable tower_table(const ContinuousTower& tw) {
    CsvTable t;
    t.metadata["params"] = params_json(tw.params);
    t.metadata["m_grid"] = grid_json(tw.m_grid);
    t.metadata["tails"] = tails_json(tw.tails);
    t.columns = {"k", "m", "m_weight", "a", "b"};
    const auto k = tw.transverse.nodes();
    for (Eigen::Index i = 0; i < tw.a.rows(); ++i)
        for (Eigen::Index j = 0; j < tw.a.cols(); ++j)
            t.rows.push_back({k[i], tw.m_grid.nodes[j], tw.m_grid.weights[j], tw.a(i, j), tw.b(i, j)});
    return t;
}

inline CsvTable tower_table(const BraneTower& tw) {
    CsvTable t;
    t.metadata["params"] = params_json(tw.spectrum.params);
    t.metadata["mode_count"] = tw.spectrum.count();
    t.metadata["tails"] = tails_json(tw.tails);
    t.columns = {"k", "n", "lambda_n", "a", "b"};
    const auto k = tw.transverse.nodes();
    for (Eigen::Index i = 0; i < tw.a.rows(); ++i)
        for (Eigen::Index j = 0; j < tw.a.cols(); ++j)
            t.rows.push_back({k[i], double(j), tw.spectrum.eigenvalues[j], tw.a(i, j), tw.b(i, j)});
    return t;
}

inline CsvTable spectrum_table(const BraneSpectrum& s) {
    CsvTable t;
    t.metadata["params"] = params_json(s.params);
    t.metadata["gram_deviation"] = s.gram_deviation;
    t.columns = {"n", "lambda_n", "C_n", "robin_residual"};
    for (std::size_t n = 0; n < s.count(); ++n) t.rows.push_back({double(n), s.eigenvalues[n], s.norm_constants[n], s.robin_residuals[n]});
    return t;
}

inline json report_json(const VerificationReport& r) {
    json m = json::object();
    for (const auto& [k, v] : r.measured) m[k] = v;
    return {{"check_name", r.check_name}, {"passed", r.passed},     {"measured", m},
            {"tolerance", r.tolerance},   {"notes", r.notes},       {"informational", r.informational}};
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path.string() + " for writing");
    f << j.dump(2) << '\n';
}

}  // namespace kgads::io
