#pragma once

// Scenario documents (JSON). Every object level has a closed key set; unknown keys,
// type mismatches and physically inconsistent settings raise ConfigError with the
// source line of the offending key.

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgads/data.hpp"
#include "kgads/errors.hpp"
#include "kgads/params.hpp"
#include "kgads/plan.hpp"

namespace kgads::io {

using nlohmann::json;

enum class Geometry { halfline, brane };

struct CheckSpec {
    std::string name;
    std::optional<double> tolerance;
    bool expect_fail = false;
    json params = json::object();
    int line = 0;

    double num(const std::string& key, double fallback) const { return params.contains(key) ? params.at(key).get<double>() : fallback; }
    bool flag(const std::string& key, bool fallback) const { return params.contains(key) ? params.at(key).get<bool>() : fallback; }
    double tol(double fallback) const { return tolerance.value_or(fallback); }
};

struct OutputGrid {
    double z_end = 0.0;  // 0: chosen from the datum and the requested times
    std::size_t z_count = 0;
    double r_end = 0.0;
    std::size_t r_count = 0;
};

struct Scenario {
    std::string name;
    std::string description;
    Geometry geometry = Geometry::halfline;
    ModelParams params;
    std::optional<double> lambda_cosmological;
    Datum datum;
    bool radial = false;
    GridOptions grids;
    double t_max = 0.0;
    int mode_count = 10;  // rows written by `spectrum` on the brane
    OutputGrid output;
    std::vector<double> times{0.0};
    std::vector<CheckSpec> checks;
    std::string source_path;
    json document;
};

// Check names and the parameters each accepts.
inline const std::map<std::string, std::set<std::string>>& check_catalog() {
    static const std::map<std::string, std::set<std::string>> c{
        {"energy_conservation", {"times"}},
        {"finite_speed", {"R", "t", "slope", "z_end"}},
        {"lacuna", {"R", "t", "require_even_nu", "r_end", "r_count", "z_end", "z_count"}},
        {"equipartition", {"R", "times", "require_even_nu"}},
        {"decay", {"expected", "t_min", "t_max", "count", "weighted", "min_r2", "h", "z_count", "informational"}},
        {"strichartz", {"exponents", "T_max", "scale", "scaled_T_max", "nodes_per_window", "homogeneity_tol", "panel", "nodes_per_panel"}},
        {"strichartz_rejects", {"q", "r", "weight"}},
        {"mirror", {"bounce_time", "bounce_tol", "energy_tol", "dt", "z_end", "z_count", "kappa"}},
        {"lift", {"t", "h", "z_end", "r_end", "refinements"}},
        {"fd_compare", {"t", "h", "courant"}},
        {"fd_convergence", {"t", "h0", "refinements", "kind", "courant", "informational"}},
    };
    return c;
}

// Checks that need mu = (nu^2 - 1)/4; lacuna and equipartition further need even nu
// unless require_even_nu is false.
inline bool check_needs_nu(const std::string& name) {
    return name == "lacuna" || name == "equipartition" || name == "mirror" || name == "lift" || name == "strichartz";
}

namespace detail {

inline int line_of_offset(const std::string& text, std::size_t offset) {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

class ScenarioReader {
public:
    ScenarioReader(std::string text, std::string origin) : text_(std::move(text)), origin_(std::move(origin)) {}

    Scenario read() {
        json doc;
        try {
            doc = json::parse(text_);
        } catch (const json::parse_error& e) {
            std::ostringstream os;
            os << origin_ << ":" << line_of_offset(text_, e.byte == 0 ? 0 : e.byte - 1) << ": invalid JSON: " << e.what();
            throw ConfigError(os.str());
        }
        if (!doc.is_object()) fail(1, "scenario must be a JSON object");
        Scenario s;
        s.document = doc;
        s.source_path = origin_;
        closed(doc, {"name", "description", "geometry", "mu", "lambda_cosmological", "datum", "transverse", "grids", "times", "output", "checks"},
               "scenario");
        s.name = str(doc, "name", "scenario");
        if (doc.contains("description")) s.description = str(doc, "description", "scenario");
        const std::string geo = str(doc, "geometry", "scenario");
        if (geo == "halfline") s.geometry = Geometry::halfline;
        else if (geo == "brane") s.geometry = Geometry::brane;
        else fail(line("geometry"), "geometry must be \"halfline\" or \"brane\", got \"" + geo + "\"");

        const bool has_mu = doc.contains("mu"), has_lc = doc.contains("lambda_cosmological");
        if (has_mu == has_lc) fail(has_mu ? line("lambda_cosmological") : 1, "exactly one of \"mu\" and \"lambda_cosmological\" must be given");
        try {
            if (has_mu) {
                s.params = make_params(number(doc, "mu", "scenario"));
            } else {
                s.lambda_cosmological = number(doc, "lambda_cosmological", "scenario");
                s.params = mass_from_cosmological(*s.lambda_cosmological);
            }
        } catch (const DomainError& e) {
            fail(line(has_mu ? "mu" : "lambda_cosmological"), e.what());
        }

        read_datum(doc, s);
        read_transverse(doc, s);
        read_grids(doc, s);
        read_output(doc, s);
        if (doc.contains("times")) {
            s.times = number_list(doc.at("times"), "times");
            if (s.times.empty()) fail(line("times"), "times must not be empty");
        }
        for (double t : s.times)
            if (!std::isfinite(t)) fail(line("times"), "times must be finite");
        if (doc.contains("checks")) read_checks(doc.at("checks"), s);
        double reach_t = 0.0;
        for (double t : s.times) reach_t = std::max(reach_t, std::abs(t));
        if (s.t_max == 0.0) s.t_max = std::max(reach_t, 1.0);
        if (reach_t > s.t_max) fail(line("times"), "requested times exceed grids.t_max");
        return s;
    }

private:
    std::string text_;
    std::string origin_;

    [[noreturn]] void fail(int ln, const std::string& msg) const {
        std::ostringstream os;
        os << origin_ << ":" << ln << ": " << msg;
        throw ConfigError(os.str());
    }

    // Line of the first occurrence of "key": after the given search start.
    int line(const std::string& key, std::size_t from = 0) const {
        const std::string needle = "\"" + key + "\"";
        std::size_t pos = text_.find(needle, from);
        while (pos != std::string::npos) {
            std::size_t k = pos + needle.size();
            while (k < text_.size() && std::isspace(static_cast<unsigned char>(text_[k]))) ++k;
            if (k < text_.size() && text_[k] == ':') return line_of_offset(text_, pos);
            pos = text_.find(needle, pos + 1);
        }
        return 1;
    }

    void closed(const json& obj, const std::set<std::string>& allowed, const std::string& where) const {
        for (const auto& [k, v] : obj.items())
            if (!allowed.count(k)) fail(line(k), "unknown key \"" + k + "\" in " + where);
    }

    double number(const json& obj, const std::string& key, const std::string& where) const {
        const json& v = obj.at(key);
        if (!v.is_number()) fail(line(key), "\"" + key + "\" in " + where + " must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(line(key), "\"" + key + "\" in " + where + " must be finite");
        return x;
    }

    double positive(const json& obj, const std::string& key, const std::string& where) const {
        const double x = number(obj, key, where);
        if (!(x > 0.0)) fail(line(key), "\"" + key + "\" in " + where + " must be positive");
        return x;
    }

    std::string str(const json& obj, const std::string& key, const std::string& where) const {
        if (!obj.contains(key)) fail(1, "missing \"" + key + "\" in " + where);
        const json& v = obj.at(key);
        if (!v.is_string()) fail(line(key), "\"" + key + "\" in " + where + " must be a string");
        return v.get<std::string>();
    }

    bool boolean(const json& obj, const std::string& key, const std::string& where) const {
        const json& v = obj.at(key);
        if (!v.is_boolean()) fail(line(key), "\"" + key + "\" in " + where + " must be true or false");
        return v.get<bool>();
    }

    std::vector<double> number_list(const json& v, const std::string& key) const {
        if (!v.is_array()) fail(line(key), "\"" + key + "\" must be an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) fail(line(key), "\"" + key + "\" must be an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    void read_datum(const json& doc, Scenario& s) const {
        if (!doc.contains("datum")) fail(1, "missing \"datum\"");
        const json& d = doc.at("datum");
        if (!d.is_object()) fail(line("datum"), "\"datum\" must be an object");
        closed(d, {"kind", "amplitude", "z_center", "width", "R", "scale", "n", "z0", "kappa", "sigma", "r_width", "step_profile", "in_velocity"},
               "datum");
        const std::string kind = str(d, "kind", "datum");
        Datum& x = s.datum;
        if (kind == "gaussian_bump") x.kind = DatumKind::gaussian_bump;
        else if (kind == "annulus_bump") x.kind = DatumKind::annulus_bump;
        else if (kind == "hankel_self_reciprocal") x.kind = DatumKind::hankel_self_reciprocal;
        else if (kind == "pure_mode") x.kind = DatumKind::pure_mode;
        else if (kind == "packet") x.kind = DatumKind::packet;
        else fail(line("kind"), "unknown datum kind \"" + kind + "\"");
        if (d.contains("amplitude")) x.amplitude = number(d, "amplitude", "datum");
        if (d.contains("z_center")) x.z_center = positive(d, "z_center", "datum");
        if (d.contains("width")) x.width = positive(d, "width", "datum");
        if (d.contains("R")) x.R = positive(d, "R", "datum");
        if (d.contains("scale")) x.scale = positive(d, "scale", "datum");
        if (d.contains("z0")) x.z0 = positive(d, "z0", "datum");
        if (d.contains("kappa")) x.kappa = number(d, "kappa", "datum");
        if (d.contains("sigma")) x.sigma = positive(d, "sigma", "datum");
        if (d.contains("r_width")) x.r_width = positive(d, "r_width", "datum");
        if (d.contains("step_profile")) x.step_profile = boolean(d, "step_profile", "datum");
        if (d.contains("in_velocity")) x.in_velocity = boolean(d, "in_velocity", "datum");
        if (d.contains("n")) {
            const double n = number(d, "n", "datum");
            if (n < 0 || n != std::floor(n)) fail(line("n"), "\"n\" in datum must be a non-negative integer");
            x.mode = static_cast<int>(n);
        }
        if (x.kind == DatumKind::pure_mode && s.geometry != Geometry::brane) fail(line("kind"), "pure_mode data exist only on the brane");
        if (x.kind == DatumKind::packet && x.in_velocity) fail(line("in_velocity"), "packets carry their own velocity");
    }

    void read_transverse(const json& doc, Scenario& s) const {
        if (!doc.contains("transverse")) return;
        const json& t = doc.at("transverse");
        if (!t.is_object()) fail(line("transverse"), "\"transverse\" must be an object");
        closed(t, {"kind", "k_count", "k_max"}, "transverse");
        const std::string kind = str(t, "kind", "transverse");
        if (kind == "independent") {
            if (t.contains("k_count") || t.contains("k_max")) fail(line("kind"), "k_count and k_max apply only to radial transverse data");
            s.radial = false;
        } else if (kind == "radial") {
            s.radial = true;
            if (t.contains("k_max")) s.grids.k_cutoff = positive(t, "k_max", "transverse");
            if (t.contains("k_count")) s.grids.k_nodes_min = static_cast<std::size_t>(positive(t, "k_count", "transverse"));
        } else {
            fail(line("kind"), "transverse kind must be \"independent\" or \"radial\"");
        }
    }

    void read_grids(const json& doc, Scenario& s) const {
        if (!doc.contains("grids")) return;
        const json& g = doc.at("grids");
        if (!g.is_object()) fail(line("grids"), "\"grids\" must be an object");
        closed(g, {"t_max", "nodes_per_panel", "mass_cutoff", "spectral_scale", "tail_budget", "mode_count"}, "grids");
        if (g.contains("t_max")) s.t_max = positive(g, "t_max", "grids");
        if (g.contains("nodes_per_panel")) s.grids.nodes_per_panel = static_cast<std::size_t>(positive(g, "nodes_per_panel", "grids"));
        if (g.contains("mass_cutoff")) s.grids.mass_cutoff = positive(g, "mass_cutoff", "grids");
        if (g.contains("spectral_scale")) s.grids.spectral_scale = positive(g, "spectral_scale", "grids");
        if (g.contains("tail_budget")) s.grids.tail_budget = positive(g, "tail_budget", "grids");
        if (g.contains("mode_count")) s.mode_count = static_cast<int>(positive(g, "mode_count", "grids"));
    }

    void read_output(const json& doc, Scenario& s) const {
        if (!doc.contains("output")) return;
        const json& o = doc.at("output");
        if (!o.is_object()) fail(line("output"), "\"output\" must be an object");
        closed(o, {"z_end", "z_count", "r_end", "r_count"}, "output");
        if (o.contains("z_end")) s.output.z_end = positive(o, "z_end", "output");
        if (o.contains("z_count")) s.output.z_count = static_cast<std::size_t>(positive(o, "z_count", "output"));
        if (o.contains("r_end")) s.output.r_end = positive(o, "r_end", "output");
        if (o.contains("r_count")) s.output.r_count = static_cast<std::size_t>(positive(o, "r_count", "output"));
    }

    void read_checks(const json& list, Scenario& s) const {
        if (!list.is_array()) fail(line("checks"), "\"checks\" must be an array");
        std::size_t cursor = text_.find("\"checks\"");
        for (const auto& c : list) {
            if (!c.is_object()) fail(line("checks"), "each check must be an object");
            CheckSpec spec;
            spec.name = str(c, "name", "check");
            const std::size_t at = text_.find("\"" + spec.name + "\"", cursor);
            if (at != std::string::npos) cursor = at + 1;
            spec.line = at == std::string::npos ? line("checks") : line_of_offset(text_, at);
            auto bad = [&](const std::string& msg) { fail(spec.line, msg); };
            const auto& cat = check_catalog();
            const auto it = cat.find(spec.name);
            if (it == cat.end()) bad("unknown check \"" + spec.name + "\"");
            for (const auto& [k, v] : c.items()) {
                if (k == "name") continue;
                if (k == "tolerance") {
                    if (!v.is_number() || !(v.get<double>() > 0.0)) bad("check tolerance must be a positive number");
                    spec.tolerance = v.get<double>();
                } else if (k == "expect_fail") {
                    if (!v.is_boolean()) bad("expect_fail must be true or false");
                    spec.expect_fail = v.get<bool>();
                } else if (it->second.count(k)) {
                    spec.params[k] = v;
                } else {
                    bad("unknown key \"" + k + "\" for check \"" + spec.name + "\"");
                }
            }
            try {
                validate_check_types(spec);
            } catch (const std::exception& e) {
                bad(std::string("malformed parameter for check \"") + spec.name + "\": " + e.what());
            }
            if (check_needs_nu(spec.name) && !spec.expect_fail) {
                if (!s.params.nu) bad("check \"" + spec.name + "\" requires mu = (nu^2 - 1)/4 for an integer nu");
                const bool even_required = (spec.name == "lacuna" || spec.name == "equipartition") && spec.flag("require_even_nu", true);
                if (even_required && !s.params.nu_even()) bad("check \"" + spec.name + "\" requires an even nu");
            }
            if ((spec.name == "lacuna" || spec.name == "equipartition" || spec.name == "strichartz" || spec.name == "lift" ||
                 spec.name == "finite_speed" || spec.name == "mirror") &&
                s.geometry != Geometry::halfline)
                bad("check \"" + spec.name + "\" applies to the half-line geometry only");
            if ((spec.name == "lacuna" || spec.name == "equipartition" || spec.name == "strichartz") && !s.radial)
                bad("check \"" + spec.name + "\" needs radial transverse data");
            if (spec.name == "mirror" && (s.radial || s.datum.kind != DatumKind::packet)) bad("check \"mirror\" needs an x-independent packet datum");
            s.checks.push_back(std::move(spec));
        }
    }

    static void validate_check_types(const CheckSpec& c) {
        for (const auto& [k, v] : c.params.items()) {
            if (k == "times") {
                for (const auto& x : v) (void)x.get<double>();
            } else if (k == "exponents") {
                for (const auto& e : v) {
                    if (e.size() != 3) throw ConfigError("each Strichartz exponent entry is [q, r, weight]");
                    for (const auto& x : e) (void)x.get<double>();
                }
            } else if (k == "kind") {
                const auto s = v.get<std::string>();
                if (s != "space" && s != "time") throw ConfigError("kind must be \"space\" or \"time\"");
            } else if (k == "weighted" || k == "require_even_nu" || k == "informational") {
                (void)v.get<bool>();
            } else {
                (void)v.get<double>();
            }
        }
    }
};

}  // namespace detail

inline Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>") {
    try {
        return detail::ScenarioReader(text, origin).read();
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open scenario " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

}  // namespace kgads::io
