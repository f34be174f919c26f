#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kgads/io/runner.hpp"

using namespace kgads;
using namespace kgads::io;
using Catch::Matchers::ContainsSubstring;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("kgads_test_cli_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::size_t column(const CsvTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
}

const char* kBraneSpectrum = R"({
  "name": "brane_spectrum",
  "geometry": "brane",
  "mu": 3.75,
  "datum": {"kind": "pure_mode", "n": 0},
  "grids": {"mode_count": 10}
})";

const char* kHalfline = R"({
  "name": "em",
  "geometry": "halfline",
  "mu": 0.75,
  "datum": {"kind": "gaussian_bump", "z_center": 3.0, "width": 0.5},
  "times": [0.0, 1.0, 2.0]
})";

}  // namespace

TEST_CASE("scenario parsing: accepted documents", "[io][scenario]") {
    const Scenario s = parse_scenario(kHalfline, "em.json");
    CHECK(s.name == "em");
    CHECK(s.geometry == Geometry::halfline);
    CHECK(s.params.lambda_index == 1.0);
    CHECK(s.times.size() == 3);
    CHECK(s.t_max == 2.0);
    CHECK_FALSE(s.radial);

    const Scenario lc = parse_scenario(R"({"name": "g", "geometry": "brane", "lambda_cosmological": 0,
        "datum": {"kind": "gaussian_bump", "z_center": 0.5, "width": 0.1}})");
    CHECK(lc.params.mu == 3.75);
    REQUIRE(lc.lambda_cosmological);

    const Scenario r = parse_scenario(R"({"name": "r", "geometry": "halfline", "mu": 0.75,
        "datum": {"kind": "annulus_bump", "R": 1},
        "transverse": {"kind": "radial", "k_count": 64, "k_max": 20},
        "checks": [{"name": "lacuna", "t": 3, "tolerance": 1e-5}, {"name": "lacuna", "expect_fail": true}]})");
    CHECK(r.radial);
    CHECK(r.grids.k_nodes_min == 64);
    CHECK(r.grids.k_cutoff == 20.0);
    REQUIRE(r.checks.size() == 2);
    CHECK(r.checks[0].tol(0.0) == 1e-5);
    CHECK(r.checks[0].num("t", 0.0) == 3.0);
    CHECK(r.checks[1].expect_fail);
    CHECK(r.checks[0].line == 4);
}

TEST_CASE("scenario parsing: line-precise errors", "[io][scenario]") {
    CHECK_THROWS_WITH(parse_scenario(R"({
  "name": "x",
  "geometry": "halfline",
  "mu": 0.75,
  "datum": {"kind": "gaussian_bump"},
  "colour": 3
})", "f.json"),
                      ContainsSubstring("f.json:6:") && ContainsSubstring("unknown key \"colour\""));
    CHECK_THROWS_WITH(parse_scenario(R"({
  "name": "x",
  "geometry": "halfline",
  "mu": 0.75,
  "datum": {"kind": "gaussian_bump",
            "widht": 0.5}
})", "f.json"),
                      ContainsSubstring("f.json:6:") && ContainsSubstring("in datum"));
    CHECK_THROWS_WITH(parse_scenario(R"({"name": "x", "geometry": "halfline", "mu": 0.75, "lambda_cosmological": -3,
        "datum": {"kind": "gaussian_bump"}})"),
                      ContainsSubstring("exactly one"));
    CHECK_THROWS_WITH(parse_scenario(R"({"name": "x", "geometry": "halfline", "datum": {"kind": "gaussian_bump"}})"),
                      ContainsSubstring("exactly one"));
    CHECK_THROWS_WITH(parse_scenario(R"({
  "name": "x",
  "geometry": "halfline",
  "mu": -1,
  "datum": {"kind": "gaussian_bump"}
})", "bad.json"),
                      ContainsSubstring("bad.json:4:") && ContainsSubstring("−1/4 < μ"));
    CHECK_THROWS_WITH(parse_scenario(R"({"name": "x", "geometry": "halfline", "mu": 0.75, "datum": {"kind": "gaussian_bump"},
        "checks": [{"name": "no_such_check"}]})"),
                      ContainsSubstring("unknown check \"no_such_check\""));
    CHECK_THROWS_WITH(parse_scenario(R"({"name": "x", "geometry": "halfline", "mu": 1.0, "datum": {"kind": "annulus_bump"},
        "transverse": {"kind": "radial"}, "checks": [{"name": "lacuna"}]})"),
                      ContainsSubstring("requires mu = (nu^2 - 1)/4"));
    CHECK_THROWS_WITH(parse_scenario(R"({"name": "x", "geometry": "halfline", "mu": 2.0, "datum": {"kind": "annulus_bump"},
        "transverse": {"kind": "radial"}, "checks": [{"name": "lacuna"}]})"),
                      ContainsSubstring("requires an even nu"));
    CHECK_THROWS_WITH(parse_scenario(R"({"name": "x", "geometry": "halfline", "mu": 0.75, "datum": {"kind": "gaussian_bump"},
        "checks": [{"name": "decay", "h": "fine"}]})"),
                      ContainsSubstring("malformed parameter"));
    CHECK_THROWS_WITH(parse_scenario(R"({"name": "x", "geometry": "halfline", "mu": 0.75, "datum": {"kind": "pure_mode"}})"),
                      ContainsSubstring("only on the brane"));
    CHECK_THROWS_WITH(parse_scenario(R"({"name": "x", "geometry": "halfline", "mu": 0.75, "datum": {"kind": "gaussian_bump"},
        "times": [1, 5], "grids": {"t_max": 2}})"),
                      ContainsSubstring("exceed grids.t_max"));
    CHECK_THROWS_AS(parse_scenario("{ not json"), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("CSV round trip", "[io][csv]") {
    const fs::path dir = scratch("csv");
    CsvTable t;
    t.metadata = {{"a", 1}, {"s", "x"}};
    t.columns = {"x", "y"};
    t.rows = {{0.1, -2.5e-300}, {1.0 / 3.0, 6.02214076e23}};
    write_csv(dir / "t.csv", t);
    const CsvTable u = read_csv(dir / "t.csv");
    CHECK(u.metadata == t.metadata);
    CHECK(u.columns == t.columns);
    CHECK(u.rows == t.rows);
    const std::string raw = slurp(dir / "t.csv");
    CHECK(raw.find('\r') == std::string::npos);
    CHECK(raw.substr(0, 2) == "# ");
    t.rows.push_back({1.0});
    CHECK_THROWS_AS(write_csv(dir / "bad.csv", t), ShapeError);
}

TEST_CASE("spectrum command", "[io][cli]") {
    const fs::path dir = scratch("spectrum");
    ScenarioRunner(parse_scenario(kBraneSpectrum)).spectrum(dir / "brane");
    const CsvTable b = read_csv(dir / "brane" / "spectrum.csv");
    CHECK(b.columns == std::vector<std::string>{"n", "lambda_n", "C_n", "robin_residual"});
    REQUIRE(b.rows.size() == 10);
    CHECK(b.rows[0][1] == Catch::Approx(3.8317059702).epsilon(1e-10));
    for (const auto& row : b.rows) CHECK(std::abs(row[3]) < 1e-11);
    CHECK(b.metadata.at("params").at("mu") == 3.75);

    ScenarioRunner(parse_scenario(kHalfline)).spectrum(dir / "half");
    const json h = json::parse(slurp(dir / "half" / "spectrum_header.json"));
    CHECK(h.at("params").at("lambda") == 1.0);
    CHECK(h.at("params").at("alpha_plus") == 0.5);
    CHECK(h.contains("m_grid"));
    CHECK(read_csv(dir / "half" / "spectrum.csv").rows.size() > 100);
}

TEST_CASE("evolve command: snapshot at t = 0 and the energy series", "[io][cli]") {
    const fs::path dir = scratch("evolve");
    const Scenario s = parse_scenario(kHalfline);
    ScenarioRunner(s).evolve(dir);
    CHECK(fs::exists(dir / "tower.csv"));
    const CsvTable snap = read_csv(dir / "snapshot_000_t0.csv");
    CHECK(snap.columns == std::vector<std::string>{"t", "z", "phi", "dphi_dt"});
    QuadratureGrid z;
    for (const auto& row : snap.rows) z.nodes.push_back(row[1]);
    z.weights.assign(z.nodes.size(), 1.0);
    z.domain_end = z.nodes.back();
    const FieldState ref = sample_datum(s.datum, s.params, std::nullopt, z);
    double err = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < snap.rows.size(); ++j) {
        err += std::pow(snap.rows[j][2] - ref.phi(0, j), 2);
        norm += std::pow(ref.phi(0, j), 2);
    }
    CHECK(std::sqrt(err / norm) < 1e-6);

    const CsvTable e = read_csv(dir / "energy.csv");
    REQUIRE(e.rows.size() == 3);
    const std::size_t tot = column(e, "total");
    for (const auto& row : e.rows) CHECK(std::abs(row[tot] / e.rows[0][tot] - 1.0) < 1e-6);
    for (const auto& row : e.rows) CHECK(row[column(e, "boundary")] == 0.0);
    CHECK(e.metadata.at("params").at("mu") == 0.75);
}

TEST_CASE("evolve command on the brane writes the boundary energy", "[io][cli]") {
    const fs::path dir = scratch("evolve_brane");
    ScenarioRunner(parse_scenario(R"({"name": "b", "geometry": "brane", "mu": 3.75,
        "datum": {"kind": "gaussian_bump", "z_center": 0.5, "width": 0.1}, "times": [0, 0.5, 1]})"))
        .evolve(dir);
    const CsvTable e = read_csv(dir / "energy.csv");
    const std::size_t bd = column(e, "boundary"), tot = column(e, "total"), sp = column(e, "spectral_total");
    bool any_boundary = false;
    for (const auto& row : e.rows) {
        any_boundary = any_boundary || row[bd] > 0.0;
        CHECK(std::abs(row[tot] / e.rows[0][tot] - 1.0) < 1e-6);
        CHECK(std::abs(row[tot] / row[sp] - 1.0) < 1e-5);
    }
    CHECK(any_boundary);
}

TEST_CASE("runs are reproducible byte for byte", "[io][cli]") {
    const fs::path a = scratch("repro_a"), b = scratch("repro_b");
    const Scenario s = parse_scenario(kHalfline);
    ScenarioRunner(s, 3).evolve(a);
    ScenarioRunner(s, 3).evolve(b);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        ++files;
        CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
    CHECK(files == 5);
}

TEST_CASE("verify command: outcomes and negative controls", "[io][cli]") {
    const Scenario s = parse_scenario(R"({"name": "v", "geometry": "halfline", "mu": 0.75,
        "datum": {"kind": "gaussian_bump", "z_center": 1.5, "width": 0.0646},
        "grids": {"t_max": 4.5},
        "checks": [
          {"name": "finite_speed", "R": 2, "t": 3},
          {"name": "finite_speed", "R": 2, "t": 3, "slope": 0.5, "expect_fail": true},
          {"name": "strichartz_rejects", "q": 2, "r": 100},
          {"name": "energy_conservation", "times": [0, 1, 2]}
        ]})");
    const ScenarioRunner runner(s);
    const auto out = runner.verify();
    REQUIRE(out.size() == 4);
    for (const auto& o : out) CHECK(o.effective_pass());
    CHECK(out[1].outcome() == "control_failed_as_designed");
    CHECK(format_outcome(out[1]).rfind("PASS finite_speed_inflated", 0) == 0);
    const json doc = verification_document(runner, out);
    CHECK(doc.at("all_passed") == true);
    CHECK(doc.at("reports").size() == 4);
    CHECK(doc.at("reports")[1].at("outcome") == "control_failed_as_designed");

    // A check that throws is reported as a failure, not propagated.
    const Scenario bad = parse_scenario(R"({"name": "v", "geometry": "halfline", "mu": 0.75,
        "datum": {"kind": "gaussian_bump"}, "checks": [{"name": "energy_conservation", "times": [0]}]})");
    const auto ob = ScenarioRunner(bad).verify();
    REQUIRE(ob.size() == 1);
    CHECK_FALSE(ob[0].effective_pass());
    CHECK_THAT(ob[0].report.notes, ContainsSubstring("error:"));
}

TEST_CASE("bundled scenarios parse", "[io][scenario]") {
    std::size_t n = 0;
    for (const auto& entry : fs::directory_iterator(KGADS_SCENARIOS)) {
        if (entry.path().extension() != ".json") continue;
        ++n;
        INFO(entry.path().string());
        CHECK_NOTHROW(load_scenario(entry.path()));
    }
    CHECK(n >= 8);
    CHECK_THROWS_WITH(load_scenario(fs::path(KGADS_TEST_DATA) / "invalid_mu.json"), ContainsSubstring("−1/4 < μ"));
}
