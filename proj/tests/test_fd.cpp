#include <catch_amalgamated.hpp>

#include <cmath>

#include "kgads/brane.hpp"
#include "kgads/fd.hpp"
#include "kgads/plan.hpp"

using namespace kgads;

namespace {

double rel_l2(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

Datum bump() {
    Datum d;
    d.z_center = 3.0;
    d.width = 0.5;
    return d;
}

FDConfig config_for(double h, double t_end) {
    FDConfig c;
    c.h_z = h;
    c.steps = static_cast<int>(std::llround(t_end / (0.4 * h)));
    c.dt = t_end / c.steps;
    return c;
}

// Half-line Gaussian at t = 2 on (0, 8]: FD field and the spectral reference.
std::pair<FDRun, Matrix> halfline_pair(double h) {
    const auto p = make_params(0.75);
    const auto tw = build_halfline_tower(bump(), p, 4.0, false);
    const auto zg = staggered_grid(8.0, h);
    const auto run = fd_evolve(sample_datum(bump(), p, std::nullopt, zg), p, config_for(h, 2.0));
    return {run, reconstruct(tw, 2.0, {std::nullopt, zg}).phi};
}

double brane_frequency(const BraneSpectrum& s, double h, double T) {
    const auto zg = staggered_grid(1.0, h);
    Datum d;
    d.kind = DatumKind::pure_mode;
    const FieldState s0 = sample_brane_datum(d, s, std::nullopt, zg);
    FDConfig c = config_for(h, T);
    c.bc_right = RightBoundary::robin_3_2;
    const auto run = fd_evolve(s0, s.params, c);
    const Matrix& phi = run.snapshots.back().phi;
    double c0 = 0.0, cT = 0.0;
    for (Eigen::Index j = 0; j < phi.cols(); ++j) {
        c0 += s0.phi(0, j) * s0.phi(0, j);
        cT += phi(0, j) * s0.phi(0, j);
    }
    return std::acos(cT / c0) / T;
}

}  // namespace

TEST_CASE("FD: zero data stays zero", "[fd]") {
    const auto p = make_params(0.75);
    FieldState s = sample_datum(bump(), p, std::nullopt, staggered_grid(8.0, 0.05));
    s.phi.setZero();
    FDConfig c = config_for(0.05, 1.0);
    c.snapshot_every = 5;
    const auto run = fd_evolve(s, p, c);
    CHECK(run.snapshots.size() > 2);
    for (const auto& st : run.snapshots) {
        CHECK(st.phi.cwiseAbs().maxCoeff() == 0.0);
        CHECK(st.dphi_dt.cwiseAbs().maxCoeff() == 0.0);
    }
    for (double e : run.energies) CHECK(e == 0.0);
}

TEST_CASE("FD: configuration preconditions", "[fd]") {
    const auto p = make_params(0.75);
    const auto s = sample_datum(bump(), p, std::nullopt, staggered_grid(8.0, 0.05));
    FDConfig c = config_for(0.05, 1.0);
    c.dt = 0.95 * 0.05;
    CHECK_THROWS_AS(fd_evolve(s, p, c), PreconditionError);
    c.dt = 0.85 * 0.05;  // inside the Courant bound, outside the potential-aware bound for mu = 3/4
    CHECK_THROWS_AS(fd_evolve(s, p, c), PreconditionError);
    CHECK(fd_max_dt(c, p) == Catch::Approx(0.9 * 0.05 / std::sqrt(1.75)));
    c = config_for(0.05, 1.0);
    c.h_z = 0.04;
    CHECK_THROWS_AS(fd_evolve(s, p, c), PreconditionError);
    c = config_for(0.05, 1.0);
    c.bc_right = RightBoundary::robin_3_2;
    CHECK_THROWS_AS(fd_evolve(s, p, c), PreconditionError);
    c = config_for(0.05, 1.0);
    c.h_r = 0.05;
    CHECK_THROWS_AS(fd_evolve(s, p, c), PreconditionError);
    c = config_for(0.05, 1.0);
    c.steps = 0;
    CHECK_THROWS_AS(fd_evolve(s, p, c), PreconditionError);
}

TEST_CASE("FD: brane eigenmode frequency converges at second order", "[fd][brane]") {
    const auto s = brane_spectrum(make_params(3.75), 4);
    const double l0 = s.eigenvalues[0];
    const double T = 0.8;
    const double e1 = std::abs(brane_frequency(s, 1.0 / 50, T) - l0);
    const double e2 = std::abs(brane_frequency(s, 1.0 / 100, T) - l0);
    const double e3 = std::abs(brane_frequency(s, 1.0 / 200, T) - l0);
    INFO("errors " << e1 << " " << e2 << " " << e3);
    CHECK(e1 < 1e-2 * l0);
    CHECK(e2 / e3 > 3.0);
    CHECK(e2 / e3 < 5.0);
    CHECK(e1 / e2 > 3.0);
}

TEST_CASE("FD: half-line agreement with the spectral solution", "[fd][halfline]") {
    const auto [run, ref] = halfline_pair(0.005);
    CHECK(rel_l2(run.snapshots.back().phi, ref) < 1e-3);
    double drift = 0.0;
    for (double e : run.energies) drift = std::max(drift, std::abs(e / run.energies.front() - 1.0));
    CHECK(drift < 1e-6);
    CHECK(run.snapshots.back().t == Catch::Approx(2.0));
}

TEST_CASE("FD: agreement tightens under refinement", "[fd][halfline]") {
    double prev = 1.0;
    for (double h : {0.02, 0.01, 0.005}) {
        const auto [run, ref] = halfline_pair(h);
        const double d = rel_l2(run.snapshots.back().phi, ref);
        INFO("h " << h << " difference " << d);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("FD: convergence orders", "[fd]") {
    FDProblem pb;
    pb.params = make_params(0.75);
    pb.z_end = 8.0;
    pb.t_end = 2.0;
    pb.h0 = 0.04;
    Datum d = bump();
    pb.initial = [&](const std::optional<QuadratureGrid>& r, const QuadratureGrid& z) { return sample_datum(d, pb.params, r, z); };
    const auto space = convergence_study(pb, 3);
    CHECK(space.passed);
    CHECK(space.measured.at("observed_order") == Catch::Approx(2.0).margin(0.3));
    const auto time = convergence_study(pb, 3, RefinementKind::time_only);
    CHECK(time.passed);
    CHECK(time.measured.at("observed_order") == Catch::Approx(2.0).margin(0.3));
    CHECK_THROWS_AS(convergence_study(pb, 1), PreconditionError);

    d.step_profile = true;
    const auto rough = convergence_study(pb, 3, RefinementKind::space_time, true);
    CHECK(rough.informational);
    CHECK(rough.passed);
    CHECK(rough.measured.at("observed_order") < 1.7);
    CHECK_FALSE(convergence_study(pb, 3).passed);

    d.step_profile = false;
    d.r_width = 0.5;
    pb.r_end = 4.0;
    pb.h0 = 0.08;
    const auto radial = convergence_study(pb, 2);
    CHECK(radial.passed);
}
