#pragma once

// Peak tracking of a modulated packet in a 1+1 dimensional run.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "kgads/energy.hpp"
#include "kgads/errors.hpp"
#include "kgads/halfline.hpp"
#include "kgads/verify/checks.hpp"
#include "kgads/verify/report.hpp"

namespace kgads {

struct PacketTrajectory {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> peaks;
    double v_in = std::numeric_limits<double>::quiet_NaN();
    double v_out = std::numeric_limits<double>::quiet_NaN();
    double bounce_time = std::numeric_limits<double>::quiet_NaN();
    bool bounced = false;
};

namespace detail {
// Slope and intercept of the least-squares line through (x, y).
inline std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double v = sxy / sxx;
    return {v, my - v * mx};
}
}  // namespace detail

// Tracks the envelope peak of a carrier packet with wavenumber kappa on a uniform
// z target grid. The envelope is Phi^2 + (d_t Phi / kappa)^2; the peak is refined by
// a parabola through the discrete maximum and its neighbours. Velocities are line
// fits at least `margin` away in time from the turning point; the bounce time is the
// intersection of the incoming and outgoing lines.
inline PacketTrajectory track_packet(const ContinuousTower& tw, const std::vector<double>& times, const QuadratureGrid& z_targets,
                                     double kappa, double margin = 1.0, double threshold = 1e-3) {
    if (tw.transverse.is_radial()) throw PreconditionError("track_packet: requires an x-independent run");
    if (!tw.params.nu) throw PreconditionError("track_packet: requires mu = (nu^2 - 1)/4");
    if (times.size() < 3) throw PreconditionError("track_packet: at least three times are required");
    const HalflineSynthesizer synth(tw, {std::nullopt, z_targets});
    const auto& z = z_targets.nodes;
    PacketTrajectory tr;
    double first_peak = 0.0;
    for (double t : times) {
        const FieldState s = synth.at(t);
        std::vector<double> env(z.size());
        for (std::size_t j = 0; j < z.size(); ++j) {
            const double v = s.dphi_dt(0, static_cast<Eigen::Index>(j)) / kappa;
            env[j] = s.phi(0, static_cast<Eigen::Index>(j)) * s.phi(0, static_cast<Eigen::Index>(j)) + v * v;
        }
        const std::size_t k = static_cast<std::size_t>(std::max_element(env.begin(), env.end()) - env.begin());
        if (tr.times.empty()) first_peak = env[k];
        if (!(env[k] > threshold * first_peak)) throw TrackingError("track_packet: packet dispersed below the detection threshold");
        double pos = z[k];
        if (k > 0 && k + 1 < z.size()) {
            const double a = env[k - 1], b = env[k], c = env[k + 1];
            const double den = a - 2.0 * b + c;
            if (den < 0.0) pos += 0.5 * (a - c) / den * (z[k + 1] - z[k]);
        }
        tr.times.push_back(t);
        tr.positions.push_back(pos);
        tr.peaks.push_back(env[k]);
    }
    const std::size_t turn = static_cast<std::size_t>(std::min_element(tr.positions.begin(), tr.positions.end()) - tr.positions.begin());
    const double t_turn = tr.times[turn];
    std::vector<double> ti, zi, to, zo;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        if (tr.times[i] <= t_turn - margin) {
            ti.push_back(tr.times[i]);
            zi.push_back(tr.positions[i]);
        } else if (tr.times[i] >= t_turn + margin) {
            to.push_back(tr.times[i]);
            zo.push_back(tr.positions[i]);
        }
    }
    if (ti.size() >= 2 && to.size() >= 2) {
        const auto [vi, ai] = detail::line_fit(ti, zi);
        const auto [vo, ao] = detail::line_fit(to, zo);
        tr.v_in = vi;
        tr.v_out = vo;
        tr.bounced = vi < 0.0 && vo > 0.0;
        if (tr.bounced) tr.bounce_time = (ao - ai) / (vi - vo);
    } else {
        const auto [v, a] = detail::line_fit(tr.times, tr.positions);
        (void)a;
        tr.v_out = v;
    }
    return tr;
}

struct MirrorExpectation {
    double bounce_time = 5.0;
    double bounce_tol = 0.25;
    double speed_tol = 0.05;
    double energy_tol = 1e-8;
};

// Mirror reflection: bounce time, incoming and outgoing unit speeds and energy
// conservation through the bounce (grid energies at the tracked times).
inline VerificationReport check_mirror(const ContinuousTower& tw, const PacketTrajectory& tr, const TargetGrids& energy_grids,
                                       const MirrorExpectation& ex = {}) {
    VerificationReport rep{"mirror_reflection"};
    rep.tolerance = ex.speed_tol;
    rep.measure("bounce_time", tr.bounce_time);
    rep.measure("v_in", tr.v_in);
    rep.measure("v_out", tr.v_out);
    const double mid = tr.bounced ? tr.bounce_time : tr.times[tr.times.size() / 2];
    const auto e = check_conservation(tw, {tr.times.front(), mid, tr.times.back()}, energy_grids, ex.energy_tol);
    rep.measure("energy_drift", e.measured.at("grid_drift"));
    rep.passed = tr.bounced && std::abs(tr.bounce_time - ex.bounce_time) <= ex.bounce_tol && std::abs(tr.v_out - 1.0) < ex.speed_tol &&
                 std::abs(tr.v_in + 1.0) < ex.speed_tol && e.passed;
    return rep.finalize();
}

}  // namespace kgads
