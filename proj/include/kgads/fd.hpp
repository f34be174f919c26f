#pragma once

// Leapfrog finite-difference oracle for d_t^2 Phi = d_z^2 Phi - (mu/z^2) Phi + (transverse part).
//
// Nodes are staggered, z_j = (j - 1/2) h_z, so z = 0 is never a node and an odd
// ghost value Phi_0 = -Phi_1 imposes the Dirichlet behaviour at the horizon. The
// Robin condition Phi'(1) + (3/2) Phi(1) = 0 at z = 1 = J h_z closes with
//     Phi_{J+1} = Phi_J (1 - 3h/4) / (1 + 3h/4).
// Radial runs evolve chi = r Phi on staggered r nodes with an odd ghost at r = 0.
// The discrete energy |(Phi^{n+1} - Phi^n)/dt|^2 + <Phi^{n+1}, K Phi^n> is conserved
// exactly by the scheme (K the symmetric spatial operator).

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "kgads/errors.hpp"
#include "kgads/field.hpp"
#include "kgads/parallel.hpp"
#include "kgads/params.hpp"
#include "kgads/quadrature.hpp"
#include "kgads/verify/report.hpp"

namespace kgads {

enum class RightBoundary { none, robin_3_2 };

struct FDConfig {
    double h_z = 0.01;
    std::optional<double> h_r;
    double dt = 0.005;
    int steps = 1;
    RightBoundary bc_right = RightBoundary::none;
    int snapshot_every = 0;  // 0: final state only
};

// Largest stable time step: the Courant bound 0.9 h / sqrt(d) and the bound
// 0.9 h / sqrt(d + max(mu, 0)) from the potential at the first node.
inline double fd_max_dt(const FDConfig& c, const ModelParams& p) {
    const double h = c.h_r ? std::min(c.h_z, *c.h_r) : c.h_z;
    const double d = c.h_r ? 2.0 : 1.0;
    return 0.9 * h / std::sqrt(d + std::max(p.mu, 0.0));
}

inline void validate_fd_config(const FDConfig& c, const ModelParams& p) {
    if (!(c.h_z > 0.0) || (c.h_r && !(*c.h_r > 0.0))) throw PreconditionError("fd: spacings must be positive");
    if (!(c.dt > 0.0) || c.steps < 1) throw PreconditionError("fd: dt must be positive and steps at least 1");
    const double h = c.h_r ? std::min(c.h_z, *c.h_r) : c.h_z;
    const double d = c.h_r ? 2.0 : 1.0;
    if (c.dt > 0.9 * h / std::sqrt(d) * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "fd: CFL violation, dt = " << c.dt << " exceeds 0.9 h / sqrt(d) = " << 0.9 * h / std::sqrt(d);
        throw PreconditionError(os.str());
    }
    if (c.dt > fd_max_dt(c, p) * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "fd: dt = " << c.dt << " exceeds the potential-aware bound " << fd_max_dt(c, p);
        throw PreconditionError(os.str());
    }
}

struct FDRun {
    std::vector<FieldState> snapshots;
    std::vector<double> energy_times;  // t^{n+1/2}
    std::vector<double> energies;
};

namespace detail {

inline bool staggered(const QuadratureGrid& g, double h) {
    if (g.size() == 0) return false;
    for (std::size_t j = 0; j < g.size(); ++j)
        if (std::abs(g.nodes[j] - (double(j) + 0.5) * h) > 1e-9 * h) return false;
    return true;
}

class FDOperator {
public:
    FDOperator(const ModelParams& p, const FDConfig& c, std::size_t nr, std::size_t nz, double k)
        : nr_(nr), nz_(nz), hz_(c.h_z), hr_(c.h_r.value_or(0.0)), radial_(c.h_r.has_value()), k2_(k * k) {
        pot_.resize(nz);
        for (std::size_t j = 0; j < nz; ++j) {
            const double z = (double(j) + 0.5) * hz_;
            pot_[j] = p.mu / (z * z);
        }
        robin_ = c.bc_right == RightBoundary::robin_3_2 ? (1.0 - 0.75 * hz_) / (1.0 + 0.75 * hz_) : 0.0;
    }

    // out = -K u (row-major, index i * nz + j).
    void apply(const std::vector<double>& u, std::vector<double>& out) const {
        const double iz = 1.0 / (hz_ * hz_);
        const double ir = radial_ ? 1.0 / (hr_ * hr_) : 0.0;
        for (std::size_t i = 0; i < nr_; ++i) {
            const double* row = &u[i * nz_];
            double* o = &out[i * nz_];
            for (std::size_t j = 0; j < nz_; ++j) {
                const double left = j == 0 ? -row[0] : row[j - 1];
                const double right = j + 1 == nz_ ? robin_ * row[j] : row[j + 1];
                o[j] = (left - 2.0 * row[j] + right) * iz - (pot_[j] + k2_) * row[j];
            }
            if (radial_) {
                for (std::size_t j = 0; j < nz_; ++j) {
                    const double down = i == 0 ? -u[j] : u[(i - 1) * nz_ + j];
                    const double up = i + 1 == nr_ ? 0.0 : u[(i + 1) * nz_ + j];
                    o[j] += (down - 2.0 * u[i * nz_ + j] + up) * ir;
                }
            }
        }
    }

    double dot(const std::vector<double>& a, const std::vector<double>& b) const {
        std::vector<double> t(a.size());
        for (std::size_t n = 0; n < a.size(); ++n) t[n] = a[n] * b[n];
        const double cell = hz_ * (radial_ ? 4.0 * std::numbers::pi * hr_ : 1.0);
        return cell * pairwise_sum(t);
    }

private:
    std::size_t nr_, nz_;
    double hz_, hr_;
    bool radial_;
    double k2_;
    double robin_ = 0.0;
    std::vector<double> pot_;
};

}  // namespace detail

// Leapfrog evolution of state0 (sampled on staggered grids matching config).
inline FDRun fd_evolve(const FieldState& state0, const ModelParams& params, const FDConfig& config) {
    validate_fd_config(config, params);
    validate_state(state0);
    if (!detail::staggered(state0.z_grid, config.h_z)) throw PreconditionError("fd: z grid must be staggered with spacing h_z");
    if (state0.radial() != config.h_r.has_value()) throw PreconditionError("fd: radial data require h_r and vice versa");
    if (state0.radial() && !detail::staggered(*state0.r_grid, *config.h_r)) throw PreconditionError("fd: r grid must be staggered with spacing h_r");
    if (config.bc_right == RightBoundary::robin_3_2 && std::abs(state0.z_grid.size() * config.h_z - 1.0) > 1e-9)
        throw PreconditionError("fd: the Robin boundary requires the z grid to end at z = 1");
    const std::size_t nr = state0.radial() ? state0.r_grid->size() : 1;
    const std::size_t nz = state0.z_grid.size();
    const detail::FDOperator K(params, config, nr, nz, state0.transverse_k);
    const double dt = config.dt;
    // chi = r Phi for radial runs.
    auto to_vec = [&](const Matrix& m) {
        std::vector<double> v(nr * nz);
        for (std::size_t i = 0; i < nr; ++i) {
            const double r = state0.radial() ? state0.r_grid->nodes[i] : 1.0;
            for (std::size_t j = 0; j < nz; ++j) v[i * nz + j] = r * m(Eigen::Index(i), Eigen::Index(j));
        }
        return v;
    };
    auto to_mat = [&](const std::vector<double>& v) {
        Matrix m(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nz));
        for (std::size_t i = 0; i < nr; ++i) {
            const double r = state0.radial() ? state0.r_grid->nodes[i] : 1.0;
            for (std::size_t j = 0; j < nz; ++j) m(Eigen::Index(i), Eigen::Index(j)) = v[i * nz + j] / r;
        }
        return m;
    };
    std::vector<double> prev = to_vec(state0.phi), vel = to_vec(state0.dphi_dt), acc(nr * nz), cur(nr * nz), next(nr * nz);
    K.apply(prev, acc);
    for (std::size_t n = 0; n < cur.size(); ++n) cur[n] = prev[n] + dt * vel[n] + 0.5 * dt * dt * acc[n];

    FDRun run;
    auto record_energy = [&](const std::vector<double>& a, const std::vector<double>& b, double t_mid) {
        std::vector<double> d(a.size());
        for (std::size_t n = 0; n < a.size(); ++n) d[n] = (b[n] - a[n]) / dt;
        std::vector<double> kb(a.size());
        K.apply(a, kb);
        run.energy_times.push_back(t_mid);
        run.energies.push_back(K.dot(d, d) - K.dot(b, kb));
    };
    auto snapshot = [&](const std::vector<double>& before, const std::vector<double>& now, const std::vector<double>& after, double t) {
        FieldState s;
        s.t = t;
        s.r_grid = state0.r_grid;
        s.z_grid = state0.z_grid;
        s.transverse_k = state0.transverse_k;
        s.phi = to_mat(now);
        std::vector<double> v(now.size());
        for (std::size_t n = 0; n < v.size(); ++n) v[n] = (after[n] - before[n]) / (2.0 * dt);
        s.dphi_dt = to_mat(v);
        run.snapshots.push_back(std::move(s));
    };
    record_energy(prev, cur, 0.5 * dt);
    if (config.snapshot_every > 0) {
        FieldState s0 = state0;
        run.snapshots.push_back(s0);
    }
    for (int step = 1; step <= config.steps; ++step) {
        K.apply(cur, acc);
        for (std::size_t n = 0; n < cur.size(); ++n) next[n] = 2.0 * cur[n] - prev[n] + dt * dt * acc[n];
        if (step % 64 == 0 || step == config.steps) {
            for (double x : next)
                if (!std::isfinite(x)) {
                    std::ostringstream os;
                    os << "fd: non-finite value at step " << step << " (t = " << step * dt << ")";
                    throw ConvergenceError(os.str());
                }
        }
        const bool snap = step == config.steps || (config.snapshot_every > 0 && step % config.snapshot_every == 0);
        if (snap) snapshot(prev, cur, next, step * dt);
        record_energy(cur, next, (step + 0.5) * dt);
        prev.swap(cur);
        cur.swap(next);
    }
    return run;
}

// Staggered grid of spacing h on (0, end].
inline QuadratureGrid staggered_grid(double end, double h) {
    return midpoint_grid(end, static_cast<std::size_t>(std::llround(end / h)));
}

// Averages pairs of fine staggered values onto the coarse staggered nodes.
inline Matrix restrict_pairs(const Matrix& fine, bool rows_too) {
    const Eigen::Index nr = rows_too ? fine.rows() / 2 : fine.rows();
    Matrix c(nr, fine.cols() / 2);
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j) {
            double s = fine(rows_too ? 2 * i : i, 2 * j) + fine(rows_too ? 2 * i : i, 2 * j + 1);
            double n = 2.0;
            if (rows_too) {
                s += fine(2 * i + 1, 2 * j) + fine(2 * i + 1, 2 * j + 1);
                n = 4.0;
            }
            c(i, j) = s / n;
        }
    return c;
}

// A finite-difference test problem: initial data on a staggered z grid (and r grid
// for radial runs), evolved to t_end.
struct FDProblem {
    ModelParams params;
    RightBoundary bc_right = RightBoundary::none;
    double z_end = 1.0;
    double r_end = 0.0;  // > 0 for radial runs
    double t_end = 1.0;
    double h0 = 0.02;
    double courant = 0.4;  // dt = courant * h
    std::function<FieldState(const std::optional<QuadratureGrid>&, const QuadratureGrid&)> initial;
};

inline Matrix fd_solve(const FDProblem& pb, double h, double dt) {
    FDConfig c;
    c.h_z = h;
    if (pb.r_end > 0.0) c.h_r = h;
    c.steps = std::max(1, static_cast<int>(std::llround(pb.t_end / dt)));
    c.dt = pb.t_end / c.steps;
    c.bc_right = pb.bc_right;
    std::optional<QuadratureGrid> rg;
    if (pb.r_end > 0.0) rg = staggered_grid(pb.r_end, h);
    const FieldState s0 = pb.initial(rg, staggered_grid(pb.z_end, h));
    return fd_evolve(s0, pb.params, c).snapshots.back().phi;
}

enum class RefinementKind { space_time, time_only };

// Observed order from successive differences: spacings h0 / 2^l (time step scaled with
// h) or, for time_only, dt0 / 2^l on the finest spatial grid. Passes when the last
// observed order lies in [1.7, 2.3]; `informational` marks rough data whose order is
// reported without being held to the band.
inline VerificationReport convergence_study(const FDProblem& pb, int refinements, RefinementKind kind = RefinementKind::space_time,
                                            bool informational = false) {
    if (refinements < 2) throw PreconditionError("convergence_study: at least two refinements are required");
    const bool radial = pb.r_end > 0.0;
    std::vector<Matrix> sol;
    for (int l = 0; l <= refinements; ++l) {
        if (kind == RefinementKind::space_time) {
            const double h = pb.h0 / double(1 << l);
            sol.push_back(fd_solve(pb, h, pb.courant * h));
        } else {
            const double h = pb.h0;
            sol.push_back(fd_solve(pb, h, pb.courant * h / double(1 << l)));
        }
    }
    std::vector<double> diff;
    for (int l = 0; l < refinements; ++l) {
        const Matrix fine = kind == RefinementKind::space_time ? restrict_pairs(sol[l + 1], radial) : sol[l + 1];
        const Matrix d = fine - sol[l];
        diff.push_back(d.norm() / std::max(sol[l].norm(), 1e-300));
    }
    VerificationReport rep{kind == RefinementKind::space_time ? "fd_convergence_space" : "fd_convergence_time"};
    rep.tolerance = 0.3;
    double order = 0.0;
    for (std::size_t l = 0; l < diff.size(); ++l) rep.measure("difference_" + std::to_string(l), diff[l]);
    for (std::size_t l = 1; l < diff.size(); ++l) {
        order = std::log2(diff[l - 1] / diff[l]);
        rep.measure("order_" + std::to_string(l), order);
    }
    rep.measure("observed_order", order);
    rep.informational = informational;
    rep.passed = informational || (order >= 1.7 && order <= 2.3);
    if (informational) rep.notes = "rough data: order reported, not held to the second-order band";
    return rep.finalize();
}

}  // namespace kgads
