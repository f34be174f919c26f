#pragma once

// Continuous mode tower on the half-line z > 0.
//
// Radial transverse data are reduced through chi = r Phi, which obeys the same
// equation on the quarter plane with chi(0) = 0; the transverse transform is the
// unitary sine transform chi^(k) = sqrt(2/pi) int sin(kr) chi(r) dr. Since
// int |Phi|^2 d^3x = 4 pi int |chi|^2 dr, every radial energy carries a factor 4 pi.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "kgads/bessel.hpp"
#include "kgads/errors.hpp"
#include "kgads/field.hpp"
#include "kgads/linalg.hpp"
#include "kgads/params.hpp"
#include "kgads/quadrature.hpp"

namespace kgads {

struct TailReport {
    double position_tail = 0.0;  // relative mass deficit for Phi_0
    double velocity_tail = 0.0;  // relative mass deficit for Phi_1
    double budget = 1e-8;
};

// Transverse discretisation: a sine-transform grid for radial data, or one fixed
// wavenumber for x-independent profiles.
struct Transverse {
    std::optional<QuadratureGrid> k_grid;
    double k_fixed = 0.0;

    static Transverse independent(double k = 0.0) { return {std::nullopt, k}; }
    static Transverse radial(QuadratureGrid g) { return {std::move(g), 0.0}; }
    bool is_radial() const { return k_grid.has_value(); }
    std::vector<double> nodes() const { return is_radial() ? k_grid->nodes : std::vector<double>{k_fixed}; }
    std::vector<double> weights() const { return is_radial() ? k_grid->weights : std::vector<double>{1.0}; }
};

struct ContinuousTower {
    ModelParams params;
    Transverse transverse;
    QuadratureGrid m_grid;
    Matrix a;  // (k, m)
    Matrix b;
    double z_reach = std::numeric_limits<double>::infinity();  // max z + |t| resolved by the m grid
    double r_reach = std::numeric_limits<double>::infinity();  // max r + |t| resolved by the k grid
    TailReport tails;

    double transverse_norm() const { return transverse.is_radial() ? 4.0 * std::numbers::pi : 1.0; }
};

// Panel width that keeps one oscillation of frequency `freq` within a 16-node panel.
inline double resolving_width(double freq, double cap = 0.5) { return std::min(cap, 2.0 * std::numbers::pi / std::max(freq, 1e-300)); }

// Spectral grid on (0, cutoff] resolving synthesis out to `reach` = max(coordinate + |t|).
inline QuadratureGrid spectral_grid(double cutoff, double reach, std::size_t per_panel = 16) {
    return composite_gauss_legendre(cutoff, resolving_width(reach), per_panel);
}

// Data grid on (0, extent] resolving products of modes up to `cutoff`.
inline QuadratureGrid data_grid(double extent, double cutoff, std::size_t per_panel = 16) {
    return composite_gauss_legendre(extent, std::min(0.5, std::numbers::pi / cutoff), per_panel);
}

inline Matrix sine_kernel(const std::vector<double>& rows, const std::vector<double>& cols, const std::vector<double>& col_weights) {
    const double c = std::sqrt(2.0 / std::numbers::pi);
    return tabulate(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()),
                    [&](Eigen::Index i, Eigen::Index j) { return c * std::sin(rows[i] * cols[j]) * col_weights[j]; });
}

// K(i, j) = w_j sqrt(x_i y_j) J_order(x_i y_j).
inline Matrix weighted_hankel_kernel(double order, const std::vector<double>& rows, const std::vector<double>& cols,
                                     const std::vector<double>& col_weights) {
    return tabulate(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()), [&](Eigen::Index i, Eigen::Index j) {
        const double s = rows[i] * cols[j];
        return col_weights[j] * std::sqrt(s) * bessel_j(order, s);
    });
}

namespace detail {

inline double relative_deficit(double grid_mass, double spec_mass) {
    if (!(grid_mass > 1e-300)) return 0.0;
    return std::max(0.0, 1.0 - spec_mass / grid_mass);
}

inline double spectral_mass(const Matrix& c, const std::vector<double>& wk, const std::vector<double>& wm) {
    Matrix t(c.rows(), c.cols());
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j) t(i, j) = wk[i] * wm[j] * c(i, j) * c(i, j);
    return pairwise_sum(t);
}

// Mass of chi = r Phi (radial) or Phi (independent) with the grid weights.
inline double grid_mass(const FieldState& s, const Matrix& f) {
    Matrix t(f.rows(), f.cols());
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        const double rw = s.radial() ? s.r_grid->weights[i] * s.r_grid->nodes[i] * s.r_grid->nodes[i] : 1.0;
        for (Eigen::Index j = 0; j < f.cols(); ++j) t(i, j) = rw * s.z_grid.weights[j] * f(i, j) * f(i, j);
    }
    return pairwise_sum(t);
}

// Applies the transverse analysis (sine transform of r f) and the z analysis kernel
// zk (modes x z nodes, weights included).
inline Matrix analyse(const FieldState& s, const Matrix& f, const Transverse& tr, const Matrix& zk) {
    if (!s.radial()) return gemm(f, zk.transpose());
    Matrix chi = f;
    for (Eigen::Index i = 0; i < chi.rows(); ++i) chi.row(i) *= s.r_grid->nodes[i];
    const Matrix sk = sine_kernel(tr.k_grid->nodes, s.r_grid->nodes, s.r_grid->weights);
    const Matrix zt = zk.transpose();
    // Cheaper association order first.
    const double c1 = double(sk.rows()) * sk.cols() * chi.cols() + double(sk.rows()) * zt.rows() * zt.cols();
    const double c2 = double(chi.rows()) * chi.cols() * zt.cols() + double(sk.rows()) * sk.cols() * zt.cols();
    return c1 <= c2 ? gemm(gemm(sk, chi), zt) : gemm(sk, gemm(chi, zt));
}

inline void check_transverse_match(const FieldState& s, const Transverse& tr) {
    if (s.radial() != tr.is_radial()) throw PreconditionError("transverse representation of data and tower differ");
    if (s.radial()) {
        const Eigen::Index last = s.phi.rows() - 1;
        const double peak = std::max(s.phi.cwiseAbs().maxCoeff(), s.dphi_dt.cwiseAbs().maxCoeff());
        const double edge = std::max(s.phi.row(last).cwiseAbs().maxCoeff(), s.dphi_dt.row(last).cwiseAbs().maxCoeff());
        if (peak > 0.0 && edge > 1e-8 * peak) throw PreconditionError("radial data must vanish at the largest r node");
    }
}

inline void enforce_tails(const TailReport& t, const char* what) {
    if (t.position_tail > t.budget || t.velocity_tail > t.budget) {
        std::ostringstream os;
        os << what << ": spectral tail exceeds budget " << t.budget << " (position tail " << t.position_tail << ", velocity tail "
           << t.velocity_tail << ")";
        throw TailError(os.str());
    }
}

}  // namespace detail

// Projects initial data onto the continuous tower. `z_reach` / `r_reach` record the
// largest coordinate-plus-time the spectral grids resolve (infinite if unknown).
inline ContinuousTower decompose(const FieldState& state0, const ModelParams& params, const QuadratureGrid& m_grid,
                                 const Transverse& transverse, double tail_budget = 1e-8,
                                 double z_reach = std::numeric_limits<double>::infinity(),
                                 double r_reach = std::numeric_limits<double>::infinity()) {
    if (state0.t != 0.0) throw PreconditionError("decompose: state must be at t = 0");
    validate_state(state0);
    validate_grid(m_grid, false);
    detail::check_transverse_match(state0, transverse);
    ContinuousTower tw;
    tw.params = params;
    tw.transverse = transverse;
    tw.m_grid = m_grid;
    tw.z_reach = z_reach;
    tw.r_reach = r_reach;
    const Matrix zk = weighted_hankel_kernel(params.lambda_index, m_grid.nodes, state0.z_grid.nodes, state0.z_grid.weights);
    tw.a = detail::analyse(state0, state0.phi, transverse, zk);
    tw.b = detail::analyse(state0, state0.dphi_dt, transverse, zk);
    const auto wk = transverse.weights();
    tw.tails.budget = tail_budget;
    tw.tails.position_tail = detail::relative_deficit(detail::grid_mass(state0, state0.phi), detail::spectral_mass(tw.a, wk, m_grid.weights));
    tw.tails.velocity_tail =
        detail::relative_deficit(detail::grid_mass(state0, state0.dphi_dt), detail::spectral_mass(tw.b, wk, m_grid.weights));
    detail::enforce_tails(tw.tails, "decompose");
    return tw;
}

// Mode values and velocities at time t, shape (k, m).
template <class Tower>
std::pair<Matrix, Matrix> evolve_coefficients(const Tower& tw, const std::vector<double>& masses, double t) {
    const auto ks = tw.transverse.nodes();
    Matrix c(tw.a.rows(), tw.a.cols());
    Matrix v(tw.a.rows(), tw.a.cols());
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j) {
            const double w = std::hypot(ks[i], masses[j]);
            const auto [x, y] = kg_mode_evolve(w, tw.a(i, j), tw.b(i, j), t);
            c(i, j) = x;
            v(i, j) = y;
        }
    return {c, v};
}

struct TargetGrids {
    std::optional<QuadratureGrid> r_grid;
    QuadratureGrid z_grid;
};

// Synthesis from (k, mode) coefficients onto fixed target grids. The z kernel rows
// are target nodes and its columns are modes (quadrature weights included).
class Synthesizer {
public:
    Synthesizer(const Transverse& tr, TargetGrids grids, Matrix z_kernel, double transverse_k)
        : grids_(std::move(grids)), zk_t_(z_kernel.transpose()), transverse_k_(transverse_k) {
        if (tr.is_radial() != grids_.r_grid.has_value()) throw PreconditionError("target grids do not match transverse representation");
        if (tr.is_radial()) sk_ = sine_kernel(grids_.r_grid->nodes, tr.k_grid->nodes, tr.k_grid->weights);
    }

    // Field values on the targets from coefficient matrix c (k, mode).
    Matrix apply(const Matrix& c) const {
        if (!sk_) return gemm(c, zk_t_);
        const Matrix& s = *sk_;
        const double c1 = double(c.rows()) * c.cols() * zk_t_.cols() + double(s.rows()) * s.cols() * zk_t_.cols();
        const double c2 = double(s.rows()) * s.cols() * c.cols() + double(s.rows()) * c.cols() * zk_t_.cols();
        Matrix chi = c1 <= c2 ? gemm(s, gemm(c, zk_t_)) : gemm(gemm(s, c), zk_t_);
        for (Eigen::Index i = 0; i < chi.rows(); ++i) chi.row(i) /= grids_.r_grid->nodes[i];
        return chi;
    }

    // Synthesis restricted to the first nr r targets and the first nz z targets.
    Matrix apply_leading(const Matrix& c, Eigen::Index nr, Eigen::Index nz) const {
        const auto zk = zk_t_.leftCols(nz);
        if (!sk_) return gemm(c, zk);
        const auto s = sk_->topRows(nr);
        const double c1 = double(c.rows()) * c.cols() * nz + double(nr) * c.rows() * nz;
        const double c2 = double(nr) * c.rows() * c.cols() + double(nr) * c.cols() * nz;
        Matrix chi = c1 <= c2 ? gemm(s, gemm(c, zk)) : gemm(gemm(s, c), zk);
        for (Eigen::Index i = 0; i < nr; ++i) chi.row(i) /= grids_.r_grid->nodes[i];
        return chi;
    }

    FieldState state(double t, const Matrix& c, const Matrix& v) const {
        FieldState s;
        s.t = t;
        s.r_grid = grids_.r_grid;
        s.z_grid = grids_.z_grid;
        s.phi = apply(c);
        s.dphi_dt = apply(v);
        s.transverse_k = transverse_k_;
        return s;
    }

    const TargetGrids& grids() const { return grids_; }

private:
    TargetGrids grids_;
    Matrix zk_t_;
    std::optional<Matrix> sk_;
    double transverse_k_;
};

namespace detail {
inline void check_reach(double reach, double last_node, double t, const char* what) {
    const double need = last_node + std::abs(t);
    if (need > reach * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << what << ": target coordinate plus time " << need << " exceeds the resolved reach " << reach << " of the spectral grid";
        throw TailError(os.str());
    }
}
}  // namespace detail

// Field synthesis for a continuous tower. With `weighted` set, the synthesised
// quantity is z^{-lambda-1/2} Phi through the regular kernel m^{lambda+1/2} (mz)^{-lambda} J_lambda(mz).
class HalflineSynthesizer {
public:
    HalflineSynthesizer(const ContinuousTower& tw, TargetGrids grids, bool weighted = false)
        : tw_(&tw), synth_(tw.transverse, grids, make_kernel(tw, grids.z_grid, weighted), tw.transverse.k_fixed) {
        if (grids.r_grid && tw.r_reach < std::numeric_limits<double>::infinity())
            if (grids.r_grid->nodes.back() > tw.r_reach) throw TailError("target r grid exceeds the resolved transverse reach");
    }

    FieldState at(double t) const {
        check(t, rows(), cols());
        const auto [c, v] = evolve_coefficients(*tw_, tw_->m_grid.nodes, t);
        return synth_.state(t, c, v);
    }

    Matrix field_only(double t) const {
        check(t, rows(), cols());
        return synth_.apply(evolve_coefficients(*tw_, tw_->m_grid.nodes, t).first);
    }

    // Field on the first nr r targets and nz z targets only.
    Matrix field_leading(double t, Eigen::Index nr, Eigen::Index nz) const {
        check(t, nr, nz);
        return synth_.apply_leading(evolve_coefficients(*tw_, tw_->m_grid.nodes, t).first, nr, nz);
    }

    const TargetGrids& grids() const { return synth_.grids(); }

private:
    Eigen::Index rows() const { return synth_.grids().r_grid ? static_cast<Eigen::Index>(synth_.grids().r_grid->size()) : 1; }
    Eigen::Index cols() const { return static_cast<Eigen::Index>(synth_.grids().z_grid.size()); }
    void check(double t, Eigen::Index nr, Eigen::Index nz) const {
        detail::check_reach(tw_->z_reach, synth_.grids().z_grid.nodes[nz - 1], t, "reconstruct");
        if (synth_.grids().r_grid) detail::check_reach(tw_->r_reach, synth_.grids().r_grid->nodes[nr - 1], t, "reconstruct");
    }
    static Matrix make_kernel(const ContinuousTower& tw, const QuadratureGrid& z, bool weighted) {
        const double lam = tw.params.lambda_index;
        const auto& m = tw.m_grid.nodes;
        const auto& w = tw.m_grid.weights;
        if (!weighted) return weighted_hankel_kernel(lam, z.nodes, m, w);
        return tabulate(static_cast<Eigen::Index>(z.size()), static_cast<Eigen::Index>(m.size()), [&](Eigen::Index i, Eigen::Index j) {
            return w[j] * std::pow(m[j], lam + 0.5) * bessel_j_scaled(lam, m[j] * z.nodes[i]);
        });
    }

    const ContinuousTower* tw_;
    Synthesizer synth_;
};

inline FieldState reconstruct(const ContinuousTower& tw, double t, const TargetGrids& grids) {
    return HalflineSynthesizer(tw, grids).at(t);
}

inline EnergyBreakdown spectral_energy(const ContinuousTower& tw, double t) {
    const auto [c, v] = evolve_coefficients(tw, tw.m_grid.nodes, t);
    const auto ks = tw.transverse.nodes();
    const auto wk = tw.transverse.weights();
    const auto& m = tw.m_grid.nodes;
    const auto& wm = tw.m_grid.weights;
    Matrix kin(c.rows(), c.cols()), pt(c.rows(), c.cols()), pz(c.rows(), c.cols());
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j) {
            const double w = wk[i] * wm[j];
            kin(i, j) = w * v(i, j) * v(i, j);
            pt(i, j) = w * ks[i] * ks[i] * c(i, j) * c(i, j);
            pz(i, j) = w * m[j] * m[j] * c(i, j) * c(i, j);
        }
    const double n = tw.transverse_norm();
    return make_breakdown(n * pairwise_sum(kin), n * pairwise_sum(pt), n * pairwise_sum(pz));
}

}  // namespace kgads
