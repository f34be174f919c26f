#pragma once

// Discrete mode tower on 0 < z < 1 with u'(1) + (3/2) u(1) = 0.
//
// Eigenfunctions u_n(z) = C_n sqrt(l_n z) J_lambda(l_n z) with g(l_n) = 0,
// g(x) = 2 J_lambda(x) + x J'_lambda(x), and
// C_n^2 = 2 l_n / ((4 + l_n^2 - lambda^2) J_lambda(l_n)^2).

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "kgads/bessel.hpp"
#include "kgads/data.hpp"
#include "kgads/errors.hpp"
#include "kgads/field.hpp"
#include "kgads/halfline.hpp"
#include "kgads/params.hpp"
#include "kgads/plan.hpp"
#include "kgads/quadrature.hpp"
#include "kgads/roots.hpp"

namespace kgads {

struct BraneSpectrum {
    ModelParams params;
    std::vector<double> eigenvalues;
    std::vector<double> norm_constants;
    std::vector<double> robin_residuals;
    double gram_deviation = 0.0;

    std::size_t count() const { return eigenvalues.size(); }
};

// Gauss grid on (0, 1] resolving the most oscillatory of the first `count` modes; narrow
// panels keep the z^{lambda+1/2} behaviour at the origin integrable to 1e-9 for small lambda.
inline QuadratureGrid brane_grid(double top_eigenvalue, std::size_t per_panel = 16) {
    return composite_gauss_legendre(1.0, std::min(0.0625, std::numbers::pi / (4.0 * top_eigenvalue)), per_panel);
}

inline double eval_mode(const BraneSpectrum& s, std::size_t n, double z) {
    if (n >= s.count()) throw DomainError("eval_mode: mode index out of range");
    if (!(z > 0.0 && z <= 1.0)) throw DomainError("eval_mode: z must lie in (0, 1]");
    const double x = s.eigenvalues[n] * z;
    return s.norm_constants[n] * std::sqrt(x) * bessel_j(s.params.lambda_index, x);
}

// u_n(z) / z^{lambda+1/2}, regular at z = 0.
inline double eval_mode_weighted(const BraneSpectrum& s, std::size_t n, double z) {
    const double lam = s.params.lambda_index;
    const double l = s.eigenvalues[n];
    return s.norm_constants[n] * std::pow(l, lam + 0.5) * bessel_j_scaled(lam, l * z);
}

inline double eval_mode_deriv(const BraneSpectrum& s, std::size_t n, double z) {
    const double lam = s.params.lambda_index;
    const double l = s.eigenvalues[n];
    const double x = l * z;
    return s.norm_constants[n] * l * (0.5 / std::sqrt(x) * bessel_j(lam, x) + std::sqrt(x) * bessel_j_deriv(lam, x));
}

// Row n holds w_j u_n(z_j).
inline Matrix mode_analysis_kernel(const BraneSpectrum& s, const QuadratureGrid& z) {
    return tabulate(static_cast<Eigen::Index>(s.count()), static_cast<Eigen::Index>(z.size()),
                    [&](Eigen::Index n, Eigen::Index j) { return z.weights[j] * eval_mode(s, n, z.nodes[j]); });
}

inline BraneSpectrum brane_spectrum(const ModelParams& params, int count) {
    BraneSpectrum s;
    s.params = params;
    const double lam = params.lambda_index;
    s.eigenvalues = robin_eigenvalues(lam, count);
    for (double l : s.eigenvalues) {
        const double j = bessel_j(lam, l);
        const double den = 4.0 + l * l - lam * lam;
        if (!(den > 0.0) || j == 0.0) throw ConvergenceError("brane_spectrum: degenerate normalisation");
        s.norm_constants.push_back(std::sqrt(2.0 * l / (den * j * j)));
        const double res = robin_condition(lam, l);
        s.robin_residuals.push_back(res);
        if (!(std::abs(res) < 1e-11)) {
            std::ostringstream os;
            os << "brane_spectrum: Robin residual " << res << " at eigenvalue " << l;
            throw ConvergenceError(os.str());
        }
    }
    const QuadratureGrid g = brane_grid(s.eigenvalues.back());
    Matrix u = tabulate(count, static_cast<Eigen::Index>(g.size()), [&](Eigen::Index n, Eigen::Index j) {
        return std::sqrt(g.weights[j]) * eval_mode(s, n, g.nodes[j]);
    });
    const Matrix gram = gemm(u, u.transpose());
    s.gram_deviation = (gram - Matrix::Identity(count, count)).cwiseAbs().maxCoeff();
    if (!(s.gram_deviation < 1e-8)) {
        std::ostringstream os;
        os << "brane_spectrum: orthonormality deviation " << s.gram_deviation;
        throw ConvergenceError(os.str());
    }
    return s;
}

struct BraneTower {
    BraneSpectrum spectrum;
    Transverse transverse;
    Matrix a;  // (k, n)
    Matrix b;
    double r_reach = std::numeric_limits<double>::infinity();
    TailReport tails;

    double transverse_norm() const { return transverse.is_radial() ? 4.0 * std::numbers::pi : 1.0; }
};

inline BraneTower brane_decompose(const FieldState& state0, const BraneSpectrum& spec, const Transverse& transverse,
                                  double tail_budget = 1e-8, double r_reach = std::numeric_limits<double>::infinity()) {
    if (state0.t != 0.0) throw PreconditionError("brane_decompose: state must be at t = 0");
    validate_state(state0);
    if (state0.z_grid.nodes.back() > 1.0) throw PreconditionError("brane_decompose: z grid must lie in (0, 1]");
    detail::check_transverse_match(state0, transverse);
    BraneTower tw;
    tw.spectrum = spec;
    tw.transverse = transverse;
    tw.r_reach = r_reach;
    const Matrix uk = mode_analysis_kernel(spec, state0.z_grid);
    tw.a = detail::analyse(state0, state0.phi, transverse, uk);
    tw.b = detail::analyse(state0, state0.dphi_dt, transverse, uk);
    const auto wk = transverse.weights();
    const std::vector<double> ones(spec.count(), 1.0);
    tw.tails.budget = tail_budget;
    tw.tails.position_tail = detail::relative_deficit(detail::grid_mass(state0, state0.phi), detail::spectral_mass(tw.a, wk, ones));
    tw.tails.velocity_tail = detail::relative_deficit(detail::grid_mass(state0, state0.dphi_dt), detail::spectral_mass(tw.b, wk, ones));
    detail::enforce_tails(tw.tails, "brane_decompose");
    return tw;
}

class BraneSynthesizer {
public:
    BraneSynthesizer(const BraneTower& tw, TargetGrids grids, bool weighted = false)
        : tw_(&tw), synth_(tw.transverse, grids, make_kernel(tw, grids.z_grid, weighted), tw.transverse.k_fixed) {
        if (grids.z_grid.nodes.back() > 1.0) throw PreconditionError("brane synthesis: z targets must lie in (0, 1]");
    }

    FieldState at(double t) const {
        check(t);
        const auto [c, v] = evolve_coefficients(*tw_, tw_->spectrum.eigenvalues, t);
        return synth_.state(t, c, v);
    }

    Matrix field_only(double t) const {
        check(t);
        return synth_.apply(evolve_coefficients(*tw_, tw_->spectrum.eigenvalues, t).first);
    }

    Matrix field_leading(double t, Eigen::Index nr, Eigen::Index nz) const {
        if (synth_.grids().r_grid) detail::check_reach(tw_->r_reach, synth_.grids().r_grid->nodes[nr - 1], t, "brane reconstruct");
        return synth_.apply_leading(evolve_coefficients(*tw_, tw_->spectrum.eigenvalues, t).first, nr, nz);
    }

    const TargetGrids& grids() const { return synth_.grids(); }

private:
    void check(double t) const {
        if (synth_.grids().r_grid) detail::check_reach(tw_->r_reach, synth_.grids().r_grid->nodes.back(), t, "brane reconstruct");
    }
    static Matrix make_kernel(const BraneTower& tw, const QuadratureGrid& z, bool weighted) {
        const auto& s = tw.spectrum;
        return tabulate(static_cast<Eigen::Index>(z.size()), static_cast<Eigen::Index>(s.count()), [&](Eigen::Index j, Eigen::Index n) {
            return weighted ? eval_mode_weighted(s, n, z.nodes[j]) : eval_mode(s, n, z.nodes[j]);
        });
    }

    const BraneTower* tw_;
    Synthesizer synth_;
};

inline FieldState brane_evolve_reconstruct(const BraneTower& tw, double t, const TargetGrids& grids) {
    return BraneSynthesizer(tw, grids).at(t);
}

struct BraneInvariants {
    EnergyBreakdown strong;  // sum |d_t phi|^2 + (k^2 + l_n^2)|phi|^2
    double weak = 0.0;       // sum |phi|^2 + |d_t phi|^2 / (k^2 + l_n^2)
};

inline BraneInvariants brane_spectral_invariants(const BraneTower& tw, double t) {
    const auto& l = tw.spectrum.eigenvalues;
    const auto [c, v] = evolve_coefficients(tw, l, t);
    const auto ks = tw.transverse.nodes();
    const auto wk = tw.transverse.weights();
    Matrix kin(c.rows(), c.cols()), pt(c.rows(), c.cols()), pz(c.rows(), c.cols()), weak(c.rows(), c.cols());
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index n = 0; n < c.cols(); ++n) {
            const double k2 = ks[i] * ks[i];
            const double l2 = l[n] * l[n];
            kin(i, n) = wk[i] * v(i, n) * v(i, n);
            pt(i, n) = wk[i] * k2 * c(i, n) * c(i, n);
            pz(i, n) = wk[i] * l2 * c(i, n) * c(i, n);
            weak(i, n) = wk[i] * (c(i, n) * c(i, n) + v(i, n) * v(i, n) / (k2 + l2));
        }
    const double norm = tw.transverse_norm();
    return {make_breakdown(norm * pairwise_sum(kin), norm * pairwise_sum(pt), norm * pairwise_sum(pz)), norm * pairwise_sum(weak)};
}

// Smallest mode count whose Parseval tail for the sampled data is below the budget.
inline int brane_mode_count(const FieldState& state0, const ModelParams& p, double budget = 1e-8, int start = 8, int limit = 512) {
    auto row_weight = [&](Eigen::Index i) {
        return state0.radial() ? state0.r_grid->weights[i] * state0.r_grid->nodes[i] * state0.r_grid->nodes[i] : 1.0;
    };
    double ga = 0.0, gb = 0.0;
    for (Eigen::Index i = 0; i < state0.phi.rows(); ++i)
        for (Eigen::Index j = 0; j < state0.phi.cols(); ++j) {
            const double w = row_weight(i) * state0.z_grid.weights[j];
            ga += w * state0.phi(i, j) * state0.phi(i, j);
            gb += w * state0.dphi_dt(i, j) * state0.dphi_dt(i, j);
        }
    for (int n = start; n <= limit; n *= 2) {
        const BraneSpectrum s = brane_spectrum(p, n);
        const Matrix uk = mode_analysis_kernel(s, state0.z_grid);
        const Matrix a = gemm(state0.phi, uk.transpose());
        const Matrix b = gemm(state0.dphi_dt, uk.transpose());
        double sa = 0.0, sb = 0.0;
        for (int m = 0; m < n; ++m) {
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                sa += row_weight(i) * a(i, m) * a(i, m);
                sb += row_weight(i) * b(i, m) * b(i, m);
            }
            if (detail::relative_deficit(ga, sa) < budget && detail::relative_deficit(gb, sb) < budget) return m + 1;
        }
    }
    throw TailError("brane_mode_count: mode tail does not reach the budget within the mode limit");
}

// Samples a datum on (0, 1]; pure modes use the given spectrum.
inline FieldState sample_brane_datum(const Datum& d, const BraneSpectrum& spec, const std::optional<QuadratureGrid>& r_grid,
                                     const QuadratureGrid& z_grid) {
    if (d.kind != DatumKind::pure_mode) return sample_datum(d, spec.params, r_grid, z_grid);
    if (d.mode < 0 || static_cast<std::size_t>(d.mode) >= spec.count()) throw DomainError("pure_mode: mode index out of range");
    FieldState s;
    s.r_grid = r_grid;
    s.z_grid = z_grid;
    const Eigen::Index nr = r_grid ? static_cast<Eigen::Index>(r_grid->size()) : 1;
    s.phi.resize(nr, static_cast<Eigen::Index>(z_grid.size()));
    s.dphi_dt = Matrix::Zero(s.phi.rows(), s.phi.cols());
    for (Eigen::Index i = 0; i < nr; ++i) {
        const double q = r_grid ? r_grid->nodes[i] / d.r_width : 0.0;
        for (Eigen::Index j = 0; j < s.phi.cols(); ++j)
            s.phi(i, j) = d.amplitude * std::exp(-0.5 * q * q) * eval_mode(spec, d.mode, z_grid.nodes[j]);
    }
    if (d.in_velocity) std::swap(s.phi, s.dphi_dt);
    return s;
}

struct BranePlan {
    int mode_count = 0;
    QuadratureGrid z_data;
    std::optional<QuadratureGrid> r_data;
    std::optional<QuadratureGrid> k_grid;
    double r_extent = 0.0;
    double r_reach = std::numeric_limits<double>::infinity();
};

inline BraneTower build_brane_tower(const Datum& d, const ModelParams& p, double t_max, bool radial, const GridOptions& o = {},
                                    double amplitude_scale = 1.0, BranePlan* plan_out = nullptr) {
    BranePlan pl;
    if (radial) {
        const double kc = o.k_cutoff > 0 ? o.k_cutoff : datum_k_cutoff(d);
        pl.r_extent = datum_r_extent(d);
        pl.r_reach = pl.r_extent + 2.0 * t_max;
        pl.r_data = data_grid(pl.r_extent, kc, o.nodes_per_panel);
        pl.k_grid = composite_gauss_legendre(kc, k_panel_width(o, kc, pl.r_reach), o.nodes_per_panel);
    }
    if (d.kind == DatumKind::pure_mode) {
        pl.mode_count = std::max(d.mode + 1, 4);
    } else {
        const double mc = datum_mass_cutoff(d, p);
        const QuadratureGrid probe = brane_grid(std::max(mc, 10.0), o.nodes_per_panel);
        pl.mode_count = brane_mode_count(sample_datum(d, p, std::nullopt, probe), p, o.tail_budget);
    }
    const BraneSpectrum spec = brane_spectrum(p, pl.mode_count);
    const double mc = d.kind == DatumKind::pure_mode ? 0.0 : datum_mass_cutoff(d, p);
    pl.z_data = brane_grid(std::max(spec.eigenvalues.back(), mc), o.nodes_per_panel);
    FieldState s0 = sample_brane_datum(d, spec, pl.r_data, pl.z_data);
    s0.phi *= amplitude_scale;
    s0.dphi_dt *= amplitude_scale;
    const Transverse tr = radial ? Transverse::radial(*pl.k_grid) : Transverse::independent();
    if (plan_out) *plan_out = pl;
    return brane_decompose(s0, spec, tr, o.tail_budget, pl.r_reach);
}

}  // namespace kgads
