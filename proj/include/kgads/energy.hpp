#pragma once

// Grid-side energies of sampled fields.
//
// The z part uses |d_z Phi + (alpha/z) Phi|^2. Writing Phi = z^{lambda+1/2} g with g
// smooth up to z = 0,
//     d_z Phi + (alpha/z) Phi = z^{lambda+1/2} g' + (lambda + 1/2 + alpha) z^{lambda-1/2} g,
// so the leading singular terms are combined analytically and only the smooth g is
// differentiated (panel-wise Lagrange differentiation on the Gauss nodes).
//
// On the brane 0 < z < 1 the alpha-form shifts part of the boundary term:
//     int |Phi'|^2 + mu |Phi|^2 / z^2 = int |Phi' + (alpha/z) Phi|^2 - alpha |Phi(1)|^2,
// so the Robin energy (3/2)|Phi(1)|^2 becomes (3/2 - alpha)|Phi(1)|^2. With alpha_-
// this coefficient is 2 + lambda > 0 for every admissible mass.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "kgads/errors.hpp"
#include "kgads/field.hpp"
#include "kgads/params.hpp"
#include "kgads/quadrature.hpp"

namespace kgads {

enum class AlphaBranch { plus, minus };

namespace detail {

inline std::vector<double> row_of(const Matrix& m, Eigen::Index i) {
    std::vector<double> v(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) v[j] = m(i, j);
    return v;
}

// (d_z + alpha/z) f on the nodes of a paneled z grid.
inline std::vector<double> alpha_derivative(const std::vector<double>& f, const QuadratureGrid& z, double lambda, double alpha) {
    const std::size_t n = f.size();
    std::vector<double> g(n), out(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = f[j] * std::pow(z.nodes[j], -lambda - 0.5);
    const auto dg = panel_derivative(z, g);
    const double c = lambda + 0.5 + alpha;
    for (std::size_t j = 0; j < n; ++j) {
        const double p = std::pow(z.nodes[j], lambda + 0.5);
        out[j] = p * dg[j] + c * p / z.nodes[j] * g[j];
    }
    return out;
}

inline EnergyBreakdown grid_energy(const FieldState& s, const ModelParams& p, double alpha, double boundary_coeff) {
    validate_state(s);
    if (!s.z_grid.paneled()) throw PreconditionError("energy: z grid must be a composite Gauss grid");
    const double lam = p.lambda_index;
    const auto nz = s.phi.cols();
    const auto nr = s.phi.rows();
    // Per-row z integrals.
    std::vector<double> kin(nr), zp(nr), tr(nr), bd(nr);
    for (Eigen::Index i = 0; i < nr; ++i) {
        const auto f = row_of(s.phi, i);
        const auto v = row_of(s.dphi_dt, i);
        const auto az = alpha_derivative(f, s.z_grid, lam, alpha);
        std::vector<double> a(nz), b(nz), c(nz);
        for (Eigen::Index j = 0; j < nz; ++j) {
            const double w = s.z_grid.weights[j];
            a[j] = w * v[j] * v[j];
            b[j] = w * az[j] * az[j];
            c[j] = w * f[j] * f[j];
        }
        kin[i] = pairwise_sum(a);
        zp[i] = pairwise_sum(b);
        tr[i] = pairwise_sum(c);
        if (boundary_coeff != 0.0) {
            const double e = right_end_value(s.z_grid, f);
            bd[i] = e * e;
        }
    }
    if (!s.radial()) {
        const double k2 = s.transverse_k * s.transverse_k;
        return make_breakdown(kin[0], k2 * tr[0], zp[0], boundary_coeff * bd[0]);
    }
    const auto& rg = *s.r_grid;
    if (!rg.paneled()) throw PreconditionError("energy: r grid must be a composite Gauss grid");
    // Transverse gradient: d_r Phi per z column.
    std::vector<double> grad(nr * nz);
    for (Eigen::Index j = 0; j < nz; ++j) {
        std::vector<double> col(nr);
        for (Eigen::Index i = 0; i < nr; ++i) col[i] = s.phi(i, j);
        const auto d = panel_derivative(rg, col);
        for (Eigen::Index i = 0; i < nr; ++i) grad[i * nz + j] = s.z_grid.weights[j] * d[i] * d[i];
    }
    std::vector<double> k(nr), t(nr), z(nr), b(nr);
    for (Eigen::Index i = 0; i < nr; ++i) {
        const double w = 4.0 * std::numbers::pi * rg.weights[i] * rg.nodes[i] * rg.nodes[i];
        k[i] = w * kin[i];
        z[i] = w * zp[i];
        b[i] = w * bd[i];
        t[i] = w * pairwise_sum(std::span<const double>(grad.data() + i * nz, nz));
    }
    return make_breakdown(pairwise_sum(k), pairwise_sum(t), pairwise_sum(z), boundary_coeff * pairwise_sum(b));
}

}  // namespace detail

// Half-line energy of a sampled state (alpha_+ form by default).
inline EnergyBreakdown energy(const FieldState& s, const ModelParams& p, AlphaBranch branch = AlphaBranch::plus) {
    return detail::grid_energy(s, p, branch == AlphaBranch::plus ? p.alpha_plus : p.alpha_minus, 0.0);
}

// Brane energy on 0 < z < 1 with the Robin boundary term, alpha_- form.
inline EnergyBreakdown brane_energy(const FieldState& s, const ModelParams& p) {
    if (std::abs(s.z_grid.domain_end - 1.0) > 1e-12) throw PreconditionError("brane_energy: z grid must cover (0, 1]");
    return detail::grid_energy(s, p, p.alpha_minus, 1.5 - p.alpha_minus);
}

}  // namespace kgads
