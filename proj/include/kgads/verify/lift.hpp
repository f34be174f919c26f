#pragma once

// Free-wave residual of the lifted field Psi = z^{-(N-1)/2} Phi, N = nu + 2, which solves
// the wave equation radially in N variables (z = |z|) and, for radial data, radially in x.

#include <cmath>
#include <functional>
#include <vector>

#include "kgads/errors.hpp"
#include "kgads/halfline.hpp"
#include "kgads/quadrature.hpp"
#include "kgads/verify/report.hpp"

namespace kgads {

namespace detail {
inline double uniform_spacing(const QuadratureGrid& g) {
    if (g.paneled() || g.size() < 3) throw PreconditionError("lift_residual: requires uniform midpoint grids");
    const double h = g.nodes[1] - g.nodes[0];
    for (std::size_t i = 2; i < g.size(); ++i)
        if (std::abs(g.nodes[i] - g.nodes[i - 1] - h) > 1e-9 * h) throw PreconditionError("lift_residual: grid spacing is not uniform");
    return h;
}
}  // namespace detail

// ||d_t^2 Psi - Delta Psi|| / ||d_t^2 Psi|| on interior nodes by centered differences,
// from the fields at t - ht, t, t + ht sampled on uniform grids.
inline double lift_residual(const Matrix& prev, const Matrix& cur, const Matrix& next, const TargetGrids& g, double ht, int N) {
    const double hz = detail::uniform_spacing(g.z_grid);
    const double hr = g.r_grid ? detail::uniform_spacing(*g.r_grid) : 0.0;
    const auto nz = cur.cols();
    const auto nr = cur.rows();
    std::vector<double> lift(static_cast<std::size_t>(nz));
    for (Eigen::Index j = 0; j < nz; ++j) lift[j] = std::pow(g.z_grid.nodes[j], -0.5 * (N - 1));
    auto psi = [&](const Matrix& m, Eigen::Index i, Eigen::Index j) { return lift[j] * m(i, j); };
    std::vector<double> num, den;
    const Eigen::Index i0 = g.r_grid ? 1 : 0;
    const Eigen::Index i1 = g.r_grid ? nr - 1 : nr;
    for (Eigen::Index i = i0; i < i1; ++i)
        for (Eigen::Index j = 1; j + 1 < nz; ++j) {
            const double z = g.z_grid.nodes[j];
            const double c = psi(cur, i, j);
            const double tt = (psi(next, i, j) - 2.0 * c + psi(prev, i, j)) / (ht * ht);
            const double zp = psi(cur, i, j + 1), zm = psi(cur, i, j - 1);
            double lap = (zp - 2.0 * c + zm) / (hz * hz) + (N - 1) / z * (zp - zm) / (2.0 * hz);
            if (g.r_grid) {
                const double r = g.r_grid->nodes[i];
                const double rp = psi(cur, i + 1, j), rm = psi(cur, i - 1, j);
                lap += (rp - 2.0 * c + rm) / (hr * hr) + 2.0 / r * (rp - rm) / (2.0 * hr);
            }
            num.push_back((tt - lap) * (tt - lap));
            den.push_back(tt * tt);
        }
    return std::sqrt(pairwise_sum(num) / std::max(pairwise_sum(den), 1e-300));
}

// Residuals at spacings h, h/2, h/4, ... (ht = h) on (0, z_end] (and (0, r_end] for
// radial towers). Passes when the coarsest residual is below tolerance and every
// refinement at least halves it.
inline VerificationReport check_lift(const ContinuousTower& tw, double t, double h, double z_end, double r_end = 0.0,
                                     int refinements = 2, double tolerance = 5e-3) {
    if (!tw.params.nu) throw PreconditionError("lift_residual: requires mu = (nu^2 - 1)/4 with integer nu");
    const int N = *tw.params.nu + 2;
    VerificationReport rep{"lift_residual"};
    rep.tolerance = tolerance;
    std::vector<double> res;
    for (int l = 0; l <= refinements; ++l) {
        const double hl = h / double(1 << l);
        TargetGrids g;
        g.z_grid = midpoint_grid(z_end, static_cast<std::size_t>(std::llround(z_end / hl)));
        if (tw.transverse.is_radial()) g.r_grid = midpoint_grid(r_end, static_cast<std::size_t>(std::llround(r_end / hl)));
        const HalflineSynthesizer synth(tw, g);
        res.push_back(lift_residual(synth.field_only(t - hl), synth.field_only(t), synth.field_only(t + hl), g, hl, N));
        rep.measure("residual_h" + std::to_string(l), res.back());
    }
    bool halving = true;
    for (std::size_t l = 1; l < res.size(); ++l) {
        const double order = std::log2(res[l - 1] / res[l]);
        rep.measure("order_" + std::to_string(l), order);
        if (!(res[l] <= 0.5 * res[l - 1])) halving = false;
    }
    rep.measure("N", N);
    rep.passed = res.front() < tolerance && halving;
    return rep.finalize();
}

}  // namespace kgads
