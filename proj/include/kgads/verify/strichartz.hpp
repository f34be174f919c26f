#pragma once

// Truncated weighted space-time norms
//     I(T) = ( int_0^T ( int |z^w Phi|^r d^3x dz )^{q/r} dt )^{1/q}
// for the three admissible families of exponents.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kgads/errors.hpp"
#include "kgads/halfline.hpp"
#include "kgads/quadrature.hpp"
#include "kgads/verify/report.hpp"

namespace kgads {

// general: 1/q + (nu+5)/r = (nu+3)/2, 1/q + (nu+4)/(2r) <= (nu+4)/4, w = (nu+1)(1/r - 1/2)
// even nu: 1/q + 5/r = 3/2,          1/q + 2/r <= 1,                 w = 1/r - 1/2
// odd nu:  1/q + 6/r = 2,            1/q + 5/(2r) <= 5/4,            w = 2/r - 1
enum class StrichartzFamily { general, even, odd };

struct StrichartzExponents {
    double q = 2.0;
    double r = 2.0;
    double weight = 0.0;
    StrichartzFamily family = StrichartzFamily::general;
};

inline std::string to_string(StrichartzFamily f) {
    switch (f) {
        case StrichartzFamily::general: return "general";
        case StrichartzFamily::even: return "even";
        case StrichartzFamily::odd: return "odd";
    }
    return "?";
}

// Validates (q, r) against one family and returns the weight exponent.
inline StrichartzExponents strichartz_exponents(int nu, double q, double r, StrichartzFamily f) {
    if (nu < 1) throw PreconditionError("strichartz: requires a positive integer nu");
    if (!(q >= 2.0) || !(r > 0.0)) throw AdmissibilityError("strichartz: requires q >= 2 and r > 0");
    const double n = nu;
    double eq = 0.0, ineq = 0.0, w = 0.0;
    switch (f) {
        case StrichartzFamily::general:
            eq = 1 / q + (n + 5) / r - (n + 3) / 2;
            ineq = 1 / q + (n + 4) / (2 * r) - (n + 4) / 4;
            w = (n + 1) * (1 / r - 0.5);
            break;
        case StrichartzFamily::even:
            if (nu % 2 != 0) throw AdmissibilityError("strichartz: the even family requires even nu");
            eq = 1 / q + 5 / r - 1.5;
            ineq = 1 / q + 2 / r - 1;
            w = 1 / r - 0.5;
            break;
        case StrichartzFamily::odd:
            if (nu % 2 == 0) throw AdmissibilityError("strichartz: the odd family requires odd nu");
            eq = 1 / q + 6 / r - 2;
            ineq = 1 / q + 2.5 / r - 1.25;
            w = 2 / r - 1;
            break;
    }
    if (std::abs(eq) > 1e-12 || ineq > 1e-12) {
        std::ostringstream os;
        os << "strichartz: (q, r) = (" << q << ", " << r << ") is not admissible in the " << to_string(f) << " family for nu = " << nu;
        throw AdmissibilityError(os.str());
    }
    return {q, r, w, f};
}

// First family (general, then the parity family) admitting (q, r).
inline StrichartzExponents admissible_exponents(int nu, double q, double r) {
    try {
        return strichartz_exponents(nu, q, r, StrichartzFamily::general);
    } catch (const AdmissibilityError&) {
        return strichartz_exponents(nu, q, r, nu % 2 == 0 ? StrichartzFamily::even : StrichartzFamily::odd);
    }
}

// Checks a requested weight against the admissible one.
inline StrichartzExponents admissible_exponents(int nu, double q, double r, double weight) {
    const auto e = admissible_exponents(nu, q, r);
    if (std::abs(e.weight - weight) > 1e-12) {
        std::ostringstream os;
        os << "strichartz: weight " << weight << " does not match the admissible weight " << e.weight;
        throw AdmissibilityError(os.str());
    }
    return e;
}

// int |z^w f|^p over the leading targets (4 pi r^2 dr dz for radial data).
inline double weighted_lp_integral(const Matrix& f, const TargetGrids& g, double w, double p) {
    const bool integer = p == std::round(p) && p >= 1.0 && p <= 8.0;
    auto power = [&](double x) {
        if (!integer) return std::pow(x, p);
        double y = x;
        for (int k = 1; k < static_cast<int>(p); ++k) y *= x;
        return y;
    };
    std::vector<double> zw(static_cast<std::size_t>(f.cols()));
    for (Eigen::Index j = 0; j < f.cols(); ++j) zw[j] = std::pow(g.z_grid.nodes[j], w);
    Matrix t(f.rows(), f.cols());
    for (Eigen::Index j = 0; j < f.cols(); ++j)
        for (Eigen::Index i = 0; i < f.rows(); ++i) {
            const double wr = g.r_grid ? 4.0 * std::numbers::pi * g.r_grid->weights[i] * g.r_grid->nodes[i] * g.r_grid->nodes[i] : 1.0;
            t(i, j) = wr * g.z_grid.weights[j] * power(zw[j] * std::abs(f(i, j)));
        }
    return pairwise_sum(t);
}

struct StrichartzProfile {
    StrichartzExponents exponents;
    std::vector<double> T;  // 1, 2, 4, ..., T_max
    std::vector<double> I;
};

// I(T) on doubling horizons T = 1, 2, 4, ..., T_max with Gauss-Legendre time nodes on
// [0, 1], [1, 2], [2, 4], .... `field_at(t, nr, nz)` returns Phi on the leading targets.
inline std::vector<StrichartzProfile> strichartz_profiles(
    const std::function<Matrix(double, Eigen::Index, Eigen::Index)>& field_at, const TargetGrids& grids,
    const std::vector<StrichartzExponents>& exps, double T_max, double r_extent, double z_extent, std::size_t nodes_per_window = 8) {
    if (!(T_max >= 1.0)) throw PreconditionError("strichartz: T_max must be at least 1");
    auto leading = [](const std::vector<double>& nodes, double bound) {
        const auto it = std::upper_bound(nodes.begin(), nodes.end(), bound);
        return static_cast<Eigen::Index>(std::max<std::ptrdiff_t>(1, it - nodes.begin()));
    };
    const GaussRule rule = gauss_legendre_rule(nodes_per_window);
    std::vector<StrichartzProfile> out(exps.size());
    std::vector<double> acc(exps.size(), 0.0);
    for (std::size_t e = 0; e < exps.size(); ++e) out[e].exponents = exps[e];
    double lo = 0.0, hi = 1.0;
    while (hi <= T_max * (1.0 + 1e-12)) {
        std::vector<std::vector<double>> terms(exps.size());
        for (std::size_t k = 0; k < rule.x.size(); ++k) {
            const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.x[k];
            const double wt = 0.5 * (hi - lo) * rule.w[k];
            const Eigen::Index nr = grids.r_grid ? leading(grids.r_grid->nodes, r_extent + t) : 1;
            const Eigen::Index nz = leading(grids.z_grid.nodes, z_extent + t);
            const Matrix f = field_at(t, nr, nz);
            for (std::size_t e = 0; e < exps.size(); ++e) {
                const double space = weighted_lp_integral(f, grids, exps[e].weight, exps[e].r);
                terms[e].push_back(wt * std::pow(space, exps[e].q / exps[e].r));
            }
        }
        for (std::size_t e = 0; e < exps.size(); ++e) {
            acc[e] += pairwise_sum(terms[e]);
            out[e].T.push_back(hi);
            out[e].I.push_back(std::pow(acc[e], 1.0 / exps[e].q));
        }
        lo = hi;
        hi *= 2.0;
    }
    return out;
}

// Saturation: I(T_last)/I(T_last / 2) - 1 < saturation_tol. Homogeneity: the profile of
// data scaled by `scale` equals scale * I at every common horizon within homogeneity_tol.
inline VerificationReport check_strichartz_bounded(const StrichartzProfile& base, const StrichartzProfile& scaled, double scale,
                                                   double saturation_tol = 0.05, double homogeneity_tol = 1e-10) {
    VerificationReport rep{"strichartz_bounded"};
    rep.tolerance = saturation_tol;
    const auto& e = base.exponents;
    rep.measure("q", e.q);
    rep.measure("r", e.r);
    rep.measure("weight", e.weight);
    for (std::size_t i = 0; i < base.T.size(); ++i) rep.measure(keyed("I", base.T[i]), base.I[i]);
    double sat = 0.0;
    if (base.I.size() >= 2) {
        const double a = base.I[base.I.size() - 2];
        const double b = base.I.back();
        sat = a > 0.0 ? b / a - 1.0 : 0.0;
        rep.measure("saturation_T", base.T[base.T.size() - 2]);
    }
    rep.measure("saturation_ratio", sat);
    double hom = 0.0;
    const std::size_t n = std::min(base.I.size(), scaled.I.size());
    for (std::size_t i = 0; i < n; ++i)
        if (base.I[i] > 0.0) hom = std::max(hom, std::abs(scaled.I[i] / (scale * base.I[i]) - 1.0));
        else hom = std::max(hom, std::abs(scaled.I[i]));
    rep.measure("homogeneity_deviation", hom);
    rep.passed = base.I.size() >= 2 && sat < saturation_tol && hom < homogeneity_tol && n > 0;
    return rep.finalize();
}

}  // namespace kgads
