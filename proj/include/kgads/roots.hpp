#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "kgads/bessel.hpp"
#include "kgads/errors.hpp"

namespace kgads {

namespace detail {

// Refines a root inside [lo, hi] (f changes sign) with Newton steps, falling back to
// bisection whenever a step leaves the bracket or fails to shrink the residual.
inline double refine_root(const std::function<double(double)>& f, const std::function<double(double)>& df, double lo,
                          double hi, double seed, int budget = 200) {
    double flo = f(lo);
    double x = (seed > lo && seed < hi) ? seed : 0.5 * (lo + hi);
    for (int it = 0; it < budget; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx < 0) == (flo < 0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        const double d = df(x);
        double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 2e-16 * std::abs(x) || hi - lo <= 4e-16 * std::abs(x)) return next;
        x = next;
    }
    throw ConvergenceError("root refinement exceeded iteration budget near x=" + std::to_string(x));
}

// Scans [start, ...) in fixed steps for sign changes and refines `count` roots.
inline std::vector<double> scan_roots(const std::function<double(double)>& f, const std::function<double(double)>& df,
                                      const std::function<double(int)>& seed, double start, double step, int count) {
    std::vector<double> roots;
    double a = start;
    double fa = f(a);
    const int max_steps = 100000 + 10 * count;
    for (int s = 0; s < max_steps && static_cast<int>(roots.size()) < count; ++s) {
        const double b = a + step;
        const double fb = f(b);
        if (fb == 0.0) {
            roots.push_back(b);
            a = b + 1e-9;
            fa = f(a);
            continue;
        }
        if ((fa < 0) != (fb < 0)) roots.push_back(refine_root(f, df, a, b, seed(static_cast<int>(roots.size()) + 1)));
        a = b;
        fa = fb;
    }
    if (static_cast<int>(roots.size()) < count) throw ConvergenceError("root scan did not bracket the requested roots");
    return roots;
}

inline void check_count(int count) {
    if (count < 1) throw DomainError("root count must be >= 1");
}

}  // namespace detail

// McMahon's leading-order estimate of the k-th positive zero of J_nu.
inline double mcmahon_seed(double nu, int k) {
    const double beta = (k + 0.5 * nu - 0.25) * std::numbers::pi;
    return beta - (4.0 * nu * nu - 1.0) / (8.0 * beta);
}

inline std::vector<double> bessel_zeros(double nu, int count) {
    detail::check_count(count);
    if (!(nu >= 0.0)) throw DomainError("bessel_zeros: order must be >= 0");
    auto f = [nu](double x) { return bessel_j(nu, x); };
    auto df = [nu](double x) { return bessel_j_deriv(nu, x); };
    auto seed = [nu](int k) { return mcmahon_seed(nu, k); };
    // No zero of J_nu lies in (0, nu]; the first zero of J_0 is above 2.
    return detail::scan_roots(f, df, seed, std::max(nu, 0.5), 0.25, count);
}

// Robin eigenvalue condition g(x) = 2 J_lambda(x) + x J'_lambda(x).
inline double robin_condition(double lambda, double x) { return 2.0 * bessel_j(lambda, x) + x * bessel_j_deriv(lambda, x); }

// g'(x) = 3 J'(x) + x J''(x) with x^2 J'' = -x J' - (x^2 - lambda^2) J.
inline double robin_condition_deriv(double lambda, double x) {
    const double j = bessel_j(lambda, x);
    const double jp = bessel_j_deriv(lambda, x);
    return 2.0 * jp - (x * x - lambda * lambda) / x * j;
}

inline std::vector<double> robin_eigenvalues(double lambda, int count) {
    detail::check_count(count);
    if (!(lambda > 0.0)) throw DomainError("robin_eigenvalues: order must be > 0");
    auto f = [lambda](double x) { return robin_condition(lambda, x); };
    auto df = [lambda](double x) { return robin_condition_deriv(lambda, x); };
    auto seed = [lambda](int n) { return std::numbers::pi * (n + 0.5 * lambda - 0.75); };
    // g > 0 on (0, lambda]: x J'/J decreases from lambda and first reaches -2 beyond j'_{lambda,1} > lambda.
    return detail::scan_roots(f, df, seed, std::max(0.5 * lambda, 1e-3), 0.25, count);
}

// Side-by-side comparison of the Robin-derived roots and the zeros of J_{lambda-1}
// (the alternative printed condition). Defined only for lambda >= 1.
struct EigenConditionDiagnostic {
    std::vector<double> robin_roots;
    std::vector<double> shifted_order_zeros;
    double max_abs_difference = 0.0;
};

inline EigenConditionDiagnostic eigen_condition_diagnostic(double lambda, int count) {
    if (!(lambda >= 1.0)) throw DomainError("eigen_condition_diagnostic: requires lambda >= 1");
    EigenConditionDiagnostic d;
    d.robin_roots = robin_eigenvalues(lambda, count);
    d.shifted_order_zeros = bessel_zeros(lambda - 1.0, count);
    for (int i = 0; i < count; ++i)
        d.max_abs_difference = std::max(d.max_abs_difference, std::abs(d.robin_roots[i] - d.shifted_order_zeros[i]));
    return d;
}

}  // namespace kgads
