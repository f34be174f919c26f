#pragma once

// Bessel functions of the first kind J_nu(x) for real order nu >= 0 and real x >= 0.
//
// Three evaluation regions:
//   * ascending power series for small x (x <= series_limit(nu)),
//   * Hankel large-argument expansion when its remainder guard holds,
//   * Miller backward recurrence normalised by the Neumann sum
//       (x/2)^m = sum_k (m + 2k) Gamma(m + k) / k! J_{m+2k}(x),  0 <= m < 1,
//     for the band in between, where the series loses too many digits to
//     cancellation and the asymptotic expansion has not yet converged.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kgads/errors.hpp"

namespace kgads {

namespace detail {

inline void check_bessel_args(double nu, double x) {
    if (!std::isfinite(nu) || nu < 0.0) throw DomainError("bessel: order must be finite and >= 0, got " + std::to_string(nu));
    if (!std::isfinite(x) || x < 0.0) throw DomainError("bessel: argument must be finite and >= 0, got " + std::to_string(x));
}

// sum_k (-x^2/4)^k / (k! (nu+1)_k); equals Gamma(nu+1) (x/2)^{-nu} J_nu(x).
inline double series_core(double nu, double x) {
    const double q = -0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (k * (k + nu));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

inline double series_limit(double nu) { return std::max(6.0, 0.5 * nu); }

inline bool hankel_asymptotic(double nu, double x, double& out) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        const double a = std::abs(term);
        if (a == 0.0) {
            converged = true;
            break;
        }
        if (k >= 8 && a > prev) break;
        const int j = k / 2;
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0)
            p += sign * term;
        else
            q += sign * term;
        prev = a;
        if (k >= 8 && a < 1e-17) {
            converged = true;
            break;
        }
    }
    if (!converged) return false;
    const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
    out = std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
    return true;
}

inline double miller(double nu, double x) {
    const int n0 = static_cast<int>(std::floor(nu));
    const double m = nu - n0;
    int top = static_cast<int>(std::max<double>(n0, x) + 12.0 * std::cbrt(x) + 24.0);
    if (top % 2) ++top;
    double f_next = 0.0;  // f_{k+1}
    double f = 1e-30;     // f_k
    double saved = (top == n0) ? f : 0.0;
    double norm = 0.0;
    const int jtop = top / 2;
    double w = std::exp(std::lgamma(m + jtop) - std::lgamma(jtop + 1.0));  // Gamma(m+j)/j!
    int j = jtop;
    if (top >= 2) norm += (m + top) * w * f;
    for (int k = top; k >= 1; --k) {
        const double f_prev = 2.0 * (m + k) / x * f - f_next;
        f_next = f;
        f = f_prev;
        const int idx = k - 1;
        if (idx == n0) saved = f;
        if (idx >= 2 && idx % 2 == 0) {
            w *= static_cast<double>(j) / (m + j - 1.0);
            --j;
            norm += (m + idx) * w * f;
        }
        if (std::abs(f) > 1e250) {
            f *= 1e-250;
            f_next *= 1e-250;
            saved *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += std::tgamma(m + 1.0) * f;
    return saved * std::pow(0.5 * x, m) / norm;
}

}  // namespace detail

inline double bessel_j(double nu, double x) {
    detail::check_bessel_args(nu, x);
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (x <= detail::series_limit(nu)) {
        const double lead = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
        return lead * detail::series_core(nu, x);
    }
    double v = 0.0;
    if (x >= 20.0 && detail::hankel_asymptotic(nu, x, v)) return v;
    return detail::miller(nu, x);
}

// x^{-nu} J_nu(x): regular at the origin, with limit 2^{-nu}/Gamma(nu+1).
inline double bessel_j_scaled(double nu, double x) {
    detail::check_bessel_args(nu, x);
    if (x <= detail::series_limit(nu))
        return std::exp(-nu * std::log(2.0) - std::lgamma(nu + 1.0)) * detail::series_core(nu, x);
    return bessel_j(nu, x) * std::pow(x, -nu);
}

// Derivative through J'_nu = (nu/x) J_nu - J_{nu+1}, valid for every nu >= 0.
inline double bessel_j_deriv(double nu, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_j_deriv: argument must be > 0, got " + std::to_string(x));
    detail::check_bessel_args(nu, x);
    if (nu == 0.0) return -bessel_j(1.0, x);
    return nu / x * bessel_j(nu, x) - bessel_j(nu + 1.0, x);
}

}  // namespace kgads
