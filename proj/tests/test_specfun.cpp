#include <catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "kgads/bessel.hpp"
#include "kgads/hankel.hpp"
#include "kgads/halfline.hpp"
#include "kgads/io/csv.hpp"
#include "kgads/linalg.hpp"
#include "kgads/parallel.hpp"
#include "kgads/quadrature.hpp"
#include "kgads/roots.hpp"

using namespace kgads;
using Catch::Approx;

namespace {

std::vector<double> sample(const QuadratureGrid& g, const std::function<double(double)>& f) {
    std::vector<double> v;
    for (double z : g.nodes) v.push_back(f(z));
    return v;
}

double amplitude_scale(double nu, double x, double v) {
    return x > nu + 1.0 ? std::max(std::abs(v), std::sqrt(2.0 / (std::numbers::pi * x))) : std::abs(v);
}

}  // namespace

TEST_CASE("bessel_j special values", "[bessel]") {
    CHECK(bessel_j(0.0, 0.0) == 1.0);
    CHECK(bessel_j(2.0, 0.0) == 0.0);
    CHECK(bessel_j(0.5, std::numbers::pi / 2) == Approx(2.0 / std::numbers::pi).epsilon(1e-14));
    CHECK_THROWS_AS(bessel_j(-0.5, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(1.0, -1.0), DomainError);
}

TEST_CASE("bessel_j matches the frozen high-precision table", "[bessel][golden]") {
    const auto t = io::read_csv(std::string(KGADS_TEST_DATA) + "/bessel_j_golden.csv");
    REQUIRE(t.rows.size() > 100);
    for (const auto& r : t.rows) {
        const double nu = r[0], x = r[1], v = r[2], tol = r[3];
        INFO("order " << nu << " x " << x);
        CHECK(std::abs(bessel_j(nu, x) - v) <= tol * amplitude_scale(nu, x, v));
    }
}

TEST_CASE("bessel_j agrees with Boost on random orders and arguments", "[bessel][oracle]") {
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> order(0.0, 20.0), arg(0.0, 1000.0);
    for (int i = 0; i < 2000; ++i) {
        const double nu = order(gen), x = arg(gen);
        const double ref = boost::math::cyl_bessel_j(nu, x);
        INFO("order " << nu << " x " << x);
        CHECK(std::abs(bessel_j(nu, x) - ref) <= 1e-10 * amplitude_scale(nu, x, ref));
    }
}

TEST_CASE("bessel_j is continuous across the evaluation crossovers", "[bessel]") {
    for (double nu : {0.0, 0.5, 1.0, 2.0, 7.5, 15.0, 20.0}) {
        for (double x0 : {detail::series_limit(nu), 20.0}) {
            const double a = bessel_j(nu, x0 * (1 - 1e-12)), b = bessel_j(nu, x0 * (1 + 1e-12));
            INFO("order " << nu << " crossover " << x0);
            CHECK(std::abs(a - b) <= 1e-10 * amplitude_scale(nu, x0, a));
        }
    }
}

TEST_CASE("three-term recurrence holds on random samples", "[bessel][property]") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> order(1.0, 19.0), arg(0.1, 200.0);
    for (int i = 0; i < 500; ++i) {
        const double nu = order(gen), x = arg(gen);
        const double lhs = bessel_j(nu - 1, x) + bessel_j(nu + 1, x);
        const double rhs = 2 * nu / x * bessel_j(nu, x);
        const double scale = std::max({std::abs(bessel_j(nu - 1, x)), std::abs(bessel_j(nu + 1, x)), std::abs(rhs)});
        CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);
    }
}

TEST_CASE("bessel_j_deriv", "[bessel]") {
    CHECK(bessel_j_deriv(1.0, 1e-8) == Approx(0.5).margin(1e-6));
    CHECK(bessel_j_deriv(0.0, 2.0) == Approx(-bessel_j(1.0, 2.0)).epsilon(1e-14));
    const double h = 1e-6;
    CHECK(bessel_j_deriv(2.0, 3.0) == Approx((bessel_j(2.0, 3.0 + h) - bessel_j(2.0, 3.0 - h)) / (2 * h)).margin(1e-6));
    CHECK_THROWS_AS(bessel_j_deriv(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_j_deriv(1.0, -2.0), DomainError);
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> order(1.0, 20.0), arg(0.05, 500.0);
    for (int i = 0; i < 300; ++i) {
        const double nu = order(gen), x = arg(gen);
        const double alt = bessel_j(nu - 1, x) - nu / x * bessel_j(nu, x);
        const double scale = std::max({std::abs(alt), std::abs(bessel_j(nu - 1, x)), 1e-300});
        CHECK(std::abs(bessel_j_deriv(nu, x) - alt) <= 1e-9 * scale);
    }
}

TEST_CASE("bessel_zeros", "[roots]") {
    const auto z1 = bessel_zeros(1.0, 2);
    CHECK(z1[0] == Approx(3.8317059702).margin(1e-9));
    CHECK(z1[1] == Approx(7.0155866698).margin(1e-9));
    const auto zh = bessel_zeros(0.5, 3);
    for (int k = 0; k < 3; ++k) CHECK(zh[k] == Approx((k + 1) * std::numbers::pi).epsilon(1e-13));
    const auto a = bessel_zeros(1.0, 3), b = bessel_zeros(2.0, 3);
    CHECK(a[1] < b[1]);
    CHECK(b[1] < a[2]);
    CHECK_THROWS_AS(bessel_zeros(1.0, 0), DomainError);
}

TEST_CASE("bessel_zeros match the frozen table and Boost, with small residuals", "[roots][golden]") {
    const auto t = io::read_csv(std::string(KGADS_TEST_DATA) + "/bessel_zeros_golden.csv");
    for (const auto& r : t.rows) {
        const double nu = r[0];
        const int k = static_cast<int>(r[1]);
        const double root = bessel_zeros(nu, k).back();
        INFO("order " << nu << " index " << k);
        CHECK(std::abs(root - r[2]) <= r[3] * r[2]);
        CHECK(std::abs(bessel_j(nu, root)) < 1e-12 * std::max(1.0, std::abs(bessel_j_deriv(nu, root))));
    }
    for (int k = 1; k <= 20; ++k) CHECK(bessel_zeros(3.0, 20)[k - 1] == Approx(boost::math::cyl_bessel_j_zero(3.0, k)).epsilon(1e-12));
}

TEST_CASE("robin_eigenvalues", "[roots]") {
    const auto g = robin_eigenvalues(2.0, 2);
    CHECK(g[0] == Approx(3.8317059702).margin(1e-9));
    CHECK(g[1] == Approx(7.0155866698).margin(1e-9));
    // Root of tan x = -2x/3 on (pi/2, pi).
    const double r = robin_eigenvalues(0.5, 1)[0];
    CHECK(std::tan(r) == Approx(-2.0 * r / 3.0).epsilon(1e-10));
    CHECK(r == Approx(2.1746260287).margin(1e-9));
    const auto many = robin_eigenvalues(1.3, 52);
    CHECK(std::abs(many[51] - many[50] - std::numbers::pi) < 0.01);
    for (double lam : {0.5, 1.0, 1.118, 2.0, 3.5, 7.0})
        for (double x : robin_eigenvalues(lam, 30)) {
            CHECK(std::abs(robin_condition(lam, x)) < 1e-11);
            CHECK(std::abs(bessel_j(lam, x)) > 1e-8);
        }
    const auto d2 = eigen_condition_diagnostic(2.0, 10);
    CHECK(d2.max_abs_difference < 1e-10);
    const auto d3 = eigen_condition_diagnostic(3.0, 10);
    CHECK(d3.max_abs_difference > 0.1);
}

TEST_CASE("composite Gauss-Legendre grids", "[quadrature]") {
    const auto g = composite_gauss_legendre(7.3, 0.5);
    REQUIRE_NOTHROW(validate_grid(g));
    double s = 0.0;
    for (double w : g.weights) s += w;
    CHECK(std::abs(s - 7.3) < 1e-12 * 7.3);
    // Degree 31 polynomials are integrated exactly on each panel.
    double p = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) p += g.weights[i] * std::pow(g.nodes[i] / 7.3, 31);
    CHECK(p == Approx(7.3 / 32.0).epsilon(1e-13));
    const auto f = sample(g, [](double z) { return std::sin(3 * z); });
    const auto df = panel_derivative(g, f);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(df[i] == Approx(3 * std::cos(3 * g.nodes[i])).margin(1e-9));
    CHECK(right_end_value(g, f) == Approx(std::sin(3 * 7.3)).margin(1e-12));
    CHECK_THROWS_AS(composite_gauss_legendre(-1.0, 0.5), DomainError);
    QuadratureGrid bad = g;
    bad.weights[3] = -1.0;
    CHECK_THROWS_AS(validate_grid(bad), DomainError);
}

TEST_CASE("Hankel transform of the self-reciprocal pair", "[hankel]") {
    for (double lam : {1.0, 1.5, 2.0}) {
        const auto z = composite_gauss_legendre(12.0, 0.5);
        const auto u = sample(z, [&](double x) { return std::pow(x, lam + 0.5) * std::exp(-0.5 * x * x); });
        const auto m = composite_gauss_legendre(5.0, 0.5);
        const auto spec = hankel_forward(lam, u, z, m);
        double worst = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m.nodes[i] < 0.1) continue;
            const double ref = std::pow(m.nodes[i], lam + 0.5) * std::exp(-0.5 * m.nodes[i] * m.nodes[i]);
            worst = std::max(worst, std::abs(spec.coeffs[i] - ref) / ref);
        }
        CHECK(worst < 1e-6);
        // Adaptive quadrature oracle at a few masses.
        for (double mm : {0.3, 1.7, 4.2}) {
            auto integrand = [&](double x) { return std::sqrt(mm * x) * boost::math::cyl_bessel_j(lam, mm * x) * std::pow(x, lam + 0.5) * std::exp(-0.5 * x * x); };
            const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 12.0, 15, 1e-14);
            const double closed = std::pow(mm, lam + 0.5) * std::exp(-0.5 * mm * mm);
            CHECK(oracle == Approx(closed).epsilon(1e-10));
        }
    }
}

TEST_CASE("Hankel round trip, isometry and linearity", "[hankel][property]") {
    for (double lam : {1.0, 1.5, 2.0}) {
        const auto z = composite_gauss_legendre(12.0, 0.5);
        const auto m = composite_gauss_legendre(16.0, 0.5);
        const auto u = sample(z, [&](double x) { return std::pow(x, lam + 0.5) * std::exp(-x * x); });
        const auto spec = hankel_forward(lam, u, z, m);
        const auto back = hankel_inverse(spec, z);
        std::vector<double> d(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) d[i] = back[i] - u[i];
        CHECK(std::sqrt(weighted_mass(d, z) / weighted_mass(u, z)) < 1e-6);
        CHECK(std::abs(weighted_mass(spec.coeffs, m) / weighted_mass(u, z) - 1.0) < 1e-8);
    }
    const auto z = composite_gauss_legendre(6.0, 0.5);
    const auto m = composite_gauss_legendre(8.0, 0.5);
    std::mt19937_64 gen(3);
    std::normal_distribution<double> n01;
    std::vector<double> a(z.size()), b(z.size()), ab(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        a[i] = n01(gen);
        b[i] = n01(gen);
        ab[i] = a[i] + b[i];
    }
    const auto ha = hankel_forward(1.2, a, z, m), hb = hankel_forward(1.2, b, z, m), hab = hankel_forward(1.2, ab, z, m);
    double scale = 0.0;
    for (double c : hab.coeffs) scale = std::max(scale, std::abs(c));
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(std::abs(hab.coeffs[i] - ha.coeffs[i] - hb.coeffs[i]) <= 1e-13 * scale);
    const auto zero = hankel_forward(1.2, std::vector<double>(z.size(), 0.0), z, m);
    for (double c : zero.coeffs) CHECK(c == 0.0);
    for (double v : hankel_inverse(zero, z)) CHECK(v == 0.0);
    CHECK_THROWS_AS(hankel_forward(1.2, std::vector<double>(3, 0.0), z, m), ShapeError);
}

TEST_CASE("reductions and products are independent of the thread count", "[parallel][property]") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> n01;
    Matrix a(300, 170), b(170, 90);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = n01(gen);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = n01(gen);
    set_thread_count(1);
    const Matrix c1 = gemm(a, b);
    const double s1 = pairwise_sum(c1);
    set_thread_count(4);
    const Matrix c4 = gemm(a, b);
    const double s4 = pairwise_sum(c4);
    set_thread_count(1);
    CHECK((c1 - c4).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s1 == s4);
    CHECK((c1 - a * b).cwiseAbs().maxCoeff() < 1e-12);
}
