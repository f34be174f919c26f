#pragma once

#include <cmath>
#include <vector>

#include "kgads/bessel.hpp"
#include "kgads/errors.hpp"
#include "kgads/linalg.hpp"
#include "kgads/quadrature.hpp"

namespace kgads {

// Coefficients (H u)(m) on the nodes of a mass grid; the grid weights serve the
// inverse integral over m.
struct HankelSpectrum {
    double order = 0.0;
    QuadratureGrid m_grid;
    std::vector<double> coeffs;
};

// K(i, j) = sqrt(m_i z_j) J_order(m_i z_j).
inline Matrix hankel_kernel(double order, const std::vector<double>& m, const std::vector<double>& z) {
    return tabulate(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(z.size()), [&](Eigen::Index i, Eigen::Index j) {
        const double s = m[i] * z[j];
        return std::sqrt(s) * bessel_j(order, s);
    });
}

inline HankelSpectrum hankel_forward(double order, const std::vector<double>& samples, const QuadratureGrid& z_grid,
                                     const QuadratureGrid& m_grid) {
    if (!(order > 0.0)) throw DomainError("hankel_forward: order must be > 0");
    if (samples.size() != z_grid.size()) throw ShapeError("hankel_forward: samples and grid lengths differ");
    validate_grid(m_grid, false);
    Vector wu(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t j = 0; j < samples.size(); ++j) wu[static_cast<Eigen::Index>(j)] = z_grid.weights[j] * samples[j];
    const Matrix k = hankel_kernel(order, m_grid.nodes, z_grid.nodes);
    const Vector c = k * wu;
    return {order, m_grid, std::vector<double>(c.data(), c.data() + c.size())};
}

inline std::vector<double> hankel_inverse(const HankelSpectrum& spec, const QuadratureGrid& z_grid) {
    if (spec.coeffs.size() != spec.m_grid.size()) throw ShapeError("hankel_inverse: coefficient and grid lengths differ");
    Vector wv(static_cast<Eigen::Index>(spec.coeffs.size()));
    for (std::size_t i = 0; i < spec.coeffs.size(); ++i) wv[static_cast<Eigen::Index>(i)] = spec.m_grid.weights[i] * spec.coeffs[i];
    const Matrix k = hankel_kernel(spec.order, z_grid.nodes, spec.m_grid.nodes);
    const Vector u = k * wv;
    return std::vector<double>(u.data(), u.data() + u.size());
}

// Discrete L^2 norm squared with the grid weights.
inline double weighted_mass(const std::vector<double>& f, const QuadratureGrid& g) {
    std::vector<double> t(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) t[i] = g.weights[i] * f[i] * f[i];
    return pairwise_sum(t);
}

}  // namespace kgads
