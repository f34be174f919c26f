#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <utility>

#include "kgads/errors.hpp"
#include "kgads/linalg.hpp"
#include "kgads/quadrature.hpp"

namespace kgads {

// Sampled field and velocity. Arrays have one row per r node (a single row for
// x-independent profiles) and one column per z node. An x-independent profile
// carries its transverse wavenumber so that the transverse gradient energy can
// be accounted for.
struct FieldState {
    double t = 0.0;
    std::optional<QuadratureGrid> r_grid;
    QuadratureGrid z_grid;
    Matrix phi;
    Matrix dphi_dt;
    double transverse_k = 0.0;

    bool radial() const { return r_grid.has_value(); }
    Eigen::Index rows() const { return radial() ? static_cast<Eigen::Index>(r_grid->size()) : 1; }
};

inline void validate_state(const FieldState& s) {
    const auto nz = static_cast<Eigen::Index>(s.z_grid.size());
    if (s.phi.rows() != s.rows() || s.phi.cols() != nz || s.dphi_dt.rows() != s.rows() || s.dphi_dt.cols() != nz)
        throw ShapeError("field state: array shapes do not match grid sizes");
    if (!s.phi.allFinite() || !s.dphi_dt.allFinite()) throw DomainError("field state: non-finite values");
}

struct EnergyBreakdown {
    double kinetic = 0.0;
    double potential_transverse = 0.0;
    double potential_z = 0.0;
    double boundary = 0.0;
    double total = 0.0;

    double potential() const { return potential_transverse + potential_z + boundary; }
};

inline EnergyBreakdown make_breakdown(double kin, double pt, double pz, double bd = 0.0) {
    return {kin, pt, pz, bd, kin + pt + pz + bd};
}

// Closed-form solution of v'' + omega^2 v = 0 with v(0) = a, v'(0) = b.
template <class T>
std::pair<T, T> kg_mode_evolve(double omega, const T& a, const T& b, double t) {
    if (!(omega >= 0.0)) throw DomainError("kg_mode_evolve: omega must be >= 0");
    if (omega == 0.0) return {a + t * b, b};
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    return {c * a + (s / omega) * b, -omega * s * a + c * b};
}

}  // namespace kgads
