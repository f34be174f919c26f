#pragma once

// Initial data families and the grid planning derived from them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "kgads/errors.hpp"
#include "kgads/field.hpp"
#include "kgads/params.hpp"
#include "kgads/quadrature.hpp"

namespace kgads {

enum class DatumKind { gaussian_bump, annulus_bump, hankel_self_reciprocal, pure_mode, packet };

inline std::string to_string(DatumKind k) {
    switch (k) {
        case DatumKind::gaussian_bump: return "gaussian_bump";
        case DatumKind::annulus_bump: return "annulus_bump";
        case DatumKind::hankel_self_reciprocal: return "hankel_self_reciprocal";
        case DatumKind::pure_mode: return "pure_mode";
        case DatumKind::packet: return "packet";
    }
    return "?";
}

// gaussian_bump:  A exp(-(z - z_center)^2 / (2 width^2)) in z.
// annulus_bump:   A exp(-(r^2 + (z - 0.55 R)^2) / (2 (0.08 R)^2)), a blob inside the
//                 quarter disc r^2 + z^2 <= R^2 kept away from z = 0 (tails below 1e-6 of the peak).
// hankel_self_reciprocal: A z^{lambda+1/2} exp(-z^2 / (2 scale^2)).
// pure_mode:      brane eigenmode u_n (evaluated by the brane module).
// packet:         A exp(-(z - z0)^2 / (2 sigma^2)) cos(kappa (z - z0)), moving with speed sign(kappa).
// Radial runs multiply separable profiles by exp(-r^2 / (2 r_width^2)). Velocity data
// vanish except for packets, whose velocity selects the travelling direction.
struct Datum {
    DatumKind kind = DatumKind::gaussian_bump;
    double amplitude = 1.0;
    double z_center = 3.0;
    double width = 0.5;
    double R = 1.0;
    double scale = 1.0;
    int mode = 0;
    double z0 = 5.0;
    double kappa = -20.0;
    double sigma = 0.5;
    double r_width = 1.0;
    bool step_profile = false;  // replaces the Gaussian bump by its indicator (rough data)
    bool in_velocity = false;   // puts the profile in Phi_1 and sets Phi_0 = 0
};

namespace detail {
constexpr double kTailAmplitude = 1e-13;
// Gaussian exp(-x^2/(2 s^2)) drops below kTailAmplitude at x = s * sqrt(2 ln(1/kTailAmplitude)).
inline double gaussian_reach() { return std::sqrt(2.0 * std::log(1.0 / kTailAmplitude)); }
}  // namespace detail

inline double datum_z(const Datum& d, const ModelParams& p, double z) {
    switch (d.kind) {
        case DatumKind::gaussian_bump: {
            const double x = (z - d.z_center) / d.width;
            if (d.step_profile) return std::abs(x) <= 1.0 ? d.amplitude : 0.0;
            return d.amplitude * std::exp(-0.5 * x * x);
        }
        case DatumKind::hankel_self_reciprocal: {
            const double x = z / d.scale;
            return d.amplitude * std::pow(z, p.lambda_index + 0.5) * std::exp(-0.5 * x * x);
        }
        case DatumKind::packet: {
            const double x = z - d.z0;
            return d.amplitude * std::exp(-0.5 * x * x / (d.sigma * d.sigma)) * std::cos(d.kappa * x);
        }
        default: throw PreconditionError("datum_z: datum has no separable z profile");
    }
}

inline double datum_z_velocity(const Datum& d, const ModelParams&, double z) {
    if (d.kind != DatumKind::packet) return 0.0;
    const double x = z - d.z0;
    const double s2 = d.sigma * d.sigma;
    const double e = std::exp(-0.5 * x * x / s2);
    const double dz = d.amplitude * e * (-x / s2 * std::cos(d.kappa * x) - d.kappa * std::sin(d.kappa * x));
    return -(d.kappa >= 0 ? 1.0 : -1.0) * dz;
}

inline double datum_rz(const Datum& d, const ModelParams& p, double r, double z) {
    if (d.kind == DatumKind::annulus_bump) {
        const double s = 0.08 * d.R;
        const double dz = z - 0.55 * d.R;
        return d.amplitude * std::exp(-0.5 * (r * r + dz * dz) / (s * s));
    }
    const double q = r / d.r_width;
    return datum_z(d, p, z) * std::exp(-0.5 * q * q);
}

inline double datum_rz_velocity(const Datum& d, const ModelParams& p, double r, double z) {
    if (d.kind != DatumKind::packet) return 0.0;
    const double q = r / d.r_width;
    return datum_z_velocity(d, p, z) * std::exp(-0.5 * q * q);
}

// Largest z (resp. r) where the datum is above the tail threshold.
inline double datum_z_extent(const Datum& d, const ModelParams& p) {
    const double g = detail::gaussian_reach();
    switch (d.kind) {
        case DatumKind::gaussian_bump: return d.z_center + (d.step_profile ? 1.0 : g) * d.width;
        case DatumKind::annulus_bump: return 0.55 * d.R + g * 0.08 * d.R;
        case DatumKind::packet: return d.z0 + g * d.sigma;
        case DatumKind::hankel_self_reciprocal: {
            const double peak_z = d.scale * std::sqrt(p.lambda_index + 0.5);
            const double peak = std::abs(datum_z(d, p, peak_z));
            double z = peak_z;
            while (std::abs(datum_z(d, p, z)) > detail::kTailAmplitude * peak) z += 0.01 * d.scale;
            return z;
        }
        case DatumKind::pure_mode: return 1.0;
    }
    return 0.0;
}

inline double datum_r_extent(const Datum& d) {
    const double g = detail::gaussian_reach();
    if (d.kind == DatumKind::annulus_bump) return g * 0.08 * d.R;
    return g * d.r_width;
}

// Spectral cut-offs beyond which the transform amplitudes are below the tail threshold.
inline double datum_mass_cutoff(const Datum& d, const ModelParams& p) {
    const double g = detail::gaussian_reach();
    switch (d.kind) {
        case DatumKind::gaussian_bump: return d.step_profile ? 400.0 / d.width : g / d.width;
        case DatumKind::annulus_bump: return g / (0.08 * d.R);
        case DatumKind::packet: return std::abs(d.kappa) + g / d.sigma;
        case DatumKind::hankel_self_reciprocal: {
            Datum unit = d;
            unit.scale = 1.0;
            return datum_z_extent(unit, p) / d.scale;
        }
        case DatumKind::pure_mode: return 0.0;
    }
    return 0.0;
}

inline double datum_k_cutoff(const Datum& d) {
    const double g = detail::gaussian_reach();
    if (d.kind == DatumKind::annulus_bump) return g / (0.08 * d.R);
    return g / d.r_width;
}

// Samples a datum on the given grids (r grid optional).
inline FieldState sample_datum(const Datum& d, const ModelParams& p, const std::optional<QuadratureGrid>& r_grid,
                               const QuadratureGrid& z_grid) {
    if (d.in_velocity && d.kind == DatumKind::packet) throw PreconditionError("sample_datum: packets carry their own velocity");
    FieldState s;
    s.t = 0.0;
    s.r_grid = r_grid;
    s.z_grid = z_grid;
    const Eigen::Index nr = r_grid ? static_cast<Eigen::Index>(r_grid->size()) : 1;
    const auto nz = static_cast<Eigen::Index>(z_grid.size());
    s.phi.resize(nr, nz);
    s.dphi_dt.resize(nr, nz);
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index j = 0; j < nz; ++j) {
            const double z = z_grid.nodes[j];
            if (r_grid) {
                const double r = r_grid->nodes[i];
                s.phi(i, j) = datum_rz(d, p, r, z);
                s.dphi_dt(i, j) = datum_rz_velocity(d, p, r, z);
            } else {
                s.phi(i, j) = datum_z(d, p, z);
                s.dphi_dt(i, j) = datum_z_velocity(d, p, z);
            }
        }
    if (d.in_velocity) {
        s.dphi_dt = s.phi;
        s.phi.setZero();
    }
    return s;
}

}  // namespace kgads
