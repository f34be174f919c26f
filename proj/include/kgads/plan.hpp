#pragma once

// Grid planning: data grids resolve the datum and its products at the spectral
// cut-off; spectral grids resolve synthesis out to (data extent + t_max) + t_max.

#include <algorithm>
#include <cmath>
#include <optional>

#include "kgads/data.hpp"
#include "kgads/halfline.hpp"

namespace kgads {

struct GridOptions {
    std::size_t nodes_per_panel = 16;
    double mass_cutoff = 0.0;    // 0: from the datum
    double k_cutoff = 0.0;       // 0: from the datum
    double spectral_scale = 1.0; // multiplies the spectral panel width (>1 under-resolves)
    double tail_budget = 1e-8;
    std::size_t k_nodes_min = 0;  // lower bound on the k-grid size (0: none)
};

// k panel width: resolves the radial reach and, when requested, reaches k_nodes_min nodes.
inline double k_panel_width(const GridOptions& o, double k_cutoff, double r_reach) {
    double w = o.spectral_scale * resolving_width(r_reach);
    if (o.k_nodes_min > 0) w = std::min(w, k_cutoff * double(o.nodes_per_panel) / double(o.k_nodes_min));
    return w;
}

struct HalflinePlan {
    std::optional<QuadratureGrid> r_data;
    QuadratureGrid z_data;
    QuadratureGrid m_grid;
    std::optional<QuadratureGrid> k_grid;
    double z_extent = 0.0;
    double r_extent = 0.0;
    double z_reach = 0.0;
    double r_reach = 0.0;
    double t_max = 0.0;
    double mass_cutoff = 0.0;
    double k_cutoff = 0.0;
};

inline HalflinePlan plan_halfline(const Datum& d, const ModelParams& p, double t_max, bool radial, const GridOptions& o = {}) {
    HalflinePlan pl;
    pl.t_max = t_max;
    const double mc = o.mass_cutoff > 0 ? o.mass_cutoff : datum_mass_cutoff(d, p);
    pl.mass_cutoff = mc;
    pl.z_extent = datum_z_extent(d, p);
    pl.z_reach = pl.z_extent + 2.0 * t_max;
    pl.z_data = data_grid(pl.z_extent, mc, o.nodes_per_panel);
    pl.m_grid = composite_gauss_legendre(mc, o.spectral_scale * resolving_width(pl.z_reach), o.nodes_per_panel);
    if (radial) {
        const double kc = o.k_cutoff > 0 ? o.k_cutoff : datum_k_cutoff(d);
        pl.k_cutoff = kc;
        pl.r_extent = datum_r_extent(d);
        pl.r_reach = pl.r_extent + 2.0 * t_max;
        pl.r_data = data_grid(pl.r_extent, kc, o.nodes_per_panel);
        pl.k_grid = composite_gauss_legendre(kc, k_panel_width(o, kc, pl.r_reach), o.nodes_per_panel);
    }
    return pl;
}

inline ContinuousTower build_halfline_tower(const Datum& d, const ModelParams& p, double t_max, bool radial, const GridOptions& o = {},
                                            double amplitude_scale = 1.0, HalflinePlan* plan_out = nullptr) {
    const HalflinePlan pl = plan_halfline(d, p, t_max, radial, o);
    if (plan_out) *plan_out = pl;
    FieldState s0 = sample_datum(d, p, pl.r_data, pl.z_data);
    s0.phi *= amplitude_scale;
    s0.dphi_dt *= amplitude_scale;
    const Transverse tr = radial ? Transverse::radial(*pl.k_grid) : Transverse::independent();
    return decompose(s0, p, pl.m_grid, tr, o.tail_budget, pl.z_reach, radial ? pl.r_reach : std::numeric_limits<double>::infinity());
}

// Target grid on (0, extent] for field-energy quadrature at the given cut-off.
inline QuadratureGrid energy_grid(double extent, double cutoff, std::size_t per_panel = 16) { return data_grid(extent, cutoff, per_panel); }

// Gauss targets covering the datum support grown by t_max, fine enough for grid energies.
inline TargetGrids energy_targets(const HalflinePlan& pl, std::size_t per_panel = 16) {
    TargetGrids g;
    g.z_grid = energy_grid(pl.z_extent + pl.t_max, pl.mass_cutoff, per_panel);
    if (pl.r_data) g.r_grid = energy_grid(pl.r_extent + pl.t_max, pl.k_cutoff, per_panel);
    return g;
}

}  // namespace kgads
