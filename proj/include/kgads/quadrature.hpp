#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "kgads/errors.hpp"

namespace kgads {

// Nodes and weights on (0, domain_end]. Composite Gauss-Legendre grids keep the
// panel layout so that fields sampled on them can be interpolated and
// differentiated panel by panel; midpoint grids have nodes_per_panel == 0.
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double domain_end = 0.0;
    std::size_t nodes_per_panel = 0;
    std::vector<double> panel_edges;

    std::size_t size() const { return nodes.size(); }
    bool paneled() const { return nodes_per_panel > 0; }
    std::size_t panel_count() const { return paneled() ? nodes.size() / nodes_per_panel : 0; }
    double max_spacing() const {
        double h = nodes.empty() ? 0.0 : nodes.front();
        for (std::size_t i = 1; i < nodes.size(); ++i) h = std::max(h, nodes[i] - nodes[i - 1]);
        return h;
    }
};

struct GaussRule {
    std::vector<double> x;  // on [-1, 1], increasing
    std::vector<double> w;
};

inline GaussRule gauss_legendre_rule(std::size_t n) {
    if (n == 0) throw DomainError("gauss_legendre_rule: n must be positive");
    GaussRule g;
    g.x.resize(n);
    g.w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        g.x[n - 1 - i] = x;
        g.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

// Composite Gauss-Legendre on (0, end] with equal panels no wider than max_width.
inline QuadratureGrid composite_gauss_legendre(double end, double max_width, std::size_t per_panel = 16) {
    if (!(end > 0.0) || !(max_width > 0.0)) throw DomainError("composite_gauss_legendre: end and width must be positive");
    const auto panels = static_cast<std::size_t>(std::ceil(end / max_width - 1e-12));
    const double h = end / panels;
    const GaussRule g = gauss_legendre_rule(per_panel);
    QuadratureGrid q;
    q.domain_end = end;
    q.nodes_per_panel = per_panel;
    q.nodes.reserve(panels * per_panel);
    q.weights.reserve(panels * per_panel);
    for (std::size_t p = 0; p <= panels; ++p) q.panel_edges.push_back(p * h);
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = p * h;
        for (std::size_t i = 0; i < per_panel; ++i) {
            q.nodes.push_back(a + 0.5 * h * (g.x[i] + 1.0));
            q.weights.push_back(0.5 * h * g.w[i]);
        }
    }
    return q;
}

// Uniform cell-centred grid z_j = (j - 1/2) h, h = end / count.
inline QuadratureGrid midpoint_grid(double end, std::size_t count) {
    if (!(end > 0.0) || count == 0) throw DomainError("midpoint_grid: end and count must be positive");
    QuadratureGrid q;
    q.domain_end = end;
    const double h = end / count;
    for (std::size_t j = 0; j < count; ++j) {
        q.nodes.push_back((j + 0.5) * h);
        q.weights.push_back(h);
    }
    return q;
}

// A single node with unit weight, used for x-independent transverse profiles.
inline QuadratureGrid single_point_grid(double x) {
    QuadratureGrid q;
    q.nodes = {x};
    q.weights = {1.0};
    q.domain_end = x;
    return q;
}

inline void validate_grid(const QuadratureGrid& q, bool full_interval = true) {
    if (q.nodes.size() != q.weights.size()) throw ShapeError("grid: nodes/weights length mismatch");
    if (q.nodes.empty()) throw ShapeError("grid: empty");
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        if (!(q.nodes[i] > 0.0) || q.nodes[i] > q.domain_end * (1 + 1e-14)) throw DomainError("grid: node outside (0, end]");
        if (i && !(q.nodes[i] > q.nodes[i - 1])) throw DomainError("grid: nodes not strictly increasing");
        if (!(q.weights[i] > 0.0)) throw DomainError("grid: non-positive weight");
    }
    if (full_interval) {
        double s = 0.0;
        for (double w : q.weights) s += w;
        if (std::abs(s - q.domain_end) > 1e-12 * q.domain_end) throw DomainError("grid: weights do not sum to domain end");
    }
}

// Barycentric interpolation and differentiation on one Gauss panel.
struct PanelCalculus {
    std::vector<double> x;     // reference nodes on [-1, 1]
    std::vector<double> bw;    // barycentric weights
    std::vector<double> diff;  // row-major n x n differentiation matrix on [-1, 1]

    explicit PanelCalculus(std::size_t n) {
        x = gauss_legendre_rule(n).x;
        bw.assign(n, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) bw[i] /= (x[i] - x[j]);
        diff.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double d = (bw[j] / bw[i]) / (x[i] - x[j]);
                diff[i * n + j] = d;
                s += d;
            }
            diff[i * n + i] = -s;
        }
    }

    // Interpolation weights for the point s in [-1, 1].
    std::vector<double> interpolation_row(double s) const {
        const std::size_t n = x.size();
        std::vector<double> row(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (s == x[i]) {
                row[i] = 1.0;
                return row;
            }
        double den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            row[i] = bw[i] / (s - x[i]);
            den += row[i];
        }
        for (double& r : row) r /= den;
        return row;
    }
};

// Derivative of samples f on a paneled grid, panel by panel.
inline std::vector<double> panel_derivative(const QuadratureGrid& q, const std::vector<double>& f) {
    if (!q.paneled()) throw PreconditionError("panel_derivative: grid has no panel structure");
    if (f.size() != q.size()) throw ShapeError("panel_derivative: size mismatch");
    const std::size_t n = q.nodes_per_panel;
    const PanelCalculus pc(n);
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t p = 0; p < q.panel_count(); ++p) {
        const double scale = 2.0 / (q.panel_edges[p + 1] - q.panel_edges[p]);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += pc.diff[i * n + j] * f[p * n + j];
            out[p * n + i] = scale * s;
        }
    }
    return out;
}

// Value at the right end of the grid by interpolation on the last panel.
inline double right_end_value(const QuadratureGrid& q, const std::vector<double>& f) {
    if (!q.paneled()) throw PreconditionError("right_end_value: grid has no panel structure");
    const std::size_t n = q.nodes_per_panel;
    const PanelCalculus pc(n);
    const auto row = pc.interpolation_row(1.0);
    const std::size_t base = f.size() - n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * f[base + j];
    return s;
}

}  // namespace kgads
