#pragma once

// Power-law fits of sup-norm time series.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "kgads/errors.hpp"
#include "kgads/halfline.hpp"
#include "kgads/verify/report.hpp"

namespace kgads {

struct DecayFit {
    std::vector<double> times;
    std::vector<double> values;
    double exponent = 0.0;
    double exponent_stderr = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::pair<double, double> window;
};

// Least squares of log(value) against log(t) over the points with t in [t_min, t_max].
// The reported window is the span of the times actually fitted.
inline DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& values, double t_min = 0.0,
                          double t_max = std::numeric_limits<double>::infinity()) {
    if (times.size() != values.size()) throw ShapeError("fit_decay: times and values differ in length");
    DecayFit f;
    f.times = times;
    f.values = values;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_min || times[i] > t_max) continue;
        if (!(times[i] > 0.0) || !(values[i] > 0.0)) throw DomainError("fit_decay: times and values must be positive");
        x.push_back(std::log(times[i]));
        y.push_back(std::log(values[i]));
    }
    const std::size_t n = x.size();
    if (n < 5) throw FitError("fit_decay: fewer than 5 points in the fit window");
    f.window = {std::exp(*std::min_element(x.begin(), x.end())), std::exp(*std::max_element(x.begin(), x.end()))};
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw FitError("fit_decay: all fit times coincide");
    f.exponent = sxy / sxx;
    f.intercept = my - f.exponent * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - f.intercept - f.exponent * x[i];
        ssr += e * e;
    }
    f.exponent_stderr = std::sqrt(ssr / double(n - 2) / sxx);
    f.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    return f;
}

// Geometric sequence of n times from t0 to t1.
inline std::vector<double> log_times(double t0, double t1, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = t0 * std::pow(t1 / t0, n > 1 ? double(i) / double(n - 1) : 0.0);
    return t;
}

// sup |z^{z_weight} f| for each time, over the targets within the datum extents grown
// by t (plus a margin). `synth` is a halfline or brane synthesizer; a weighted
// synthesizer already includes z^{-lambda-1/2}, in which case z_weight is 0.
template <class Synth>
std::vector<double> sup_series(const Synth& synth, const std::vector<double>& times, double r_extent, double z_extent,
                               double z_weight = 0.0, double margin = 0.0) {
    const TargetGrids& g = synth.grids();
    auto leading = [](const std::vector<double>& nodes, double bound) {
        const auto it = std::upper_bound(nodes.begin(), nodes.end(), bound);
        return static_cast<Eigen::Index>(std::max<std::ptrdiff_t>(1, it - nodes.begin()));
    };
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        const Eigen::Index nr = g.r_grid ? leading(g.r_grid->nodes, r_extent + std::abs(t) + margin) : 1;
        const Eigen::Index nz = leading(g.z_grid.nodes, z_extent + std::abs(t) + margin);
        const Matrix f = synth.field_leading(t, nr, nz);
        double s = 0.0;
        for (Eigen::Index j = 0; j < nz; ++j) {
            const double w = z_weight == 0.0 ? 1.0 : std::pow(g.z_grid.nodes[j], z_weight);
            for (Eigen::Index i = 0; i < nr; ++i) s = std::max(s, w * std::abs(f(i, j)));
        }
        out.push_back(s);
    }
    return out;
}

// Passes when the exponent lies within tolerance of the expectation and R^2 >= min_r2.
inline VerificationReport check_decay(const DecayFit& fit, double expected, double tolerance, double min_r2 = 0.98,
                                      const std::string& name = "decay_exponent") {
    VerificationReport rep{name};
    rep.tolerance = tolerance;
    rep.measure("exponent", fit.exponent);
    rep.measure("exponent_stderr", fit.exponent_stderr);
    rep.measure("r_squared", fit.r_squared);
    rep.measure("expected", expected);
    rep.measure("window_min", fit.window.first);
    rep.measure("window_max", fit.window.second);
    const bool reportable = fit.r_squared >= min_r2;
    rep.passed = reportable && std::abs(fit.exponent - expected) <= tolerance;
    if (!reportable) rep.notes = "R^2 below the reportable threshold";
    return rep.finalize();
}

}  // namespace kgads
