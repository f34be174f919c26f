#pragma once

#include <cmath>
#include <optional>
#include <sstream>

#include "kgads/errors.hpp"

namespace kgads {

struct ModelParams {
    double mu = 0.0;
    double lambda_index = 0.5;
    double alpha_plus = 0.0;
    double alpha_minus = -1.0;
    std::optional<int> nu;

    bool nu_even() const { return nu && (*nu % 2 == 0); }
};

inline ModelParams make_params(double mu) {
    if (!std::isfinite(mu) || !(mu > -0.25)) {
        std::ostringstream os;
        os << "mass parameter must satisfy −1/4 < μ, got μ = " << mu;
        throw DomainError(os.str());
    }
    ModelParams p;
    p.mu = mu;
    p.lambda_index = std::sqrt(mu + 0.25);
    p.alpha_plus = -0.5 + p.lambda_index;
    p.alpha_minus = -0.5 - p.lambda_index;
    const double n = std::round(2.0 * p.lambda_index);
    if (n >= 1.0 && std::abs(mu - (n * n - 1.0) / 4.0) <= 1e-12) {
        p.nu = static_cast<int>(n);
        p.lambda_index = n / 2.0;
        p.alpha_plus = -0.5 + p.lambda_index;
        p.alpha_minus = -0.5 - p.lambda_index;
    }
    return p;
}

// Cosmological Klein-Gordon mass lambda_kg maps to mu = 15/4 + lambda_kg.
inline ModelParams mass_from_cosmological(double lambda_kg) {
    if (!std::isfinite(lambda_kg) || !(lambda_kg > -4.0)) {
        std::ostringstream os;
        os << "cosmological mass must exceed -4 so that −1/4 < μ, got " << lambda_kg;
        throw DomainError(os.str());
    }
    return make_params(3.75 + lambda_kg);
}

}  // namespace kgads
