#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <utility>

namespace kgads {

// Outcome of one named check. `informational` reports carry measurements that are
// not held to a tolerance (for example a convergence order on rough data).
struct VerificationReport {
    std::string check_name;
    bool passed = false;
    std::map<std::string, double> measured;
    double tolerance = 0.0;
    std::string notes;
    bool informational = false;

    VerificationReport() = default;
    explicit VerificationReport(std::string name) : check_name(std::move(name)) {}

    void measure(const std::string& key, double value) { measured[key] = value; }

    // Non-finite measurements turn the report into a failure.
    VerificationReport& finalize() {
        for (const auto& [k, v] : measured)
            if (!std::isfinite(v)) {
                passed = false;
                notes += (notes.empty() ? "" : "; ") + std::string("non-finite measurement ") + k;
            }
        return *this;
    }
};

// Relative deviation with the 1e-300 floor on the reference.
inline double relative_deviation(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

// Key such as "gap@t=1.5" for per-time measurements.
inline std::string keyed(const std::string& base, double t) {
    std::ostringstream os;
    os << base << "@t=" << std::setprecision(10) << t;
    return os.str();
}

}  // namespace kgads
