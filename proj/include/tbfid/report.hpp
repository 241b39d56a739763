#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace tbfid {

/// Common result record. Channels that have no meaningful entry for a field
/// leave it NaN; the CLI prints only populated fields.
struct FidelityReport {
    double exact = nan_();          ///< exact (conditional where applicable) fidelity
    double first_order = nan_();    ///< first-order analytic approximation
    double unconditional = nan_();  ///< fidelity before postselection
    double success = nan_();        ///< postselection success probability
    std::vector<std::pair<std::string, double>> components;

    static double nan_() { return std::numeric_limits<double>::quiet_NaN(); }
    static bool present(double v) { return !std::isnan(v); }
};

} // namespace tbfid
