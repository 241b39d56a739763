#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tbfid/excitation.hpp"
#include "tbfid/model.hpp"
#include "tbfid/report.hpp"

namespace tbfid {

/// Full parameter block for one physical configuration.
struct Scenario {
    EmitterParams emitter;
    BranchingParams branching;
    CollectionParams collection;
    PulseSpec pulse;
};

/// Product approximation F_ph x F_exc x F_br with the three factors reported
/// as components; `first_order` carries the closed-form approximation with
/// the beta-derived branching ratio.
FidelityReport combined_fidelity(const TargetState& target, const Scenario& sc, int grid = 4000);

struct FirstOrderBreakdown {
    double value = 1.0;       ///< 1 + 1/(4(B+1)) - N * per_photon
    double per_photon = 0.0;  ///< total per-photon infidelity
    double dephasing = 0.0;
    double branching = 0.0;
    double excitation = 0.0;
};

FirstOrderBreakdown combined_first_order(long n, const EmitterParams& params, double branching_B);

struct AxisSpec {
    std::string name;  ///< gamma_t_fwhm | delta_over_gamma | gamma_ns | t_fwhm_ns
    double lo = 0.0;
    double hi = 1.0;
    int points = 2;
    bool log_spaced = false;

    double at(int i) const;
    void validate() const;
};

struct SweepGrid {
    std::vector<AxisSpec> axes;  ///< one or two axes
    void validate() const;
};

enum class SweepObjective { excitation_only, combined };

struct SweepCell {
    int ix = 0, iy = 0;
    double x = 0.0, y = 0.0;
    double value = 0.0;      ///< NaN when the cell failed
    std::string error;       ///< failure description for missing cells
};

struct SweepResult {
    SweepGrid grid;
    std::vector<SweepCell> cells;  ///< row-major over (ix, iy)
    int argmax = -1;               ///< lowest-index maximal cell, -1 if all failed
};

/// Evaluates the objective over the grid. Cells are independent; `threads`
/// above 1 runs them concurrently with a deterministic index-keyed merge.
SweepResult sweep(const SweepGrid& grid, const Scenario& base, SweepObjective objective,
                  const TargetState& target, int solver_grid = 2000, int threads = 1);

struct CurveRow {
    int n = 1;
    double f_phonon = 1.0;
    double f_excitation = 1.0;
    double f_branching = 1.0;
    double f_combined = 1.0;
};

struct CurveSet {
    std::vector<CurveRow> ghz;
    std::vector<CurveRow> cluster;
};

/// Channel breakdown per photon number for both targets.
CurveSet curves(int n_max, const Scenario& sc, int grid = 4000);

void write_sweep_csv(std::ostream& os, const SweepResult& r);
void write_curves_csv(std::ostream& os, const CurveSet& c);

} // namespace tbfid
