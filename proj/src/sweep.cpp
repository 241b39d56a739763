#include "tbfid/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include "tbfid/branching.hpp"
#include "tbfid/kernel.hpp"

namespace tbfid {

namespace {

void format_double(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    os << buf;
}

Scenario cell_scenario(const Scenario& base, const SweepGrid& grid, double x, double y) {
    Scenario sc = base;
    // Rate-defining axes are applied before pulse-length axes so that
    // dimensionless pulse lengths resolve against the cell's gamma.
    auto apply = [&sc](const std::string& name, double v, bool rates_pass) {
        const bool is_rate = name == "delta_over_gamma" || name == "gamma_ns";
        if (is_rate != rates_pass) return;
        if (name == "delta_over_gamma") {
            sc.emitter.gamma = sc.emitter.delta / v;
        } else if (name == "gamma_ns") {
            sc.emitter.gamma = v;
        } else if (name == "gamma_t_fwhm") {
            sc.pulse.t_fwhm = v / sc.emitter.gamma;
        } else if (name == "t_fwhm_ns") {
            sc.pulse.t_fwhm = v;
        } else {
            throw validation_error("unknown sweep axis: " + name);
        }
    };
    for (int pass = 1; pass >= 0; --pass) {
        apply(grid.axes[0].name, x, pass == 1);
        if (grid.axes.size() > 1) apply(grid.axes[1].name, y, pass == 1);
    }
    return sc;
}

double objective_value(const Scenario& sc, SweepObjective objective, const TargetState& target,
                       int solver_grid) {
    const ExcitationAmplitudes amps = excitation_amplitudes(sc.pulse, sc.emitter, solver_grid);
    const double f_exc = excitation_fidelity(detection_factors(amps, sc.collection), target);
    if (objective == SweepObjective::excitation_only) return f_exc;
    const double f_ph = phonon_fidelity(sc.emitter, target).exact;
    return f_ph * f_exc;
}

} // namespace

FidelityReport combined_fidelity(const TargetState& target, const Scenario& sc, int grid) {
    target.validate();
    const double f_ph = phonon_fidelity(sc.emitter, target).exact;
    const ExcitationAmplitudes amps = excitation_amplitudes(sc.pulse, sc.emitter, grid);
    const double f_exc = excitation_fidelity(detection_factors(amps, sc.collection), target);
    const DetectionProbs p = derive_detection_probs(sc.branching, sc.collection);
    const FidelityReport br = branching_fidelity(p, target);

    FidelityReport rep;
    rep.exact = f_ph * f_exc * br.exact;
    rep.success = br.success;
    rep.components = {{"phonon", f_ph}, {"excitation", f_exc}, {"branching", br.exact}};
    const double b_ratio = branching_ratio(sc.branching);
    if (std::isfinite(b_ratio))
        rep.first_order = combined_first_order(target.n_photons, sc.emitter, b_ratio).value;
    return rep;
}

FirstOrderBreakdown combined_first_order(long n, const EmitterParams& params, double branching_B) {
    params.validate();
    if (!(branching_B > 0.0)) throw validation_error("branching ratio must be > 0");
    if (params.gamma / params.delta >= 0.2)
        throw validation_error("first-order combined formula requires gamma/delta < 0.2");
    FirstOrderBreakdown r;
    r.dephasing = params.gamma_d / (params.gamma + 2.0 * params.gamma_d);
    r.branching = 1.0 / (2.0 * (branching_B + 1.0));
    r.excitation = std::sqrt(3.0) * kPi / 8.0 * params.gamma / params.delta;
    r.per_photon = r.dephasing + r.branching + r.excitation;
    r.value = 1.0 + 1.0 / (4.0 * (branching_B + 1.0)) - double(n) * r.per_photon;
    return r;
}

double AxisSpec::at(int i) const {
    if (points == 1) return lo;
    const double t = double(i) / double(points - 1);
    if (log_spaced) return lo * std::pow(hi / lo, t);
    return lo + (hi - lo) * t;
}

void AxisSpec::validate() const {
    if (points < 1) throw validation_error("sweep axis needs at least 1 point");
    if (log_spaced && !(lo > 0.0 && hi > 0.0))
        throw validation_error("log-spaced axis requires positive bounds");
}

void SweepGrid::validate() const {
    if (axes.empty() || axes.size() > 2)
        throw validation_error("sweep supports one or two axes");
    for (const AxisSpec& a : axes) a.validate();
}

SweepResult sweep(const SweepGrid& grid, const Scenario& base, SweepObjective objective,
                  const TargetState& target, int solver_grid, int threads) {
    grid.validate();
    target.validate();
    const int nx = grid.axes[0].points;
    const int ny = grid.axes.size() > 1 ? grid.axes[1].points : 1;

    SweepResult result;
    result.grid = grid;
    result.cells.resize(std::size_t(nx) * std::size_t(ny));

    auto eval_cell = [&](int flat) {
        const int ix = flat / ny;
        const int iy = flat % ny;
        SweepCell cell;
        cell.ix = ix;
        cell.iy = iy;
        cell.x = grid.axes[0].at(ix);
        cell.y = grid.axes.size() > 1 ? grid.axes[1].at(iy) : 0.0;
        try {
            const Scenario sc = cell_scenario(base, grid, cell.x, cell.y);
            cell.value = objective_value(sc, objective, target, solver_grid);
        } catch (const std::exception& e) {
            cell.value = std::numeric_limits<double>::quiet_NaN();
            cell.error = e.what();
        }
        result.cells[std::size_t(flat)] = std::move(cell);
    };

    const int total = nx * ny;
    const int nthreads = std::max(1, std::min(threads, total));
    if (nthreads == 1) {
        for (int flat = 0; flat < total; ++flat) eval_cell(flat);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(nthreads));
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t] {
                for (int flat = t; flat < total; flat += nthreads) eval_cell(flat);
            });
        for (std::thread& th : pool) th.join();
    }

    for (int flat = 0; flat < total; ++flat) {
        const double v = result.cells[std::size_t(flat)].value;
        if (std::isnan(v)) continue;
        if (result.argmax < 0 || v > result.cells[std::size_t(result.argmax)].value)
            result.argmax = flat;
    }
    return result;
}

CurveSet curves(int n_max, const Scenario& sc, int grid) {
    if (n_max < 1 || n_max > 10000)
        throw validation_error("curves require 1 <= n_max <= 10000");
    const ExcitationAmplitudes amps = excitation_amplitudes(sc.pulse, sc.emitter, grid);
    const DetectionFactors d = detection_factors(amps, sc.collection);
    const DetectionProbs p = derive_detection_probs(sc.branching, sc.collection);

    CurveSet set;
    for (StateKind kind : {StateKind::GHZ, StateKind::Cluster}) {
        auto& rows = kind == StateKind::GHZ ? set.ghz : set.cluster;
        rows.reserve(std::size_t(n_max));
        for (int n = 1; n <= n_max; ++n) {
            const TargetState target{kind, n};
            CurveRow row;
            row.n = n;
            row.f_phonon = phonon_fidelity(sc.emitter, target).exact;
            row.f_excitation = excitation_fidelity(d, target);
            row.f_branching = branching_fidelity(p, target).exact;
            row.f_combined = row.f_phonon * row.f_excitation * row.f_branching;
            rows.push_back(row);
        }
    }
    return set;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
    os << r.grid.axes[0].name;
    if (r.grid.axes.size() > 1) os << "," << r.grid.axes[1].name;
    os << ",fidelity\r\n";
    for (const SweepCell& c : r.cells) {
        format_double(os, c.x);
        if (r.grid.axes.size() > 1) {
            os << ",";
            format_double(os, c.y);
        }
        os << ",";
        if (std::isnan(c.value))
            os << "";
        else
            format_double(os, c.value);
        os << "\r\n";
    }
}

void write_curves_csv(std::ostream& os, const CurveSet& c) {
    os << "n,target,f_phonon,f_excitation,f_branching,f_combined\r\n";
    auto dump = [&os](const std::vector<CurveRow>& rows, const char* name) {
        for (const CurveRow& r : rows) {
            os << r.n << "," << name << ",";
            format_double(os, r.f_phonon);
            os << ",";
            format_double(os, r.f_excitation);
            os << ",";
            format_double(os, r.f_branching);
            os << ",";
            format_double(os, r.f_combined);
            os << "\r\n";
        }
    };
    dump(c.ghz, "ghz");
    dump(c.cluster, "cluster");
}

} // namespace tbfid
