// tbfid: fidelity calculator for time-bin entangled multi-photon states from
// a periodically driven quantum emitter.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "tbfid/branching.hpp"
#include "tbfid/excitation.hpp"
#include "tbfid/kernel.hpp"
#include "tbfid/oracle.hpp"
#include "tbfid/scenario_io.hpp"
#include "tbfid/sweep.hpp"
#include "tbfid/verify.hpp"

namespace {

using nlohmann::json;
using namespace tbfid;

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitPostselect = 3;

struct CommonArgs {
    std::string params_path;
    double gamma = 3.2;
    double gamma_d = 0.06;
    double delta_ghz = 16.0;
    double t_bin = 4.0;
    double eta = 1.0, xi2 = 1.0, xi3 = 1.0;
    bool gamma_set = false;
};

void add_emitter_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--params", a.params_path, "JSON parameter file");
    cmd->add_option("--gamma", a.gamma, "radiative decay rate, 1/ns");
    cmd->add_option("--gamma-d", a.gamma_d, "pure dephasing rate, 1/ns");
    cmd->add_option("--delta-ghz", a.delta_ghz, "detuning of the far level, GHz");
    cmd->add_option("--t-bin", a.t_bin, "time-bin period, ns");
    cmd->add_option("--eta", a.eta, "overall collection efficiency");
    cmd->add_option("--xi2", a.xi2, "filter transmission, resonant photons");
    cmd->add_option("--xi3", a.xi3, "filter transmission, off-resonant photons");
}

Scenario resolve_scenario(const CLI::App* cmd, const CommonArgs& a) {
    Scenario sc;
    if (!a.params_path.empty()) sc = load_scenario(a.params_path);
    auto used = [cmd](const char* name) { return cmd->count(name) > 0; };
    if (used("--gamma") || a.params_path.empty()) sc.emitter.gamma = a.gamma;
    if (used("--gamma-d") || a.params_path.empty()) sc.emitter.gamma_d = a.gamma_d;
    if (used("--delta-ghz") || a.params_path.empty())
        sc.emitter.delta = delta_from_ghz(a.delta_ghz);
    if (used("--t-bin") || a.params_path.empty()) sc.emitter.t_bin = a.t_bin;
    if (used("--eta")) sc.collection.eta = a.eta;
    if (used("--xi2")) sc.collection.xi2 = a.xi2;
    if (used("--xi3")) sc.collection.xi3 = a.xi3;
    std::vector<std::string> warnings;
    sc.emitter.validate(&warnings);
    sc.branching = sc.branching.validated(&warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    return sc;
}

TargetState parse_target(const std::string& name, int n) {
    if (name == "ghz") return {StateKind::GHZ, n};
    if (name == "cluster") return {StateKind::Cluster, n};
    throw validation_error("target must be ghz or cluster");
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw validation_error("cannot open output file: " + out_path);
        out << j.dump(2) << "\n";
    }
}

json report_to_json(const FidelityReport& rep) {
    json j;
    if (FidelityReport::present(rep.exact)) j["exact"] = rep.exact;
    if (FidelityReport::present(rep.first_order)) j["first_order"] = rep.first_order;
    if (FidelityReport::present(rep.unconditional)) j["unconditional"] = rep.unconditional;
    if (FidelityReport::present(rep.success)) j["success"] = rep.success;
    for (const auto& [name, value] : rep.components) j["components"][name] = value;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-bin multi-photon fidelity calculator"};
    app.require_subcommand(1);

    // --- fidelity ---
    auto* fid_cmd = app.add_subcommand("fidelity", "closed-form fidelity of one error channel");
    CommonArgs fid_args;
    std::string fid_channel = "phonon", fid_target = "ghz", fid_out;
    int fid_n = 1;
    double fid_b_ratio = 0.0;
    add_emitter_flags(fid_cmd, fid_args);
    fid_cmd->add_option("--channel", fid_channel,
                        "phonon | overhauser | branching | combined | combined-first-order");
    fid_cmd->add_option("--target", fid_target, "ghz | cluster");
    fid_cmd->add_option("--n", fid_n, "photon number")->required();
    fid_cmd->add_option("--branching-ratio", fid_b_ratio,
                        "override B for combined-first-order");
    fid_cmd->add_option("--out", fid_out, "output file (default stdout)");

    // --- excitation ---
    auto* exc_cmd = app.add_subcommand("excitation", "drive-pulse error amplitudes and fidelity");
    CommonArgs exc_args;
    std::string exc_pulse = "gaussian", exc_out;
    double exc_tfwhm = 0.06, exc_duration = 0.0, exc_trunc = 3.2;
    int exc_n = 1, exc_grid = 4000;
    add_emitter_flags(exc_cmd, exc_args);
    exc_cmd->add_option("--pulse", exc_pulse, "gaussian | square");
    exc_cmd->add_option("--t-fwhm", exc_tfwhm, "gaussian FWHM, ns");
    exc_cmd->add_option("--duration", exc_duration, "square duration, ns (0 = optimal)");
    exc_cmd->add_option("--truncation", exc_trunc, "gaussian window factor");
    double exc_area = kPi;
    exc_cmd->add_option("--area", exc_area, "pulse area on the resonant transition, rad");
    exc_cmd->add_option("--n", exc_n, "photon number")->required();
    exc_cmd->add_option("--grid", exc_grid, "ODE grid steps");

    // --- branching ---
    auto* br_cmd = app.add_subcommand("branching", "decay-path error fidelity");
    CommonArgs br_args;
    std::string br_target = "ghz", br_out;
    int br_n = 1;
    bool br_filtered = false;
    add_emitter_flags(br_cmd, br_args);
    br_cmd->add_option("--target", br_target, "ghz | cluster");
    br_cmd->add_option("--n", br_n, "photon number")->required();
    br_cmd->add_flag("--filtered", br_filtered, "use the frequency-filtered first-order form");
    br_cmd->add_option("--out", br_out, "output file");

    // --- oracle ---
    auto* or_cmd = app.add_subcommand("oracle", "brute-force protocol enumeration");
    CommonArgs or_args;
    std::string or_target = "ghz", or_model = "branching", or_out;
    int or_n = 1;
    double or_delta21 = 0.0;
    add_emitter_flags(or_cmd, or_args);
    or_cmd->add_option("--target", or_target, "ghz | cluster");
    or_cmd->add_option("--n", or_n, "photon number")->required();
    or_cmd->add_option("--model", or_model, "ideal | branching | phonon | overhauser");
    or_cmd->add_option("--delta21", or_delta21, "level shift for the overhauser model, rad/ns");
    or_cmd->add_option("--out", or_out, "output file");

    // --- stabilizers ---
    auto* st_cmd = app.add_subcommand("stabilizers", "cluster stabilizer expectations");
    int st_n = 4;
    std::string st_out;
    st_cmd->add_option("--n", st_n, "photon number")->required();
    st_cmd->add_option("--out", st_out, "output file");

    // --- sweep ---
    auto* sw_cmd = app.add_subcommand("sweep", "parameter sweep to CSV");
    std::string sw_config, sw_out;
    sw_cmd->add_option("--config", sw_config, "sweep configuration JSON")->required();
    sw_cmd->add_option("--out", sw_out, "output CSV path")->required();

    // --- curves ---
    auto* cv_cmd = app.add_subcommand("curves", "fidelity-vs-N channel breakdown to CSV");
    CommonArgs cv_args;
    std::string cv_out;
    int cv_nmax = 10;
    add_emitter_flags(cv_cmd, cv_args);
    cv_cmd->add_option("--n-max", cv_nmax, "largest photon number");
    cv_cmd->add_option("--out", cv_out, "output CSV path")->required();

    // --- verify ---
    auto* vf_cmd = app.add_subcommand("verify", "run the oracle-vs-analytic suites");
    std::uint64_t vf_seed = 20210517;
    int vf_tuples = 50;
    vf_cmd->add_option("--seed", vf_seed, "random seed");
    vf_cmd->add_option("--tuples", vf_tuples, "random tuples per suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help / --version
            std::cout << app.help();
            return 0;
        }
        std::cerr << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    try {
        if (fid_cmd->parsed()) {
            const Scenario sc = resolve_scenario(fid_cmd, fid_args);
            const TargetState target = parse_target(fid_target, fid_n);
            json j;
            j["channel"] = fid_channel;
            j["target"] = fid_target;
            j["n"] = fid_n;
            if (fid_channel == "phonon") {
                j.update(report_to_json(phonon_fidelity(sc.emitter, target)));
            } else if (fid_channel == "overhauser") {
                FidelityReport rep;
                rep.exact = kernel_fidelity(kernel_overhauser(0.0), target);
                rep.first_order = 1.0;
                j.update(report_to_json(rep));
            } else if (fid_channel == "branching") {
                const DetectionProbs p = derive_detection_probs(sc.branching, sc.collection);
                FidelityReport rep = branching_fidelity(p, target);
                rep.first_order =
                    branching_first_order(fid_n, sc.branching, sc.collection.xi3 < sc.collection.xi2);
                j.update(report_to_json(rep));
            } else if (fid_channel == "combined") {
                j.update(report_to_json(combined_fidelity(target, sc)));
                j["params"] = scenario_to_json(sc);
            } else if (fid_channel == "combined-first-order") {
                const double b =
                    fid_b_ratio > 0.0 ? fid_b_ratio : branching_ratio(sc.branching);
                const FirstOrderBreakdown fo = combined_first_order(fid_n, sc.emitter, b);
                j["first_order"] = fo.value;
                j["branching_ratio"] = b;
                j["per_photon_infidelity"] = fo.per_photon;
                j["components"] = {{"dephasing", fo.dephasing},
                                   {"branching", fo.branching},
                                   {"excitation", fo.excitation}};
            } else {
                throw validation_error("unknown channel: " + fid_channel);
            }
            emit(j, fid_out);
        } else if (exc_cmd->parsed()) {
            Scenario sc = resolve_scenario(exc_cmd, exc_args);
            sc.pulse.shape = exc_pulse == "square" ? PulseShape::square : PulseShape::gaussian;
            sc.pulse.t_fwhm = exc_tfwhm;
            sc.pulse.duration = exc_duration;
            sc.pulse.truncation = exc_trunc;
            sc.pulse.area = exc_area;
            const ExcitationAmplitudes a =
                excitation_amplitudes(sc.pulse, sc.emitter, exc_grid);
            const DetectionFactors d = detection_factors(a, sc.collection);
            json j;
            j["c"] = {std::norm(a.c0), std::norm(a.c1), std::norm(a.c2), std::norm(a.c3)};
            j["phi"] = {a.phi0, a.phi1, a.phi2, a.phi3};
            j["d"] = {d.d1, d.d2, d.d3};
            j["success_per_cycle"] = d.success();
            j["fidelity"] = {
                {"ghz", excitation_fidelity(d, {StateKind::GHZ, exc_n})},
                {"cluster", excitation_fidelity(d, {StateKind::Cluster, exc_n})},
                {"first_order",
                 excitation_fidelity_first_order(exc_n, sc.emitter, sc.collection)}};
            j["params"] = scenario_to_json(sc);
            emit(j, "");
        } else if (br_cmd->parsed()) {
            const Scenario sc = resolve_scenario(br_cmd, br_args);
            CollectionParams coll = sc.collection;
            if (br_filtered && br_cmd->count("--xi3") == 0 && br_args.params_path.empty())
                coll.xi3 = 0.0;
            const TargetState target = parse_target(br_target, br_n);
            const DetectionProbs p = derive_detection_probs(sc.branching, coll);
            FidelityReport rep = branching_fidelity(p, target);
            rep.first_order = branching_first_order(br_n, sc.branching, br_filtered);
            json j = report_to_json(rep);
            j["target"] = br_target;
            j["n"] = br_n;
            emit(j, br_out);
        } else if (or_cmd->parsed()) {
            const Scenario sc = resolve_scenario(or_cmd, or_args);
            const TargetState target = parse_target(or_target, or_n);
            json j;
            j["model"] = or_model;
            j["target"] = or_target;
            j["n"] = or_n;
            if (or_model == "phonon" || or_model == "overhauser") {
                const KernelModel model =
                    or_model == "phonon" ? KernelModel::phonon : KernelModel::overhauser;
                j["fidelity"] = kernel_oracle(model, sc.emitter, or_delta21, target);
                j["success"] = 1.0;
            } else {
                SparseState state;
                if (or_model == "ideal") {
                    state = run_protocol(ideal_round(target.kind), or_n);
                } else if (or_model == "branching") {
                    const DetectionProbs p = derive_detection_probs(sc.branching, sc.collection);
                    state = run_protocol(branching_round(p, target.kind), or_n);
                } else {
                    throw validation_error("unknown oracle model: " + or_model);
                }
                const OracleResult r = conditional_fidelity(state, target);
                j["fidelity"] = r.fidelity;
                j["success"] = r.success;
                j["n_terms"] = r.n_terms;
                j["n_pruned"] = state.pruned;
            }
            emit(j, or_out);
        } else if (st_cmd->parsed()) {
            const SparseState state = run_protocol(ideal_round(StateKind::Cluster), st_n);
            emit(json(stabilizer_check(state, st_n)), st_out);
        } else if (sw_cmd->parsed()) {
            std::ifstream in(sw_config);
            if (!in) throw validation_error("cannot open sweep config: " + sw_config);
            json cfg;
            in >> cfg;
            SweepGrid grid;
            for (const json& ax : cfg.at("axes")) {
                AxisSpec spec;
                spec.name = ax.at("name").get<std::string>();
                spec.lo = ax.at("min").get<double>();
                spec.hi = ax.at("max").get<double>();
                spec.points = ax.at("points").get<int>();
                spec.log_spaced = ax.value("scale", std::string("linear")) == "log";
                grid.axes.push_back(spec);
            }
            const Scenario base = cfg.contains("params")
                                      ? scenario_from_json(cfg.at("params"))
                                      : Scenario{};
            const SweepObjective objective =
                cfg.value("objective", std::string("combined")) == "excitation_only"
                    ? SweepObjective::excitation_only
                    : SweepObjective::combined;
            const TargetState target =
                parse_target(cfg.value("target", std::string("ghz")), cfg.value("n", 5));
            int threads = 1;
            if (const char* env = std::getenv("TBFID_THREADS")) threads = std::atoi(env);
            const SweepResult r = sweep(grid, base, objective, target,
                                        cfg.value("grid", 2000), std::max(threads, 1));
            std::ofstream out(sw_out, std::ios::binary);
            if (!out) throw validation_error("cannot open output file: " + sw_out);
            write_sweep_csv(out, r);
            json summary;
            summary["cells"] = r.cells.size();
            if (r.argmax >= 0) {
                const SweepCell& best = r.cells[std::size_t(r.argmax)];
                summary["argmax"] = {{grid.axes[0].name, best.x}, {"fidelity", best.value}};
                if (grid.axes.size() > 1) summary["argmax"][grid.axes[1].name] = best.y;
            }
            std::cout << summary.dump(2) << "\n";
        } else if (cv_cmd->parsed()) {
            const Scenario sc = resolve_scenario(cv_cmd, cv_args);
            const CurveSet set = curves(cv_nmax, sc);
            std::ofstream out(cv_out, std::ios::binary);
            if (!out) throw validation_error("cannot open output file: " + cv_out);
            write_curves_csv(out, set);
        } else if (vf_cmd->parsed()) {
            VerifyOptions opt;
            opt.seed = vf_seed;
            opt.tuples = vf_tuples;
            bool all_pass = true;
            for (const SuiteResult& s : run_verification(opt)) {
                std::cout << (s.pass ? "PASS " : "FAIL ") << s.name << ": " << s.detail << "\n";
                all_pass = all_pass && s.pass;
            }
            if (!all_pass) return kExitNumerical;
        }
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const numerical_error& e) {
        std::cerr << "numerical-accuracy error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const postselect_error& e) {
        std::cerr << "postselection error: " << e.what() << "\n";
        return kExitPostselect;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
