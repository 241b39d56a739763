#include "tbfid/scenario_io.hpp"

#include <fstream>

namespace tbfid {

using nlohmann::json;

Scenario scenario_from_json(const json& j) {
    Scenario sc;
    auto get = [&j](const char* key, double& out) {
        if (j.contains(key)) out = j.at(key).get<double>();
    };
    get("gamma_ns", sc.emitter.gamma);
    get("gamma_d_ns", sc.emitter.gamma_d);
    if (j.contains("delta_ghz")) sc.emitter.delta = delta_from_ghz(j.at("delta_ghz").get<double>());
    get("t_bin_ns", sc.emitter.t_bin);
    get("beta_par", sc.branching.beta_par);
    get("beta_perp", sc.branching.beta_perp);
    get("beta_par_prime", sc.branching.beta_par_prime);
    get("beta_perp_prime", sc.branching.beta_perp_prime);
    get("eta", sc.collection.eta);
    get("xi2", sc.collection.xi2);
    get("xi3", sc.collection.xi3);
    if (j.contains("pulse")) {
        const json& p = j.at("pulse");
        if (p.contains("shape")) {
            const std::string shape = p.at("shape").get<std::string>();
            if (shape == "gaussian")
                sc.pulse.shape = PulseShape::gaussian;
            else if (shape == "square")
                sc.pulse.shape = PulseShape::square;
            else
                throw validation_error("pulse shape must be gaussian or square");
        }
        auto getp = [&p](const char* key, double& out) {
            if (p.contains(key)) out = p.at(key).get<double>();
        };
        getp("t_fwhm_ns", sc.pulse.t_fwhm);
        getp("duration_ns", sc.pulse.duration);
        getp("truncation", sc.pulse.truncation);
        getp("area_rad", sc.pulse.area);
    }
    return sc;
}

json scenario_to_json(const Scenario& sc) {
    json j;
    j["gamma_ns"] = sc.emitter.gamma;
    j["gamma_d_ns"] = sc.emitter.gamma_d;
    j["delta_ghz"] = sc.emitter.delta / (2.0 * kPi);
    j["t_bin_ns"] = sc.emitter.t_bin;
    j["beta_par"] = sc.branching.beta_par;
    j["beta_perp"] = sc.branching.beta_perp;
    j["beta_par_prime"] = sc.branching.beta_par_prime;
    j["beta_perp_prime"] = sc.branching.beta_perp_prime;
    j["eta"] = sc.collection.eta;
    j["xi2"] = sc.collection.xi2;
    j["xi3"] = sc.collection.xi3;
    j["pulse"] = {{"shape", sc.pulse.shape == PulseShape::gaussian ? "gaussian" : "square"},
                  {"t_fwhm_ns", sc.pulse.t_fwhm},
                  {"duration_ns", sc.pulse.duration},
                  {"truncation", sc.pulse.truncation},
                  {"area_rad", sc.pulse.area}};
    return j;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open parameter file: " + path);
    json j;
    in >> j;
    return scenario_from_json(j);
}

} // namespace tbfid
