#pragma once

#include <string>

#include "json.hpp"
#include "tbfid/sweep.hpp"

namespace tbfid {

/// JSON schema (all fields optional, defaults apply):
///   gamma_ns, gamma_d_ns, delta_ghz, t_bin_ns,
///   beta_par, beta_perp, beta_par_prime, beta_perp_prime,
///   eta, xi2, xi3,
///   pulse: { shape, t_fwhm_ns, duration_ns, truncation, area_rad }
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& sc);
Scenario load_scenario(const std::string& path);

} // namespace tbfid
