#pragma once

#include <limits>
#include <string>
#include <vector>

#include "tbfid/errors.hpp"

namespace tbfid {

inline constexpr double kPi = 3.14159265358979323846;

// All rates are stored in 1/ns and angular detunings in rad/ns. User-facing
// inputs quote detunings in GHz; convert with delta_from_ghz.
inline constexpr double delta_from_ghz(double f_ghz) { return 2.0 * kPi * f_ghz; }

// Probability sums must close to this tolerance after validation.
inline constexpr double kProbSumTol = 1e-12;
// Sums off by at most this much are renormalized with a warning.
inline constexpr double kProbSumRenorm = 1e-9;

/// Physical rates of the driven emitter.
struct EmitterParams {
    double gamma = 1.0;    ///< radiative decay rate, 1/ns
    double gamma_d = 0.0;  ///< pure dephasing rate, 1/ns
    double delta = 1.0;    ///< detuning of the |0>-|3> transition, rad/ns
    double t_bin = 10.0;   ///< full time-bin period T, ns

    /// Throws validation_error on invalid ranges; appends a warning when the
    /// gamma*T >> 1 regime does not hold (gamma * t_bin < 10).
    void validate(std::vector<std::string>* warnings = nullptr) const;
};

/// Decay-path probabilities of the four emission channels.
struct BranchingParams {
    double beta_par = 1.0;        ///< waveguide emission, vertical transition
    double beta_perp = 0.0;       ///< waveguide emission, diagonal transition
    double beta_par_prime = 0.0;  ///< out-of-waveguide loss, vertical
    double beta_perp_prime = 0.0; ///< out-of-waveguide loss, diagonal

    double sum() const { return beta_par + beta_perp + beta_par_prime + beta_perp_prime; }

    /// Range-checks each entry and the closure sum. Sums within kProbSumRenorm
    /// of 1 are renormalized (with a warning); larger violations throw.
    BranchingParams validated(std::vector<std::string>* warnings = nullptr) const;
};

/// Collection and frequency-filter efficiencies.
struct CollectionParams {
    double eta = 1.0;  ///< overall setup efficiency
    double xi2 = 1.0;  ///< filter transmission, resonant photons
    double xi3 = 1.0;  ///< filter transmission, off-resonant photons

    double eta2() const { return eta * xi2; }
    double eta3() const { return eta * xi3; }
    void validate() const;
};

/// Per-round detect/loss probabilities derived from branching and collection.
struct DetectionProbs {
    double p_par = 1.0;
    double p_perp = 0.0;
    double p_par_prime = 0.0;
    double p_perp_prime = 0.0;

    double sum() const { return p_par + p_perp + p_par_prime + p_perp_prime; }
};

enum class StateKind { GHZ, Cluster };

struct TargetState {
    StateKind kind = StateKind::GHZ;
    int n_photons = 1;

    void validate() const {
        if (n_photons < 1) throw validation_error("n_photons must be >= 1");
    }
};

inline const char* to_string(StateKind k) {
    return k == StateKind::GHZ ? "ghz" : "cluster";
}

/// p_par = eta2*beta_par, p_perp = eta3*beta_perp; primes absorb the filtered
/// and out-of-waveguide fractions so that the four probabilities close to 1.
DetectionProbs derive_detection_probs(const BranchingParams& b, const CollectionParams& c,
                                      std::vector<std::string>* warnings = nullptr);

/// B = (beta_par + beta_par')/(beta_perp + beta_perp'). Returns +infinity when
/// the diagonal channel is absent (documented sentinel, not an error).
double branching_ratio(const BranchingParams& b);

} // namespace tbfid
