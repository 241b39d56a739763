#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "tbfid/model.hpp"

namespace tbfid {

/// Discrete orthonormal single-mode labels. Every error model implemented
/// here reduces to single-mode overlap factors, so the continuous emission
/// time can be replaced by one symbol per emitted excitation.
enum class ModeSymbol : std::uint8_t {
    det_res_early,    ///< detected photon, vertical transition, early bin
    det_res_late,
    det_diag_early,   ///< detected photon, diagonal transition, early bin
    det_diag_late,
    lost_par_early,   ///< lost photon, vertical transition
    lost_par_late,
    lost_perp_early,  ///< lost photon, diagonal transition
    lost_perp_late,
    phonon_early,     ///< scattered phonon tagging the early emission
    phonon_late,
    pulse_photon_res, ///< photon emitted during the drive pulse
    pulse_photon_diag,
};

inline bool symbol_is_detected(ModeSymbol s) {
    return s == ModeSymbol::det_res_early || s == ModeSymbol::det_res_late ||
           s == ModeSymbol::det_diag_early || s == ModeSymbol::det_diag_late;
}
inline bool symbol_is_diag(ModeSymbol s) {
    return s == ModeSymbol::det_diag_early || s == ModeSymbol::det_diag_late;
}
/// 0 = early, 1 = late (detected symbols only).
inline int symbol_bin(ModeSymbol s) {
    return (s == ModeSymbol::det_res_late || s == ModeSymbol::det_diag_late) ? 1 : 0;
}

/// Sorted multiset of symbols emitted in one round.
using SymbolSet = std::vector<ModeSymbol>;

struct RoundBranch {
    int spin_in = 0;
    int spin_out = 0;
    std::complex<double> amp{1.0, 0.0};
    SymbolSet emitted;
};

/// One protocol round as a branching map on (spin (x) new round modes).
struct RoundOperator {
    std::vector<RoundBranch> branches;
};

struct StateLabel {
    std::uint8_t spin = 0;
    std::vector<SymbolSet> rounds;
    auto operator<=>(const StateLabel&) const = default;
};

/// Sparse amplitude map over protocol basis labels.
struct SparseState {
    std::map<StateLabel, std::complex<double>> amps;
    std::size_t pruned = 0;  ///< amplitudes dropped below the pruning threshold

    double norm_sq() const;
    std::size_t n_terms() const { return amps.size(); }
};

inline constexpr double kPruneThreshold = 1e-15;
inline constexpr std::size_t kDefaultStateCap = 10'000'000;

/// Exact noiseless round (X rotation for GHZ, Hadamard for cluster).
RoundOperator ideal_round(StateKind kind);

/// Ideal round with an extra common phase on both emission branches; the slow
/// level-drift channel reduces to this once the chirp is folded into the mode.
RoundOperator ideal_round_phased(StateKind kind, double phase);

/// Full 14-branch single-round map with detection/loss probabilities p.
RoundOperator branching_round(const DetectionProbs& p, StateKind kind);

/// Round map keeping only the correct-state-producing terms, i.e. the
/// operator behind the closed-form branching fidelities. For the cluster the
/// wrong-transition term is admitted in the first round only.
RoundOperator truncated_branching_round(const DetectionProbs& p, StateKind kind,
                                        bool first_round);

/// Ideal round split into a coherent part (weight I) and an orthogonal
/// phonon-tagged part (weight 1-I) per emission.
RoundOperator phonon_round(double indistinguishability, StateKind kind);

/// Applies `op` n times to (|0> + |1>)/sqrt(2) (x) vacuum.
SparseState run_protocol(const RoundOperator& op, int n, std::size_t cap = kDefaultStateCap);
/// Per-round operator variant (round j uses ops[j]).
SparseState run_protocol(const std::vector<RoundOperator>& ops,
                         std::size_t cap = kDefaultStateCap);

struct OracleResult {
    double fidelity = 0.0;  ///< conditional fidelity
    double success = 0.0;   ///< probability of >= 1 detection in every round
    std::size_t n_terms = 0;
};

/// Operational conditional fidelity: success is the weight of labels with at
/// least one detected symbol per round; the fidelity numerator sums, over
/// orthogonal environment configurations, the squared overlap with the ideal
/// state, matching detected symbols by time bin only.
OracleResult conditional_fidelity(const SparseState& state, const TargetState& target);

/// Expectation values of the N+1 cluster stabilizer generators
/// g_0 = X Z, g_i = Z X Z, g_N = Z X in the logical basis (spin relabelled
/// 0 <-> 1, early -> |0>, late -> -|1>). Requires an ideal-protocol state.
std::vector<double> stabilizer_check(const SparseState& state, int n);

struct DecompositionReport {
    double residual = 0.0;             ///< max-norm residual of the operator identity
    double two_qubit_error_prob = 0.0; ///< p_perp' * p_par per round
};

/// Verifies, on a two-round truncated basis, that a wrong-transition round
/// followed by an ideal round equals a two-qubit error acting on two ideal
/// rounds; returns the residual and the per-round error weight.
DecompositionReport decomposition_check(const DetectionProbs& p);

enum class KernelModel { phonon, overhauser };

/// Protocol-level enumeration of the kernel channels; must agree with the
/// closed-form kernel fidelities.
double kernel_oracle(KernelModel model, const EmitterParams& params, double delta21,
                     const TargetState& target);

} // namespace tbfid
