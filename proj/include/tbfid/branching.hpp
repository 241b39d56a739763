#pragma once

#include <array>
#include <cstdint>

#include "tbfid/model.hpp"
#include "tbfid/report.hpp"

namespace tbfid {

/// Per-round postselection transfer matrix: m[i][j] is the probability of
/// detecting at least one photon in a round while the spin goes j -> i.
struct TransferMatrix {
    std::array<std::array<double, 2>, 2> m{};
};

inline constexpr long kMaxRounds = 1000000; // cap for matrix powers

TransferMatrix transfer_matrix(const DetectionProbs& p, StateKind kind);

/// (1 1) . M^n . (1/2, 1/2)^T via repeated squaring.
double success_probability(const TransferMatrix& m, long n);

/// Closed-form branching fidelities: unconditional, the transfer-matrix
/// success probability, and their ratio (the conditional fidelity, stored in
/// `exact`).
FidelityReport branching_fidelity(const DetectionProbs& p, const TargetState& target);

/// First-order conditional fidelity, identical for GHZ and cluster targets:
/// unfiltered 1 - N(3 b_perp + b_perp')/2 + b_perp'/4, filtered
/// 1 - (N - 1/2)(b_perp + b_perp')/2.
double branching_first_order(long n, const BranchingParams& b, bool filtered);

/// Same filtered first-order value written through the branching ratio B.
double branching_first_order_from_ratio(long n, double branching_B);

} // namespace tbfid
