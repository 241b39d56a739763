#pragma once

#include <array>
#include <complex>

#include "tbfid/model.hpp"
#include "tbfid/report.hpp"

namespace tbfid {

/// Index into the 2x2 single-round overlap kernel.
enum Bin : int { kEarly = 0, kLate = 1 };

/// Single-round overlap kernel K[u][v], u,v in {early, late}: the traced
/// time-integrated overlap between the emitted mode in bin u and the ideal
/// projector in bin v. Diagonal entries are real populations; off-diagonal
/// entries carry the surviving coherence.
struct Kernel {
    std::array<std::array<std::complex<double>, 2>, 2> k{};

    static Kernel ones() {
        Kernel r;
        r.k = {{{1.0, 1.0}, {1.0, 1.0}}};
        return r;
    }

    /// Hermiticity / range / Cauchy-Schwarz checks (tolerance 1e-12).
    void validate() const;
};

/// I = gamma / (gamma + 2 gamma_d), the coherence fraction surviving pure
/// dephasing of the excited state.
inline double indistinguishability(double gamma, double gamma_d) {
    return gamma / (gamma + 2.0 * gamma_d);
}

/// GHZ: (1/4) sum_{u,v} K[u][v]^N.  Cluster: ((1/4) sum_{u,v} K[u][v])^N.
double kernel_fidelity(const Kernel& k, const TargetState& target);

/// Phonon pure-dephasing kernel: diagonal 1, off-diagonal I.
Kernel kernel_phonon(double gamma, double gamma_d);

/// Slow level-drift (nuclear spin bath) kernel: exactly all-ones for any
/// shift delta21 -- the chirp phase is common to the early and late bins and
/// cancels under the arrival-time-integrated projectors.
Kernel kernel_overhauser(double delta21);

/// Exact and first-order [1 - N(1-I)/2] phonon fidelities.
FidelityReport phonon_fidelity(const EmitterParams& params, const TargetState& target);

} // namespace tbfid
