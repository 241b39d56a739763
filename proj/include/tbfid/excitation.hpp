#pragma once

#include <complex>

#include "tbfid/model.hpp"

namespace tbfid {

enum class PulseShape { gaussian, square };

/// Drive-pulse description. Durations are in ns; the pulse area is defined on
/// the resonant transition over the truncated window.
struct PulseSpec {
    PulseShape shape = PulseShape::gaussian;
    double t_fwhm = 0.06;     ///< gaussian FWHM, ns
    double duration = 0.0;    ///< square duration, ns; 0 selects sqrt(3) pi / delta
    double truncation = 3.2;  ///< gaussian window T_p = truncation * t_fwhm
    double area = kPi;        ///< pulse area on the resonant transition, rad

    void validate() const;
};

/// End-of-pulse state of one two-level branch plus the integrated weights of
/// the photon emitted during the pulse (atom ending in g resp. re-excited).
struct BranchSolution {
    std::complex<double> c_g{1.0, 0.0};
    std::complex<double> c_e{0.0, 0.0};
    double phi_g = 0.0;
    double phi_e = 0.0;
    double richardson = 0.0;  ///< grid-doubling error estimate
};

/// Amplitudes of Q = (c1 + c2 A0 + Phi1 Ap1 + Phi2 Ap2 A0)(c0 + c3 B0 + ...):
/// c1/c2 and phi1/phi2 from the resonant branch, c0/c3 and phi0/phi3 from the
/// far-detuned branch driven by the same pulse.
struct ExcitationAmplitudes {
    std::complex<double> c0, c1, c2, c3;
    double phi0 = 0.0, phi1 = 0.0, phi2 = 0.0, phi3 = 0.0;
};

struct DetectionFactors {
    double d1 = 1.0;  ///< off-diagonal (coherence) factor
    double d2 = 1.0;  ///< diagonal (population) factor
    double d3 = 0.0;  ///< off-resonant-only detection weight
    double success() const { return d2 + d3; }
};

/// Integrates the driven-decaying two-level system in dimensionless time
/// tau = gamma*t over [0, tau_p]:
///     dc_e/dtau = i(W/2) c_g - (1/2 + i dt) c_e,   dc_g/dtau = i(W/2) c_e
/// from (c_g, c_e) = (1, 0), then propagates every post-emission pair from
/// phi_g(te,te) = i e^{-i dt te} c_e(te), phi_e(te,te) = 0 to tau_p and
/// integrates |phi|^2 over the emission time. Throws numerical_error when the
/// grid-doubling estimate exceeds 1e-6.
BranchSolution solve_two_level(const PulseSpec& pulse, double gamma, double delta_tilde,
                               int grid);

/// Single-grid solve without the convergence check (step-size studies).
BranchSolution solve_two_level_fixed(const PulseSpec& pulse, double gamma, double delta_tilde,
                                     int grid);

/// Resonant (dt = 0) and detuned (dt = delta/gamma) branches under one pulse.
ExcitationAmplitudes excitation_amplitudes(const PulseSpec& pulse, const EmitterParams& params,
                                           int grid = 4000);

DetectionFactors detection_factors(const ExcitationAmplitudes& a, const CollectionParams& c);

/// GHZ: (D1^N + D2^N) / (2 (D2+D3)^N); cluster: ((D1+D2)/(2(D2+D3)))^N.
double excitation_fidelity(const DetectionFactors& d, const TargetState& target);

/// Square-pulse first-order result: perfect filters give
/// 1 - N sqrt(3) pi gamma / (8 delta); imperfect filters give the
/// 29 + 3(1 + xi3/xi2) form.
double excitation_fidelity_first_order(long n, const EmitterParams& params,
                                       const CollectionParams& c);

/// First-order coefficient list for the square pulse at the optimal duration
/// sqrt(3) pi / delta (values are |.|^2, keyed by the amplitude they bound).
struct SquarePulseCoefficients {
    double c0 = 1.0, c1 = 0.0, c2 = 1.0, c3 = 0.0;
    double phi0 = 0.0, phi1 = 0.0, phi2 = 0.0, phi3 = 0.0;
};
SquarePulseCoefficients square_pulse_coefficients(double delta_tilde);

/// Optimal square-pulse duration (ns): a 2 pi rotation on the detuned branch.
inline double square_pulse_optimal_duration(double delta) {
    return std::sqrt(3.0) * kPi / delta;
}

} // namespace tbfid
