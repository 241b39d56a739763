#include "tbfid/kernel.hpp"

#include <cmath>
#include <sstream>

namespace tbfid {

namespace {
constexpr double kHermTol = 1e-12;

std::complex<double> cpow_int(std::complex<double> z, int n) {
    std::complex<double> r = 1.0;
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}
} // namespace

void Kernel::validate() const {
    for (int u = 0; u < 2; ++u) {
        const auto d = k[u][u];
        if (std::abs(d.imag()) > kHermTol)
            throw validation_error("kernel diagonal entries must be real");
        if (d.real() < -kHermTol || d.real() > 1.0 + kHermTol)
            throw validation_error("kernel diagonal entries must lie in [0, 1]");
    }
    if (std::abs(k[kLate][kEarly] - std::conj(k[kEarly][kLate])) > kHermTol)
        throw validation_error("kernel must be Hermitian: K[l][e] != conj(K[e][l])");
    const double bound = std::sqrt(k[kEarly][kEarly].real() * k[kLate][kLate].real());
    if (std::abs(k[kEarly][kLate]) > bound + kHermTol)
        throw validation_error("kernel violates |K[e][l]| <= sqrt(K[e][e] K[l][l])");
}

double kernel_fidelity(const Kernel& kern, const TargetState& target) {
    target.validate();
    kern.validate();
    const int n = target.n_photons;
    std::complex<double> f;
    if (target.kind == StateKind::GHZ) {
        f = 0.0;
        for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v) f += cpow_int(kern.k[u][v], n);
        f *= 0.25;
    } else {
        std::complex<double> s = 0.0;
        for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v) s += kern.k[u][v];
        f = cpow_int(0.25 * s, n);
    }
    if (std::abs(f.imag()) > kHermTol) {
        std::ostringstream os;
        os << "kernel fidelity has imaginary part " << f.imag();
        throw validation_error(os.str());
    }
    double r = f.real();
    // Clamp only roundoff-level boundary crossings.
    if (r > 1.0 && r < 1.0 + kHermTol) r = 1.0;
    if (r < 0.0 && r > -kHermTol) r = 0.0;
    return r;
}

Kernel kernel_phonon(double gamma, double gamma_d) {
    if (!(gamma > 0.0)) throw validation_error("gamma must be > 0");
    if (!(gamma_d >= 0.0)) throw validation_error("gamma_d must be >= 0");
    const double ind = indistinguishability(gamma, gamma_d);
    Kernel k;
    k.k = {{{1.0, ind}, {ind, 1.0}}};
    return k;
}

Kernel kernel_overhauser(double /*delta21*/) {
    // The e^{-i delta21 t} chirp multiplies both time-bin wavepackets
    // identically; the delta-function arrival-time integrals cancel it.
    return Kernel::ones();
}

FidelityReport phonon_fidelity(const EmitterParams& params, const TargetState& target) {
    params.validate();
    const Kernel k = kernel_phonon(params.gamma, params.gamma_d);
    const double ind = indistinguishability(params.gamma, params.gamma_d);
    FidelityReport rep;
    rep.exact = kernel_fidelity(k, target);
    rep.first_order = 1.0 - target.n_photons * (1.0 - ind) / 2.0;
    rep.components = {{"indistinguishability", ind}};
    return rep;
}

} // namespace tbfid
