#include "tbfid/branching.hpp"

#include <cmath>

namespace tbfid {

namespace {

using Mat2 = std::array<std::array<double, 2>, 2>;

Mat2 mul(const Mat2& a, const Mat2& b) {
    Mat2 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

Mat2 mat_pow(Mat2 a, long n) {
    Mat2 r = {{{1.0, 0.0}, {0.0, 1.0}}};
    while (n > 0) {
        if (n & 1) r = mul(r, a);
        a = mul(a, a);
        n >>= 1;
    }
    return r;
}

} // namespace

TransferMatrix transfer_matrix(const DetectionProbs& p, StateKind kind) {
    TransferMatrix t;
    if (kind == StateKind::GHZ) {
        t.m[0][0] = p.p_par;
        t.m[0][1] = p.p_par * (p.p_perp + p.p_perp_prime) + p.p_par_prime * p.p_perp;
        t.m[1][0] = p.p_perp;
        t.m[1][1] = p.p_par + 2.0 * p.p_perp * p.p_perp_prime + p.p_perp * p.p_perp;
    } else {
        // The Hadamard splits the spin evenly, so both rows coincide.
        const double col1 = (p.p_par + p.p_perp * p.p_perp + p.p_perp * p.p_par +
                             p.p_perp_prime * p.p_par + p.p_perp * p.p_par_prime +
                             2.0 * p.p_perp * p.p_perp_prime) /
                            2.0;
        const double col0 = (p.p_par + p.p_perp) / 2.0;
        t.m[0][0] = t.m[1][0] = col0;
        t.m[0][1] = t.m[1][1] = col1;
    }
    return t;
}

double success_probability(const TransferMatrix& m, long n) {
    if (n < 1) throw validation_error("success_probability requires n >= 1");
    if (n > kMaxRounds) throw validation_error("round count exceeds cap");
    const Mat2 p = mat_pow(m.m, n);
    return 0.5 * (p[0][0] + p[0][1] + p[1][0] + p[1][1]);
}

FidelityReport branching_fidelity(const DetectionProbs& p, const TargetState& target) {
    target.validate();
    const long n = target.n_photons;
    double uncond;
    if (target.kind == StateKind::GHZ) {
        uncond = (std::pow(p.p_par + p.p_perp_prime * p.p_perp, double(n)) +
                  std::pow(p.p_par, double(n)) * (3.0 + p.p_perp_prime)) /
                 4.0;
    } else {
        const double a = p.p_par + p.p_perp * p.p_perp_prime / 4.0;
        uncond = std::pow(a, double(n - 1)) * (a + p.p_par * p.p_perp_prime / 4.0);
    }
    const double succ = success_probability(transfer_matrix(p, target.kind), n);
    if (succ <= 0.0)
        throw postselect_error("branching success probability is zero; conditional fidelity undefined");
    FidelityReport rep;
    rep.unconditional = uncond;
    rep.success = succ;
    rep.exact = uncond / succ;
    return rep;
}

double branching_first_order(long n, const BranchingParams& b, bool filtered) {
    if (b.beta_perp > 0.2 || b.beta_perp_prime > 0.2)
        throw validation_error("first-order branching formula requires beta_perp, beta_perp' <= 0.2");
    if (filtered)
        return 1.0 - (double(n) - 0.5) * (b.beta_perp + b.beta_perp_prime) / 2.0;
    return 1.0 - double(n) * (3.0 * b.beta_perp + b.beta_perp_prime) / 2.0 +
           b.beta_perp_prime / 4.0;
}

double branching_first_order_from_ratio(long n, double branching_B) {
    return 1.0 - (double(n) - 0.5) / (2.0 * (branching_B + 1.0));
}

} // namespace tbfid
