#include "tbfid/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tbfid {

namespace {

void check_unit_interval(double v, const char* field) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << field << " = " << v << " outside [0, 1]";
        throw validation_error(os.str());
    }
}

} // namespace

void EmitterParams::validate(std::vector<std::string>* warnings) const {
    if (!(gamma > 0.0)) throw validation_error("gamma must be > 0");
    if (!(gamma_d >= 0.0)) throw validation_error("gamma_d must be >= 0");
    if (!(delta > 0.0)) throw validation_error("delta must be > 0");
    if (!(t_bin > 0.0)) throw validation_error("t_bin must be > 0");
    if (gamma * t_bin < 10.0 && warnings) {
        std::ostringstream os;
        os << "gamma * t_bin = " << gamma * t_bin
           << " < 10: outside the gamma*T >> 1 regime, exp(-gamma*T/2) terms "
              "are not negligible";
        warnings->push_back(os.str());
    }
}

BranchingParams BranchingParams::validated(std::vector<std::string>* warnings) const {
    check_unit_interval(beta_par, "beta_par");
    check_unit_interval(beta_perp, "beta_perp");
    check_unit_interval(beta_par_prime, "beta_par_prime");
    check_unit_interval(beta_perp_prime, "beta_perp_prime");
    const double s = sum();
    if (std::abs(s - 1.0) <= kProbSumTol) return *this;
    if (std::abs(s - 1.0) <= kProbSumRenorm) {
        if (warnings) {
            std::ostringstream os;
            os << "branching probabilities sum to " << s << "; renormalizing";
            warnings->push_back(os.str());
        }
        BranchingParams r = *this;
        r.beta_par /= s;
        r.beta_perp /= s;
        r.beta_par_prime /= s;
        r.beta_perp_prime /= s;
        return r;
    }
    std::ostringstream os;
    os << "branching probabilities must sum to 1, got " << s;
    throw validation_error(os.str());
}

void CollectionParams::validate() const {
    check_unit_interval(eta, "eta");
    check_unit_interval(xi2, "xi2");
    check_unit_interval(xi3, "xi3");
    check_unit_interval(eta2(), "eta2 = eta*xi2");
    check_unit_interval(eta3(), "eta3 = eta*xi3");
    if (xi3 > xi2 + kProbSumTol)
        throw validation_error("filtered configuration requires xi3 <= xi2");
}

DetectionProbs derive_detection_probs(const BranchingParams& b_in, const CollectionParams& c,
                                      std::vector<std::string>* warnings) {
    const BranchingParams b = b_in.validated(warnings);
    c.validate();
    DetectionProbs p;
    p.p_par = c.eta2() * b.beta_par;
    p.p_perp = c.eta3() * b.beta_perp;
    p.p_par_prime = b.beta_par_prime + (1.0 - c.eta2()) * b.beta_par;
    p.p_perp_prime = b.beta_perp_prime + (1.0 - c.eta3()) * b.beta_perp;
    return p;
}

double branching_ratio(const BranchingParams& b) {
    const double den = b.beta_perp + b.beta_perp_prime;
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    return (b.beta_par + b.beta_par_prime) / den;
}

} // namespace tbfid
