#include "doctest.h"

#include <random>

#include "tbfid/model.hpp"

using namespace tbfid;

namespace {

BranchingParams qd_waveguide_betas() {
    // beta_par closes the sum: 1 - 0.05 - 0.0025 - 0.0025.
    return {0.945, 0.05, 0.0025, 0.0025};
}

} // namespace

TEST_CASE("detection probabilities: identity when nothing is lost or filtered") {
    const DetectionProbs p = derive_detection_probs(qd_waveguide_betas(), {1.0, 1.0, 1.0});
    CHECK(p.p_par == doctest::Approx(0.945).epsilon(1e-14));
    CHECK(p.p_perp == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(p.p_par_prime == doctest::Approx(0.0025).epsilon(1e-14));
    CHECK(p.p_perp_prime == doctest::Approx(0.0025).epsilon(1e-14));
}

TEST_CASE("detection probabilities: lossless single path") {
    const BranchingParams b{1.0, 0.0, 0.0, 0.0};
    const CollectionParams c{0.7, 0.9, 0.4};
    const DetectionProbs p = derive_detection_probs(b, c);
    CHECK(p.p_par == doctest::Approx(0.7 * 0.9).epsilon(1e-14));
    CHECK(p.p_par_prime == doctest::Approx(1.0 - 0.7 * 0.9).epsilon(1e-14));
    CHECK(p.p_perp == 0.0);
    CHECK(p.p_perp_prime == 0.0);
}

TEST_CASE("detection probabilities: frequency filter on the diagonal photons") {
    const DetectionProbs p = derive_detection_probs(qd_waveguide_betas(), {1.0, 1.0, 0.02});
    CHECK(p.p_perp == doctest::Approx(0.001).epsilon(1e-12));
    CHECK(p.p_perp_prime == doctest::Approx(0.0515).epsilon(1e-12));
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("detection probabilities: closure and monotonicity over random tuples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        double b4[4] = {0.5 + 0.5 * u(rng), 0.2 * u(rng), 0.1 * u(rng), 0.1 * u(rng)};
        const double s = b4[0] + b4[1] + b4[2] + b4[3];
        const BranchingParams b{b4[0] / s, b4[1] / s, b4[2] / s, b4[3] / s};
        CollectionParams c;
        c.eta = 0.2 + 0.8 * u(rng);
        c.xi2 = 0.5 + 0.5 * u(rng);
        c.xi3 = c.xi2 * u(rng);
        const DetectionProbs p = derive_detection_probs(b, c);
        CHECK(std::abs(p.sum() - 1.0) < 1e-12);
        for (double v : {p.p_par, p.p_perp, p.p_par_prime, p.p_perp_prime}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        // p_par is nondecreasing in eta, xi2, beta_par.
        CollectionParams c_hi = c;
        c_hi.eta = std::min(1.0, c.eta + 0.1);
        CHECK(derive_detection_probs(b, c_hi).p_par >= p.p_par);
        c_hi = c;
        c_hi.xi2 = std::min(1.0, c.xi2 + 0.1);
        CHECK(derive_detection_probs(b, c_hi).p_par >= p.p_par);
    }
}

TEST_CASE("branching parameter validation") {
    std::vector<std::string> warnings;
    // A hair off closure: renormalized with a warning.
    BranchingParams nearly{0.95, 0.05, 2.5e-10, 0.0};
    const BranchingParams fixed = nearly.validated(&warnings);
    CHECK(warnings.size() == 1);
    CHECK(fixed.sum() == doctest::Approx(1.0).epsilon(1e-15));

    // The raw literature caption tuple does not close (sums to 1.045): rejected.
    BranchingParams caption{0.99, 0.05, 0.0025, 0.0025};
    CHECK_THROWS_AS((void)caption.validated(), validation_error);

    BranchingParams negative{-0.1, 0.5, 0.3, 0.3};
    CHECK_THROWS_AS((void)negative.validated(), validation_error);

    CollectionParams bad_filter{1.0, 0.5, 0.8};
    CHECK_THROWS_AS(bad_filter.validate(), validation_error);
}

TEST_CASE("branching ratio") {
    // Ratio of the quoted literature caption values (no closure assumed).
    CHECK(branching_ratio({0.99, 0.05, 0.0025, 0.0025}) ==
          doctest::Approx(18.9047619).epsilon(1e-9));
    CHECK(branching_ratio({0.5, 0.25, 0.0, 0.25}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(branching_ratio({0.99, 0.005, 0.0025, 0.0025}) ==
          doctest::Approx(132.3333333).epsilon(1e-9));
    CHECK(std::isinf(branching_ratio({1.0, 0.0, 0.0, 0.0})));
}

TEST_CASE("emitter validation and the gamma*T warning") {
    EmitterParams em;
    em.gamma = 3.2;
    em.t_bin = 4.0;
    std::vector<std::string> warnings;
    em.validate(&warnings);
    CHECK(warnings.empty());

    em.t_bin = 1.0; // gamma*T = 3.2 < 10
    em.validate(&warnings);
    CHECK(warnings.size() == 1);

    em.gamma = -1.0;
    CHECK_THROWS_AS(em.validate(), validation_error);
}

TEST_CASE("detuning unit conversion") {
    CHECK(delta_from_ghz(16.0) == doctest::Approx(2.0 * kPi * 16.0).epsilon(1e-15));
}
