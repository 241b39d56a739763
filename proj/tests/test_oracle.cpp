#include "doctest.h"

#include <cmath>
#include <random>

#include "tbfid/branching.hpp"
#include "tbfid/kernel.hpp"
#include "tbfid/oracle.hpp"

using namespace tbfid;

namespace {

using cd = std::complex<double>;

constexpr double kInvSqrt2 = 0.70710678118654752440;

DetectionProbs random_probs(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double b[4] = {0.5 + 0.5 * u(rng), 0.2 * u(rng), 0.1 * u(rng), 0.1 * u(rng)};
    const double s = b[0] + b[1] + b[2] + b[3];
    const BranchingParams beta{b[0] / s, b[1] / s, b[2] / s, b[3] / s};
    CollectionParams c;
    c.eta = 0.3 + 0.7 * u(rng);
    c.xi2 = 0.8 + 0.2 * u(rng);
    c.xi3 = c.xi2 * u(rng);
    return derive_detection_probs(beta, c);
}

} // namespace

TEST_CASE("ideal round: GHZ chain has exactly two components") {
    for (int n : {1, 3, 8}) {
        const SparseState st = run_protocol(ideal_round(StateKind::GHZ), n);
        REQUIRE(st.n_terms() == 2);
        for (const auto& [label, amp] : st.amps)
            CHECK(std::abs(amp - cd(kInvSqrt2, 0.0)) < 1e-14);
        CHECK(conditional_fidelity(st, {StateKind::GHZ, n}).fidelity ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("ideal round: single-photon cluster state") {
    const SparseState st = run_protocol(ideal_round(StateKind::Cluster), 1);
    REQUIRE(st.n_terms() == 4);
    // (|0,l> + |0,e> + |1,e> - |1,l>) / 2
    const SymbolSet early{ModeSymbol::det_res_early};
    const SymbolSet late{ModeSymbol::det_res_late};
    CHECK(st.amps.at({0, {late}}).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(st.amps.at({0, {early}}).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(st.amps.at({1, {early}}).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(st.amps.at({1, {late}}).real() == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("branching round: perfect probabilities reduce to the ideal round") {
    const DetectionProbs perfect{1.0, 0.0, 0.0, 0.0};
    for (StateKind kind : {StateKind::GHZ, StateKind::Cluster}) {
        const SparseState real = run_protocol(branching_round(perfect, kind), 3);
        const SparseState ideal = run_protocol(ideal_round(kind), 3);
        REQUIRE(real.n_terms() == ideal.n_terms());
        for (const auto& [label, amp] : ideal.amps)
            CHECK(std::abs(real.amps.at(label) - amp) < 1e-14);
    }
}

TEST_CASE("branching round: probability conservation per input spin") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const DetectionProbs p = random_probs(rng);
        const RoundOperator op = branching_round(p, StateKind::GHZ);
        double w[2] = {0.0, 0.0};
        for (const RoundBranch& br : op.branches) w[br.spin_in] += std::norm(br.amp);
        CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("branching round: the 14 components of a single round") {
    std::mt19937_64 rng(4);
    const DetectionProbs p = random_probs(rng);
    const SparseState st = run_protocol(branching_round(p, StateKind::GHZ), 1);
    CHECK(st.n_terms() == 14);
    // Double diagonal loss carries amplitude p_perp_prime (two sqrt factors).
    const SymbolSet both{ModeSymbol::lost_perp_early, ModeSymbol::lost_perp_late};
    const StateLabel lbl{1, {both}}; // spin 0 pre-rotation, X -> 1
    CHECK(std::abs(st.amps.at(lbl)) ==
          doctest::Approx(kInvSqrt2 * p.p_perp_prime).epsilon(1e-12));
}

TEST_CASE("run protocol: norm preservation and the state cap") {
    std::mt19937_64 rng(9);
    const DetectionProbs p = random_probs(rng);
    for (StateKind kind : {StateKind::GHZ, StateKind::Cluster}) {
        const SparseState st = run_protocol(branching_round(p, kind), 4);
        CHECK(st.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)run_protocol(branching_round(p, StateKind::GHZ), 4, 100),
                    validation_error);
}

TEST_CASE("oracle equals the transfer-matrix success and tracks the closed forms") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 8; ++t) {
        const DetectionProbs p = random_probs(rng);
        for (StateKind kind : {StateKind::GHZ, StateKind::Cluster}) {
            for (int n = 1; n <= 3; ++n) {
                const TargetState target{kind, n};
                const OracleResult o =
                    conditional_fidelity(run_protocol(branching_round(p, kind), n), target);
                const FidelityReport rep = branching_fidelity(p, target);
                CHECK(std::abs(o.success - rep.success) < 1e-12);
                // The closed forms keep only the leading protocol chains; the
                // full model differs at the mixed-chain order.
                CHECK(std::abs(o.fidelity - rep.exact) < 0.02);
            }
        }
    }
}

TEST_CASE("truncated operator enumeration equals the closed-form numerator exactly") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 8; ++t) {
        const DetectionProbs p = random_probs(rng);
        for (StateKind kind : {StateKind::GHZ, StateKind::Cluster}) {
            for (int n = 1; n <= 4; ++n) {
                const TargetState target{kind, n};
                std::vector<RoundOperator> ops;
                for (int j = 0; j < n; ++j)
                    ops.push_back(truncated_branching_round(p, kind, j == 0));
                const SparseState st = run_protocol(ops);
                const OracleResult o = conditional_fidelity(st, target);
                const FidelityReport rep = branching_fidelity(p, target);
                CHECK(std::abs(o.fidelity * o.success - rep.unconditional) < 1e-12);
            }
        }
    }
}

TEST_CASE("level-drift phases leave the state ideal") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ph(-kPi, kPi);
    for (StateKind kind : {StateKind::GHZ, StateKind::Cluster}) {
        for (int n = 1; n <= 6; ++n) {
            std::vector<RoundOperator> ops;
            for (int j = 0; j < n; ++j) ops.push_back(ideal_round_phased(kind, ph(rng)));
            const OracleResult o =
                conditional_fidelity(run_protocol(ops), {kind, n});
            CHECK(std::abs(o.fidelity - 1.0) < 1e-12);
            CHECK(std::abs(o.success - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("stabilizer check: ideal cluster states") {
    for (int n = 1; n <= 6; ++n) {
        const SparseState st = run_protocol(ideal_round(StateKind::Cluster), n);
        const std::vector<double> evs = stabilizer_check(st, n);
        REQUIRE(evs.size() == std::size_t(n + 1));
        for (double e : evs) CHECK(std::abs(e - 1.0) < 1e-12);
    }
}

TEST_CASE("stabilizer check: the GHZ state is not the cluster state") {
    const SparseState st = run_protocol(ideal_round(StateKind::GHZ), 2);
    const std::vector<double> evs = stabilizer_check(st, 2);
    CHECK(std::abs(evs[1] - 1.0) > 0.5); // middle generator: <ZXZ> = 0 on GHZ
}

TEST_CASE("stabilizer check rejects non-ideal states") {
    std::mt19937_64 rng(2);
    const DetectionProbs p = random_probs(rng);
    const SparseState st = run_protocol(branching_round(p, StateKind::Cluster), 2);
    CHECK_THROWS_AS((void)stabilizer_check(st, 2), validation_error);
}

TEST_CASE("two-qubit decomposition identity") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        const DetectionProbs p = random_probs(rng);
        const DecompositionReport rep = decomposition_check(p);
        CHECK(rep.residual < 1e-12);
        CHECK(rep.two_qubit_error_prob ==
              doctest::Approx(p.p_perp_prime * p.p_par).epsilon(1e-15));
    }
    const DecompositionReport none = decomposition_check({1.0, 0.0, 0.0, 0.0});
    CHECK(none.residual < 1e-15);
    CHECK(none.two_qubit_error_prob == 0.0);
}

TEST_CASE("kernel oracle agrees with the closed-form kernels") {
    EmitterParams em;
    em.gamma = 1.0;
    em.t_bin = 20.0;

    em.gamma_d = 0.0;
    CHECK(kernel_oracle(KernelModel::phonon, em, 0.0, {StateKind::GHZ, 3}) ==
          doctest::Approx(1.0).epsilon(1e-14));

    em.gamma_d = 0.025; // gamma_d / gamma = 0.05 -> I = 1/1.1
    const double ind = indistinguishability(em.gamma, em.gamma_d);
    const double oracle = kernel_oracle(KernelModel::phonon, em, 0.0, {StateKind::GHZ, 3});
    CHECK(oracle == doctest::Approx((1.0 + ind * ind * ind) / 2.0).epsilon(1e-12));

    for (double d21 : {0.37, -4.2, 11.0})
        CHECK(kernel_oracle(KernelModel::overhauser, em, d21, {StateKind::Cluster, 4}) ==
              doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kernel oracle matches phonon closed forms across N and both targets") {
    EmitterParams em;
    em.gamma = 1.0;
    em.t_bin = 20.0;
    for (double gd : {0.01, 0.05, 0.12}) {
        em.gamma_d = gd;
        for (int n = 1; n <= 5; ++n) {
            for (StateKind kind : {StateKind::GHZ, StateKind::Cluster}) {
                const TargetState target{kind, n};
                const double closed = phonon_fidelity(em, target).exact;
                const double oracle = kernel_oracle(KernelModel::phonon, em, 0.0, target);
                CHECK(std::abs(closed - oracle) < 1e-12);
            }
        }
    }
}

TEST_CASE("conditional fidelity requires a detectable state") {
    const DetectionProbs lost{0.0, 0.0, 0.5, 0.5};
    const SparseState st = run_protocol(branching_round(lost, StateKind::GHZ), 2);
    CHECK_THROWS_AS((void)conditional_fidelity(st, {StateKind::GHZ, 2}), postselect_error);
}
