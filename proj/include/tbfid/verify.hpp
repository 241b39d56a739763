#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tbfid {

struct SuiteResult {
    std::string name;
    bool pass = false;
    double max_residual = 0.0;
    std::string detail;  ///< worst-case tuple or bound description
};

struct VerifyOptions {
    std::uint64_t seed = 20210517;
    int tuples = 50;              ///< randomized parameter tuples per suite
    bool mutate_branching = false; ///< corrupt the closed form (self-test of the suite)
};

/// Cross-checks every analytic formula against the enumeration oracle and the
/// structural identities. Deterministic for a fixed seed.
std::vector<SuiteResult> run_verification(const VerifyOptions& opt = {});

} // namespace tbfid
