#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvp/agent.hpp"

namespace mvp::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    std::string detail;
    /// First failing input, when there is one.
    nlohmann::json counterexample;
};

/// Random single-coordinate increases of v never lower f (relative slack 1e-12).
CheckResult f_monotonicity(std::uint64_t trials, std::uint64_t seed, const FConstants& k = {});

/// f(p,v,n,ι) ≥ p·v + 2√(𝕍(p,v)ι/n) + 14ι/(3n) (slack 1e-12).
CheckResult f_lower_bound(std::uint64_t trials, std::uint64_t seed, const FConstants& k = {});

/// Sequences built backward to satisfy the recursion hypothesis never push a₁
/// past recursion_bound.
CheckResult recursion_bound_fuzz(std::uint64_t trials, std::uint64_t seed);

/// Bernoulli(0.3) means fall inside the empirical Bernstein radius in at least
/// 1 − δ − 0.01 of replications, for n ∈ {4, 16, 64} and δ ∈ {0.05, 0.01}.
CheckResult empirical_bernstein_coverage(std::uint64_t replications, std::uint64_t seed);

/// Centered Bernoulli random walks exceed the self-normalized threshold no
/// more often than its stated failure probability (+0.01).
CheckResult self_normalized_coverage(std::uint64_t replications, std::uint64_t seed);

/// MVP on a random Dirichlet MDP (S=5, A=2, H=10) for `episodes`: every
/// reward estimate is reproduced from raw samples and no sample carries total
/// weight above 2.
CheckResult reward_weights(std::uint64_t episodes, std::uint64_t seed);

/// Two identical RiverSwim runs give byte-identical CSV, and each Q-refresh
/// count stays within the epoch bound.
CheckResult replay_and_epoch_bound(std::uint64_t episodes, std::uint64_t seed);

struct SuiteOptions {
    FConstants f_constants{};
    std::uint64_t seed = 7;
};

/// Every check above at full size.
std::vector<CheckResult> run_suite(const SuiteOptions& options = {});

}  // namespace mvp::verify
