#pragma once

#include <cstdint>
#include <span>

namespace mvp::analysis {

/// Upper bound on a₁ for a sequence satisfying a_i ≤ λ1 and
/// a_i ≤ λ2 √(a_{i+1} + 2^{i+1} λ3) + λ4:
///   max{(λ2 + √(λ2² + λ4))², λ2 √(8 λ3) + λ4}.
double recursion_bound(double lambda1, double lambda2, double lambda3, double lambda4);

/// Length of the sequence covered by recursion_bound: ⌊log₂ λ1⌋ (0 when λ1 < 2).
int recursion_length(double lambda1);

/// True iff `a` (a₁..a_{i'}, zero-based in the span) meets the recursion
/// hypothesis, reading the term past the end as λ1.
bool recursion_hypothesis_holds(std::span<const double> a, double lambda1, double lambda2,
                                double lambda3, double lambda4);

/// Two-sided Bennett radius for the mean of n i.i.d. [0,1] variables with
/// known variance: √(2 var ln(2/δ) / n) + ln(2/δ) / n.
double bennet_radius(std::uint64_t n, double variance, double delta);

/// Empirical Bernstein radius (n ≥ 2, biased sample variance v̂):
/// √(2 v̂ ln(2/δ) / (n−1)) + 7 ln(2/δ) / (3(n−1)). Throws std::invalid_argument for n < 2.
double empirical_bernstein_radius(std::uint64_t n, double sample_variance, double delta);

/// Deviation threshold for a martingale with increments bounded by c and
/// predictable quadratic variation `total_variance`:
///   2√2 √(Var ln(1/δ)) + 2 √(ε ln(1/δ)) + 2c ln(1/δ).
/// The threshold is exceeded with probability at most
/// self_normalized_failure_probability(n, c, ε, δ).
double self_normalized_radius(double total_variance, double epsilon, double c, double delta);

/// 2 (log₂(n c² / ε) + 1) δ.
double self_normalized_failure_probability(std::uint64_t n, double c, double epsilon, double delta);

/// ⌈S A (log₂(K H) + 1)⌉: cap on the number of Q-table refreshes in a run.
std::uint64_t epoch_count_bound(std::uint64_t S, std::uint64_t A, std::uint64_t K, std::uint64_t H);

}  // namespace mvp::analysis
