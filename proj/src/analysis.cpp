#include "mvp/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace mvp::analysis {

double recursion_bound(double lambda1, double lambda2, double lambda3, double lambda4) {
    (void)lambda1;
    const double root = lambda2 + std::sqrt(lambda2 * lambda2 + lambda4);
    return std::max(root * root, lambda2 * std::sqrt(8.0 * lambda3) + lambda4);
}

int recursion_length(double lambda1) {
    if (!(lambda1 >= 2.0)) return 0;
    return static_cast<int>(std::floor(std::log2(lambda1)));
}

bool recursion_hypothesis_holds(std::span<const double> a, double lambda1, double lambda2,
                                double lambda3, double lambda4) {
    for (std::size_t idx = 0; idx < a.size(); ++idx) {
        const int i = static_cast<int>(idx) + 1;
        const double next = idx + 1 < a.size() ? a[idx + 1] : lambda1;
        const double cap = lambda2 * std::sqrt(next + std::ldexp(lambda3, i + 1)) + lambda4;
        if (a[idx] < 0.0 || a[idx] > lambda1 || a[idx] > cap) return false;
    }
    return true;
}

double bennet_radius(std::uint64_t n, double variance, double delta) {
    const double log_term = std::log(2.0 / delta);
    const double count = static_cast<double>(n);
    return std::sqrt(2.0 * variance * log_term / count) + log_term / count;
}

double empirical_bernstein_radius(std::uint64_t n, double sample_variance, double delta) {
    if (n < 2) throw std::invalid_argument("empirical Bernstein radius needs n >= 2");
    const double log_term = std::log(2.0 / delta);
    const double dof = static_cast<double>(n - 1);
    return std::sqrt(2.0 * sample_variance * log_term / dof) + 7.0 * log_term / (3.0 * dof);
}

double self_normalized_radius(double total_variance, double epsilon, double c, double delta) {
    const double log_term = std::log(1.0 / delta);
    return 2.0 * std::sqrt(2.0) * std::sqrt(total_variance * log_term) +
           2.0 * std::sqrt(epsilon * log_term) + 2.0 * c * log_term;
}

double self_normalized_failure_probability(std::uint64_t n, double c, double epsilon, double delta) {
    return 2.0 * (std::log2(static_cast<double>(n) * c * c / epsilon) + 1.0) * delta;
}

std::uint64_t epoch_count_bound(std::uint64_t S, std::uint64_t A, std::uint64_t K, std::uint64_t H) {
    const std::uint64_t steps = K * H;
    const std::uint64_t pairs = S * A;
    // Exact when K*H is a power of two; otherwise log₂ is irrational and the
    // ceiling is taken on the floating value.
    if (std::has_single_bit(steps)) {
        return pairs * (static_cast<std::uint64_t>(std::countr_zero(steps)) + 1);
    }
    return static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(pairs) * (std::log2(static_cast<double>(steps)) + 1.0)));
}

}  // namespace mvp::analysis
