#include <gtest/gtest.h>

#include <cmath>

#include "mvp/environments.hpp"
#include "mvp/oracle_dp.hpp"
#include "test_support.hpp"

using namespace mvp;

TEST(OptimalValues, MatchesPolicyEnumeration) {
    RandomStream rng(101);
    for (int inst = 0; inst < 25; ++inst) {
        const auto mdp = reference::random_mdp(rng, 3, 2, 3);
        const auto dp = optimal_values(mdp);
        const auto brute = reference::brute_force_optimal_start_values(mdp);
        for (int s = 0; s < 3; ++s) EXPECT_NEAR(dp.V(0, s), brute[s], 1e-12);
    }
}

TEST(OptimalValues, BanditIsBestArmMean) {
    const auto mdp = generate({.family = EnvFamily::bandit, .num_states = 2, .num_actions = 5, .horizon = 1, .seed = 4});
    const auto q = optimal_values(mdp);
    for (int s = 0; s < 2; ++s) {
        double best = 0.0;
        for (int a = 0; a < 5; ++a) best = std::max(best, mdp.mean_reward(s, a));
        EXPECT_EQ(q.V(0, s), best);
    }
}

TEST(OptimalValues, TwoStateClosedForm) {
    // State 0: action 0 pays 0.1 and stays, action 1 pays 0 and moves to
    // state 1, which pays 0.25 forever. Jumping first is worth 0.25 (H-1)
    // versus 0.1 H for staying.
    const int H = 4;
    TabularMDP mdp(2, 2, H, {1, 0, 0, 1, 0, 1, 0, 1},
                   {RewardDist::deterministic(0.1), RewardDist::deterministic(0.0), RewardDist::deterministic(0.25),
                    RewardDist::deterministic(0.25)},
                   {1.0, 0.0});
    const auto q = optimal_values(mdp);
    EXPECT_DOUBLE_EQ(q.V(0, 0), 0.75);
    EXPECT_DOUBLE_EQ(q.V(3, 0), 0.1);
    EXPECT_EQ(make_greedy_policy(q).at(0, 0), 1);
    EXPECT_EQ(make_greedy_policy(q).at(3, 0), 0);
}

TEST(EvaluatePolicy, MatchesPathExpansion) {
    RandomStream rng(7);
    for (int inst = 0; inst < 25; ++inst) {
        const auto mdp = reference::random_mdp(rng, 3, 3, 4);
        const auto pi = reference::random_policy(rng, 3, 3, 4);
        const auto t = evaluate_policy(mdp, pi);
        for (int h = 0; h < 4; ++h)
            for (int s = 0; s < 3; ++s) EXPECT_NEAR(t.V(h, s), reference::path_value(mdp, pi, h, s), 1e-12);
    }
}

TEST(EvaluatePolicy, OptimalPolicyAttainsOptimum) {
    RandomStream rng(19);
    for (int inst = 0; inst < 10; ++inst) {
        const auto mdp = reference::random_mdp(rng, 5, 3, 6);
        const auto star = optimal_values(mdp);
        const auto ev = evaluate_policy(mdp, make_greedy_policy(star));
        for (int h = 0; h <= 6; ++h)
            for (int s = 0; s < 5; ++s) EXPECT_NEAR(ev.V(h, s), star.V(h, s), 1e-14);
        const auto other = evaluate_policy(mdp, reference::random_policy(rng, 5, 3, 6));
        for (int s = 0; s < 5; ++s) EXPECT_LE(other.V(0, s), star.V(0, s) + 1e-15);
    }
}

TEST(EvaluatePolicy, MonteCarloAgrees) {
    const auto mdp = generate({.family = EnvFamily::riverswim, .num_states = 4, .horizon = 6});
    const auto pi = make_greedy_policy(optimal_values(mdp));
    const double exact = initial_value(mdp, evaluate_policy(mdp, pi));
    RandomStream rng(77);
    const int reps = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < reps; ++i) {
        const double g = sample_episode(mdp, pi, rng).total_reward();
        sum += g;
        sq += g * g;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sq / reps - mean * mean) / reps);
    EXPECT_NEAR(mean, exact, 5 * se);
}

TEST(InitialValue, WeightsByStartDistribution) {
    TabularMDP mdp(2, 1, 1, {1, 0, 0, 1}, {RewardDist::deterministic(0.2), RewardDist::deterministic(0.6)},
                   {0.25, 0.75});
    EXPECT_DOUBLE_EQ(initial_value(mdp, optimal_values(mdp)), 0.25 * 0.2 + 0.75 * 0.6);
}

TEST(ValueTables, TerminalRowIsZero) {
    const auto t = optimal_values(generate({.family = EnvFamily::chain, .horizon = 3}));
    for (int s = 0; s < 5; ++s) {
        EXPECT_EQ(t.V(3, s), 0.0);
        for (int a = 0; a < 2; ++a) EXPECT_EQ(t.Q(3, s, a), 0.0);
    }
}
