#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvp/random.hpp"
#include "mvp/value_tables.hpp"

namespace mvp {

/// Reward law of a single state-action pair. Samples always lie in
/// [0, support_max()] ⊆ [0, 1].
class RewardDist {
public:
    enum class Kind { deterministic, bernoulli };

    static RewardDist deterministic(double value);
    /// Pays `scale` with probability p, else 0.
    static RewardDist bernoulli(double p, double scale);

    Kind kind() const { return kind_; }
    double mean() const;
    double support_max() const;
    double sample(RandomStream& rng) const;

    /// deterministic: value. bernoulli: p.
    double first_param() const { return a_; }
    /// bernoulli: scale. deterministic: unused.
    double second_param() const { return b_; }

    bool operator==(const RewardDist&) const = default;

private:
    RewardDist(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    Kind kind_ = Kind::deterministic;
    double a_ = 0.0;
    double b_ = 0.0;
};

/// Stationary finite-horizon MDP. Immutable once constructed; the constructor
/// enforces all structural invariants and throws SchemaError otherwise.
class TabularMDP {
public:
    static constexpr double kProbabilityTolerance = 1e-12;

    /// transitions is row-major [S][A][S]; rewards is row-major [S][A].
    TabularMDP(int num_states, int num_actions, int horizon,
               std::vector<double> transitions, std::vector<RewardDist> rewards,
               std::vector<double> initial_dist);

    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }
    int horizon() const { return horizon_; }

    std::span<const double> transition_row(int s, int a) const {
        return {transitions_.data() + row_offset(s, a), static_cast<std::size_t>(num_states_)};
    }
    double transition(int s, int a, int next) const { return transitions_[row_offset(s, a) + next]; }
    const RewardDist& reward(int s, int a) const { return rewards_[pair_index(s, a)]; }
    double mean_reward(int s, int a) const { return reward(s, a).mean(); }
    std::span<const double> initial_dist() const { return initial_dist_; }

    std::size_t pair_index(int s, int a) const {
        return static_cast<std::size_t>(s) * num_actions_ + a;
    }

    bool operator==(const TabularMDP&) const = default;

private:
    std::size_t row_offset(int s, int a) const { return pair_index(s, a) * num_states_; }

    int num_states_;
    int num_actions_;
    int horizon_;
    std::vector<double> transitions_;
    std::vector<RewardDist> rewards_;
    std::vector<double> initial_dist_;
};

/// Deterministic non-stationary policy: one action per (level, state).
struct Policy {
    int num_states = 0;
    int horizon = 0;
    std::vector<int> actions;  // [H * S]

    Policy() = default;
    Policy(int states, int horizon_len, int fill = 0)
        : num_states(states), horizon(horizon_len),
          actions(static_cast<std::size_t>(states) * horizon_len, fill) {}

    int& at(int h, int s) { return actions[static_cast<std::size_t>(h) * num_states + s]; }
    int at(int h, int s) const { return actions[static_cast<std::size_t>(h) * num_states + s]; }

    bool valid_for(const TabularMDP& mdp) const;
    bool operator==(const Policy&) const = default;
};

struct Step {
    int h;  // 0-based level
    int state;
    int action;
    double reward;
    int next_state;
};

struct Trajectory {
    std::vector<Step> steps;

    double total_reward() const;
};

Trajectory sample_episode(const TabularMDP& mdp, const Policy& policy, RandomStream& rng);

/// One (level, state, action) triple on a witness path.
struct PathStep {
    int h;
    int state;
    int action;
};

struct BoundCheck {
    /// Supremum over positive-probability trajectories of the summed reward
    /// support maxima.
    double max_total = 0.0;
    /// A path attaining max_total.
    std::vector<PathStep> witness;

    bool admitted() const { return max_total <= 1.0 + 1e-9; }
};

/// Backward DP over reward support maxima: M_h(s) = max_a (support_max(s,a)
/// + max over positive-probability successors of M_{h+1}), started from the
/// support of the initial distribution.
BoundCheck validate_bounded_total_reward(const TabularMDP& mdp);

/// Throws AssumptionViolation naming the witness path when the bound check
/// fails.
void require_bounded_total_reward(const TabularMDP& mdp);

/// Greedy policy with ties broken toward the lowest action index.
Policy make_greedy_policy(const ValueTables& tables);

/// Lowest index among the maxima of `row`.
int argmax_low(std::span<const double> row);

nlohmann::json to_json(const TabularMDP& mdp);
TabularMDP mdp_from_json(const nlohmann::json& doc);

}  // namespace mvp
