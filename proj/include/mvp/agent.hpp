#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvp/mdp.hpp"
#include "mvp/value_tables.hpp"

namespace mvp {

/// Constants of the three-term Bernstein bonus, plus the confidence level.
struct BonusParams {
    static constexpr double c1 = 460.0 / 9.0;
    static constexpr double c2 = 2.0 * std::numbers::sqrt2;
    static constexpr double c3 = 544.0 / 9.0;

    double delta = 0.01;
    double iota = 0.0;  // ln(2/δ)

    /// Throws SchemaError unless 0 < δ < 1.
    static BonusParams from_delta(double delta);
};

/// Coefficients of the monotone surrogate f(p, v, n, ι). Overridable only so
/// that the property checks can be shown to catch a bad constant.
struct FConstants {
    double c1 = 20.0 / 3.0;
    double c2 = 400.0 / 9.0;
};

/// Visit counts at which a state-action pair refreshes its estimates:
/// {2^(i-1) : 2^i <= K*H}.
class TriggerSet {
public:
    explicit TriggerSet(std::uint64_t steps_budget) : budget_(steps_budget) {}
    static TriggerSet for_run(std::uint64_t episodes, int horizon) {
        return TriggerSet(episodes * static_cast<std::uint64_t>(horizon));
    }

    bool contains(std::uint64_t count) const {
        return count != 0 && (count & (count - 1)) == 0 && count <= budget_ / 2;
    }
    std::vector<std::uint64_t> members() const;
    std::uint64_t budget() const { return budget_; }

private:
    std::uint64_t budget_;
};

enum class AgentKind { mvp, hoeffding_ucbvi, greedy_no_bonus };

std::string to_string(AgentKind kind);
/// Throws SchemaError for unknown names.
AgentKind agent_kind_from_string(const std::string& name);

/// Learning state shared by MVP and the baselines. Pair-indexed arrays are
/// row-major [S][A]; transition arrays are [S][A][S].
struct AgentState {
    int num_states = 0;
    int num_actions = 0;
    int horizon = 0;

    std::vector<std::uint64_t> visits;         // N(s,a)
    std::vector<double> reward_since_trigger;  // θ(s,a)
    std::vector<std::uint64_t> frozen_visits;  // n(s,a), count at last trigger
    std::vector<std::uint64_t> transition_counts;
    std::vector<double> p_hat;
    std::vector<double> r_hat;
    ValueTables values;  // Q, V over levels 0..H
    bool triggered = false;

    /// Zero counters and estimates; Q and V set to `initial_value` below the
    /// terminal row.
    static AgentState fresh(int states, int actions, int horizon, double initial_value);

    std::size_t pair(int s, int a) const { return static_cast<std::size_t>(s) * num_actions + a; }
    std::span<const double> p_hat_row(int s, int a) const {
        return {p_hat.data() + pair(s, a) * num_states, static_cast<std::size_t>(num_states)};
    }

    bool operator==(const AgentState&) const = default;
};

/// Σ p v² − (p·v)², floored at zero.
double variance(std::span<const double> p, std::span<const double> v);

/// p·v + max{c1 √(𝕍(p,v) ι / n), c2 ι / n}.
double monotone_f(std::span<const double> p, std::span<const double> v, double n, double iota,
                  const FConstants& k = {});

/// b(s,a) = c1 √(𝕍(P̂, V_next) ι / n̄) + c2 √(r̂ ι / n̄) + c3 ι / n̄ with
/// n̄ = max{n(s,a), 1}.
double compute_bonus(const AgentState& state, const BonusParams& params, int s, int a,
                     std::span<const double> v_next);

/// Full backward sweep over every (h, s, a):
/// Q_h = min{r̂ + P̂ V_{h+1} + bonus, 1}, V_h = max_a Q_h. Clears `triggered`.
void q_sweep(AgentState& state, const BonusParams& params, AgentKind kind = AgentKind::mvp);

/// One level of the sweep, [S][A], computed from caller-provided next-level
/// values without touching the state.
std::vector<double> q_level(const AgentState& state, const BonusParams& params, AgentKind kind,
                            std::span<const double> v_next);

/// argmax_a Q_h(s, a), lowest index on ties.
int act(const AgentState& state, int s, int h);

/// Records one transition. When the new visit count is in the trigger set,
/// refreshes r̂ from the rewards seen since the previous trigger, refreshes
/// P̂ from all transitions, freezes n and raises `triggered`.
bool observe(AgentState& state, const TriggerSet& triggers, int s, int a, double r, int next);

/// Runs q_sweep iff a trigger fired during the episode.
bool end_episode(AgentState& state, const BonusParams& params, AgentKind kind = AgentKind::mvp);

/// Field-by-field JSON mirror for audit tooling.
nlohmann::json to_json(const AgentState& state);

/// Counts of how often each stage of the learning loop ran.
struct PathCounters {
    std::uint64_t observes = 0;
    std::uint64_t triggers = 0;
    std::uint64_t episodes = 0;
    std::uint64_t sweeps = 0;
    std::uint64_t cells_swept = 0;

    bool operator==(const PathCounters&) const = default;
};

/// One agent in a K-episode run: state, bonus rule, constants and trigger set.
class Learner {
public:
    Learner(AgentKind kind, int states, int actions, int horizon, std::uint64_t episodes, double delta);

    int act(int s, int h) const { return mvp::act(state_, s, h); }
    bool observe(int s, int a, double r, int next);
    bool end_episode();

    AgentKind kind() const { return kind_; }
    const AgentState& state() const { return state_; }
    const BonusParams& params() const { return params_; }
    const TriggerSet& triggers() const { return triggers_; }
    const PathCounters& counters() const { return counters_; }
    /// Bumped after each sweep; identifies the current greedy policy.
    std::uint64_t version() const { return version_; }

private:
    AgentKind kind_;
    BonusParams params_;
    TriggerSet triggers_;
    AgentState state_;
    PathCounters counters_;
    std::uint64_t version_ = 0;
};

}  // namespace mvp
