#include "mvp/agent.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "mvp/baselines.hpp"
#include "mvp/errors.hpp"

namespace mvp {

BonusParams BonusParams::from_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw SchemaError("delta must lie in (0, 1)");
    BonusParams p;
    p.delta = delta;
    p.iota = std::log(2.0 / delta);
    return p;
}

std::vector<std::uint64_t> TriggerSet::members() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 1; m != 0 && m <= budget_ / 2; m <<= 1) out.push_back(m);
    return out;
}

std::string to_string(AgentKind kind) {
    switch (kind) {
        case AgentKind::mvp: return "mvp";
        case AgentKind::hoeffding_ucbvi: return "hoeffding_ucbvi";
        case AgentKind::greedy_no_bonus: return "greedy_no_bonus";
    }
    return "?";
}

AgentKind agent_kind_from_string(const std::string& name) {
    if (name == "mvp") return AgentKind::mvp;
    if (name == "hoeffding_ucbvi") return AgentKind::hoeffding_ucbvi;
    if (name == "greedy_no_bonus") return AgentKind::greedy_no_bonus;
    throw SchemaError("unknown agent '" + name + "'");
}

AgentState AgentState::fresh(int states, int actions, int horizon, double initial_value) {
    AgentState st;
    st.num_states = states;
    st.num_actions = actions;
    st.horizon = horizon;
    const auto pairs = static_cast<std::size_t>(states) * actions;
    st.visits.assign(pairs, 0);
    st.reward_since_trigger.assign(pairs, 0.0);
    st.frozen_visits.assign(pairs, 0);
    st.transition_counts.assign(pairs * states, 0);
    st.p_hat.assign(pairs * states, 0.0);
    st.r_hat.assign(pairs, 0.0);
    st.values = ValueTables(states, actions, horizon, initial_value);
    return st;
}

double variance(std::span<const double> p, std::span<const double> v) {
    assert(p.size() == v.size());
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        mean += p[i] * v[i];
        second += p[i] * v[i] * v[i];
    }
    return std::max(second - mean * mean, 0.0);
}

double monotone_f(std::span<const double> p, std::span<const double> v, double n, double iota,
                  const FConstants& k) {
    assert(p.size() == v.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) mean += p[i] * v[i];
    const double spread = k.c1 * std::sqrt(variance(p, v) * iota / n);
    return mean + std::max(spread, k.c2 * iota / n);
}

double compute_bonus(const AgentState& state, const BonusParams& params, int s, int a,
                     std::span<const double> v_next) {
    const std::size_t i = state.pair(s, a);
    const double n_bar = static_cast<double>(std::max<std::uint64_t>(state.frozen_visits[i], 1));
    const double iota = params.iota;
    return BonusParams::c1 * std::sqrt(variance(state.p_hat_row(s, a), v_next) * iota / n_bar) +
           BonusParams::c2 * std::sqrt(state.r_hat[i] * iota / n_bar) +
           BonusParams::c3 * iota / n_bar;
}

namespace {

double backup(const AgentState& state, const BonusParams& params, AgentKind kind, int s, int a,
              std::span<const double> v_next) {
    const auto row = state.p_hat_row(s, a);
    double expected = 0.0;
    for (std::size_t next = 0; next < row.size(); ++next) expected += row[next] * v_next[next];
    const double target = state.r_hat[state.pair(s, a)] + expected +
                          bonus_for(kind, state, params, s, a, v_next);
    return std::min(target, 1.0);
}

}  // namespace

std::vector<double> q_level(const AgentState& state, const BonusParams& params, AgentKind kind,
                            std::span<const double> v_next) {
    std::vector<double> row(static_cast<std::size_t>(state.num_states) * state.num_actions);
    for (int s = 0; s < state.num_states; ++s) {
        for (int a = 0; a < state.num_actions; ++a) {
            row[state.pair(s, a)] = backup(state, params, kind, s, a, v_next);
        }
    }
    return row;
}

void q_sweep(AgentState& state, const BonusParams& params, AgentKind kind) {
    ValueTables& t = state.values;
    for (int h = state.horizon - 1; h >= 0; --h) {
        const auto v_next = t.v_level(h + 1);
        for (int s = 0; s < state.num_states; ++s) {
            double best = 0.0;
            for (int a = 0; a < state.num_actions; ++a) {
                const double q = backup(state, params, kind, s, a, v_next);
                t.Q(h, s, a) = q;
                best = a == 0 ? q : std::max(best, q);
            }
            t.V(h, s) = best;
        }
    }
    state.triggered = false;
}

int act(const AgentState& state, int s, int h) {
    return argmax_low(state.values.q_row(h, s));
}

bool observe(AgentState& state, const TriggerSet& triggers, int s, int a, double r, int next) {
    const std::size_t i = state.pair(s, a);
    const std::size_t row = i * static_cast<std::size_t>(state.num_states);
    const std::uint64_t count = ++state.visits[i];
    state.reward_since_trigger[i] += r;
    ++state.transition_counts[row + static_cast<std::size_t>(next)];

    if (!triggers.contains(count)) return false;

    const double total = static_cast<double>(count);
    state.r_hat[i] = count >= 2 ? 2.0 * state.reward_since_trigger[i] / total
                                : state.reward_since_trigger[i];
    state.reward_since_trigger[i] = 0.0;
    for (int to = 0; to < state.num_states; ++to) {
        state.p_hat[row + to] = static_cast<double>(state.transition_counts[row + to]) / total;
    }
    state.frozen_visits[i] = count;
    state.triggered = true;
    return true;
}

bool end_episode(AgentState& state, const BonusParams& params, AgentKind kind) {
    if (!state.triggered) return false;
    q_sweep(state, params, kind);
    return true;
}

nlohmann::json to_json(const AgentState& state) {
    return {{"S", state.num_states},
            {"A", state.num_actions},
            {"H", state.horizon},
            {"N", state.visits},
            {"theta", state.reward_since_trigger},
            {"n", state.frozen_visits},
            {"N_trans", state.transition_counts},
            {"P_hat", state.p_hat},
            {"r_hat", state.r_hat},
            {"Q", state.values.q},
            {"V", state.values.v},
            {"triggered", state.triggered}};
}

Learner::Learner(AgentKind kind, int states, int actions, int horizon, std::uint64_t episodes,
                 double delta)
    : kind_(kind),
      params_(BonusParams::from_delta(delta)),
      triggers_(TriggerSet::for_run(episodes, horizon)),
      state_(AgentState::fresh(states, actions, horizon, initial_value_for(kind))) {}

bool Learner::observe(int s, int a, double r, int next) {
    ++counters_.observes;
    const bool fired = mvp::observe(state_, triggers_, s, a, r, next);
    if (fired) ++counters_.triggers;
    return fired;
}

bool Learner::end_episode() {
    ++counters_.episodes;
    const bool updated = mvp::end_episode(state_, params_, kind_);
    if (updated) {
        ++counters_.sweeps;
        counters_.cells_swept += static_cast<std::uint64_t>(state_.horizon) * state_.num_states *
                                 state_.num_actions;
        ++version_;
    }
    return updated;
}

}  // namespace mvp
