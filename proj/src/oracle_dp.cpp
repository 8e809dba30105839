#include "mvp/oracle_dp.hpp"

#include <cassert>

namespace mvp {

namespace {

double expected_next(const TabularMDP& mdp, int s, int a, std::span<const double> next_values) {
    const auto row = mdp.transition_row(s, a);
    double total = 0.0;
    for (std::size_t next = 0; next < row.size(); ++next) total += row[next] * next_values[next];
    return total;
}

template <typename ChooseAction>
ValueTables backward_induction(const TabularMDP& mdp, ChooseAction choose) {
    ValueTables t(mdp.num_states(), mdp.num_actions(), mdp.horizon());
    for (int h = mdp.horizon() - 1; h >= 0; --h) {
        const auto next_values = t.v_level(h + 1);
        for (int s = 0; s < mdp.num_states(); ++s) {
            for (int a = 0; a < mdp.num_actions(); ++a) {
                t.Q(h, s, a) = mdp.mean_reward(s, a) + expected_next(mdp, s, a, next_values);
            }
            t.V(h, s) = choose(t, h, s);
        }
    }
    return t;
}

}  // namespace

ValueTables optimal_values(const TabularMDP& mdp) {
    return backward_induction(mdp, [](const ValueTables& t, int h, int s) {
        const auto row = t.q_row(h, s);
        return row[static_cast<std::size_t>(argmax_low(row))];
    });
}

ValueTables evaluate_policy(const TabularMDP& mdp, const Policy& policy) {
    assert(policy.valid_for(mdp));
    return backward_induction(mdp, [&](const ValueTables& t, int h, int s) {
        return t.Q(h, s, policy.at(h, s));
    });
}

double initial_value(const TabularMDP& mdp, const ValueTables& tables) {
    const auto mu = mdp.initial_dist();
    double total = 0.0;
    for (int s = 0; s < mdp.num_states(); ++s) total += mu[s] * tables.V(0, s);
    return total;
}

}  // namespace mvp
