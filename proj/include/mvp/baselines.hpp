#pragma once

#include <cstdint>

#include "mvp/agent.hpp"

namespace mvp {

/// Hoeffding radius on the total-reward scale: √(ι / (2 max{n, 1})).
double hoeffding_bonus(std::uint64_t n, double iota);

/// Bonus the given agent kind adds to cell (s, a) at the level whose next
/// values are `v_next`. Zero for greedy_no_bonus.
double bonus_for(AgentKind kind, const AgentState& state, const BonusParams& params, int s, int a,
                 std::span<const double> v_next);

/// Initial Q and V: 1 for the optimistic agents, 0 for greedy_no_bonus.
double initial_value_for(AgentKind kind);

}  // namespace mvp
