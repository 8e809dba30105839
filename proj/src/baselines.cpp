#include "mvp/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace mvp {

double hoeffding_bonus(std::uint64_t n, double iota) {
    const double n_bar = static_cast<double>(std::max<std::uint64_t>(n, 1));
    return std::sqrt(iota / (2.0 * n_bar));
}

double bonus_for(AgentKind kind, const AgentState& state, const BonusParams& params, int s, int a,
                 std::span<const double> v_next) {
    switch (kind) {
        case AgentKind::mvp: return compute_bonus(state, params, s, a, v_next);
        case AgentKind::hoeffding_ucbvi:
            return hoeffding_bonus(state.frozen_visits[state.pair(s, a)], params.iota);
        case AgentKind::greedy_no_bonus: return 0.0;
    }
    return 0.0;
}

double initial_value_for(AgentKind kind) {
    return kind == AgentKind::greedy_no_bonus ? 0.0 : 1.0;
}

}  // namespace mvp
