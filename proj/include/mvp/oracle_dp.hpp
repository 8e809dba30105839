#pragma once

#include "mvp/mdp.hpp"
#include "mvp/value_tables.hpp"

namespace mvp {

/// Exact Q*, V* by backward induction on the true model. No clipping.
ValueTables optimal_values(const TabularMDP& mdp);

/// Exact Q^π, V^π. Q^π_h(s,a) is the value of taking a at (h,s) and then
/// following π; V^π_h(s) = Q^π_h(s, π_h(s)).
ValueTables evaluate_policy(const TabularMDP& mdp, const Policy& policy);

/// E_{s ~ μ}[V_1(s)].
double initial_value(const TabularMDP& mdp, const ValueTables& tables);

}  // namespace mvp
