#include "mvp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mvp/errors.hpp"
#include "mvp/json_util.hpp"

namespace mvp {

namespace {

void check_probability_vector(std::span<const double> p, const std::string& what) {
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw SchemaError(what + " has a negative or non-finite entry");
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > TabularMDP::kProbabilityTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << what << " sums to " << sum << ", not 1";
        throw SchemaError(os.str());
    }
}

}  // namespace

RewardDist RewardDist::deterministic(double value) {
    if (!(value >= 0.0 && value <= 1.0)) throw SchemaError("deterministic reward outside [0,1]");
    return RewardDist(Kind::deterministic, value, 0.0);
}

RewardDist RewardDist::bernoulli(double p, double scale) {
    if (!(p >= 0.0 && p <= 1.0)) throw SchemaError("bernoulli reward probability outside [0,1]");
    if (!(scale >= 0.0 && scale <= 1.0)) throw SchemaError("bernoulli reward scale outside [0,1]");
    return RewardDist(Kind::bernoulli, p, scale);
}

double RewardDist::mean() const {
    return kind_ == Kind::deterministic ? a_ : a_ * b_;
}

double RewardDist::support_max() const {
    if (kind_ == Kind::deterministic) return a_;
    return a_ > 0.0 ? b_ : 0.0;
}

double RewardDist::sample(RandomStream& rng) const {
    if (kind_ == Kind::deterministic) return a_;
    return rng.bernoulli(a_) ? b_ : 0.0;
}

TabularMDP::TabularMDP(int num_states, int num_actions, int horizon,
                       std::vector<double> transitions, std::vector<RewardDist> rewards,
                       std::vector<double> initial_dist)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)),
      initial_dist_(std::move(initial_dist)) {
    if (num_states_ < 1 || num_actions_ < 1 || horizon_ < 1) {
        throw SchemaError("S, A and H must all be at least 1");
    }
    const auto pairs = static_cast<std::size_t>(num_states_) * num_actions_;
    if (transitions_.size() != pairs * num_states_) throw SchemaError("transition array has wrong size");
    if (rewards_.size() != pairs) throw SchemaError("reward array has wrong size");
    if (initial_dist_.size() != static_cast<std::size_t>(num_states_)) {
        throw SchemaError("initial distribution has wrong size");
    }
    for (int s = 0; s < num_states_; ++s) {
        for (int a = 0; a < num_actions_; ++a) {
            check_probability_vector(transition_row(s, a),
                                     "P[" + std::to_string(s) + "][" + std::to_string(a) + "]");
        }
    }
    check_probability_vector(initial_dist_, "mu");
}

bool Policy::valid_for(const TabularMDP& mdp) const {
    if (num_states != mdp.num_states() || horizon != mdp.horizon()) return false;
    if (actions.size() != static_cast<std::size_t>(num_states) * horizon) return false;
    return std::all_of(actions.begin(), actions.end(),
                       [&](int a) { return a >= 0 && a < mdp.num_actions(); });
}

double Trajectory::total_reward() const {
    double total = 0.0;
    for (const auto& step : steps) total += step.reward;
    return total;
}

Trajectory sample_episode(const TabularMDP& mdp, const Policy& policy, RandomStream& rng) {
    assert(policy.valid_for(mdp));
    Trajectory traj;
    traj.steps.reserve(static_cast<std::size_t>(mdp.horizon()));
    int s = rng.categorical(mdp.initial_dist());
    for (int h = 0; h < mdp.horizon(); ++h) {
        const int a = policy.at(h, s);
        const double r = mdp.reward(s, a).sample(rng);
        const int next = rng.categorical(mdp.transition_row(s, a));
        traj.steps.push_back({h, s, a, r, next});
        s = next;
    }
    return traj;
}

BoundCheck validate_bounded_total_reward(const TabularMDP& mdp) {
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    const int H = mdp.horizon();
    // best[h][s], with the maximizing action and successor for witness recovery.
    std::vector<double> best(static_cast<std::size_t>(H + 1) * S, 0.0);
    std::vector<int> best_action(static_cast<std::size_t>(H) * S, 0);
    std::vector<int> best_next(static_cast<std::size_t>(H) * S, 0);
    auto at = [S](int h, int s) { return static_cast<std::size_t>(h) * S + s; };

    for (int h = H - 1; h >= 0; --h) {
        for (int s = 0; s < S; ++s) {
            double top = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < A; ++a) {
                double tail = -std::numeric_limits<double>::infinity();
                int tail_state = 0;
                const auto row = mdp.transition_row(s, a);
                for (int next = 0; next < S; ++next) {
                    if (row[next] > 0.0 && best[at(h + 1, next)] > tail) {
                        tail = best[at(h + 1, next)];
                        tail_state = next;
                    }
                }
                const double value = mdp.reward(s, a).support_max() + tail;
                if (value > top) {
                    top = value;
                    best_action[at(h, s)] = a;
                    best_next[at(h, s)] = tail_state;
                }
            }
            best[at(h, s)] = top;
        }
    }

    BoundCheck result;
    result.max_total = -std::numeric_limits<double>::infinity();
    int start = 0;
    const auto mu = mdp.initial_dist();
    for (int s = 0; s < S; ++s) {
        if (mu[s] > 0.0 && best[at(0, s)] > result.max_total) {
            result.max_total = best[at(0, s)];
            start = s;
        }
    }
    int s = start;
    for (int h = 0; h < H; ++h) {
        result.witness.push_back({h, s, best_action[at(h, s)]});
        s = best_next[at(h, s)];
    }
    return result;
}

void require_bounded_total_reward(const TabularMDP& mdp) {
    const BoundCheck check = validate_bounded_total_reward(mdp);
    if (check.admitted()) return;
    std::ostringstream os;
    os.precision(17);
    os << "total reward can reach " << check.max_total << " > 1 along (h,s,a) path";
    for (const auto& step : check.witness) {
        os << " (" << step.h + 1 << "," << step.state << "," << step.action << ")";
    }
    throw AssumptionViolation(os.str());
}

int argmax_low(std::span<const double> row) {
    int best = 0;
    for (std::size_t a = 1; a < row.size(); ++a) {
        if (row[a] > row[static_cast<std::size_t>(best)]) best = static_cast<int>(a);
    }
    return best;
}

Policy make_greedy_policy(const ValueTables& tables) {
    Policy policy(tables.num_states, tables.horizon);
    for (int h = 0; h < tables.horizon; ++h) {
        for (int s = 0; s < tables.num_states; ++s) {
            policy.at(h, s) = argmax_low(tables.q_row(h, s));
        }
    }
    return policy;
}

nlohmann::json to_json(const TabularMDP& mdp) {
    using nlohmann::json;
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    json P = json::array();
    json rewards = json::array();
    for (int s = 0; s < S; ++s) {
        json p_s = json::array();
        json r_s = json::array();
        for (int a = 0; a < A; ++a) {
            const auto row = mdp.transition_row(s, a);
            p_s.push_back(std::vector<double>(row.begin(), row.end()));
            const RewardDist& r = mdp.reward(s, a);
            if (r.kind() == RewardDist::Kind::deterministic) {
                r_s.push_back({{"kind", "deterministic"}, {"params", {{"value", r.first_param()}}}});
            } else {
                r_s.push_back({{"kind", "bernoulli"},
                               {"params", {{"p", r.first_param()}, {"scale", r.second_param()}}}});
            }
        }
        P.push_back(std::move(p_s));
        rewards.push_back(std::move(r_s));
    }
    const auto mu = mdp.initial_dist();
    return json{{"S", S},
                {"A", A},
                {"H", mdp.horizon()},
                {"P", std::move(P)},
                {"rewards", std::move(rewards)},
                {"mu", std::vector<double>(mu.begin(), mu.end())}};
}

namespace {

RewardDist reward_from_json(const nlohmann::json& doc) {
    reject_unknown_keys(doc, {"kind", "params"}, "reward");
    const std::string kind = doc.at("kind").get<std::string>();
    const auto& params = doc.at("params");
    if (kind == "deterministic") {
        reject_unknown_keys(params, {"value"}, "deterministic reward params");
        return RewardDist::deterministic(params.at("value").get<double>());
    }
    if (kind == "bernoulli") {
        reject_unknown_keys(params, {"p", "scale"}, "bernoulli reward params");
        return RewardDist::bernoulli(params.at("p").get<double>(), params.at("scale").get<double>());
    }
    throw SchemaError("unknown reward kind '" + kind + "'");
}

}  // namespace

TabularMDP mdp_from_json(const nlohmann::json& doc) {
    try {
        reject_unknown_keys(doc, {"S", "A", "H", "P", "rewards", "mu"}, "MDP document");
        const int S = doc.at("S").get<int>();
        const int A = doc.at("A").get<int>();
        const int H = doc.at("H").get<int>();
        if (S < 1 || A < 1 || H < 1) throw SchemaError("S, A and H must all be at least 1");
        const auto& P = doc.at("P");
        const auto& R = doc.at("rewards");
        if (!P.is_array() || P.size() != static_cast<std::size_t>(S) || !R.is_array() ||
            R.size() != static_cast<std::size_t>(S)) {
            throw SchemaError("P and rewards must have S rows");
        }
        std::vector<double> transitions;
        std::vector<RewardDist> rewards;
        transitions.reserve(static_cast<std::size_t>(S) * A * S);
        for (int s = 0; s < S; ++s) {
            if (P[s].size() != static_cast<std::size_t>(A) || R[s].size() != static_cast<std::size_t>(A)) {
                throw SchemaError("P[s] and rewards[s] must have A entries");
            }
            for (int a = 0; a < A; ++a) {
                const auto row = P[s][a].get<std::vector<double>>();
                if (row.size() != static_cast<std::size_t>(S)) throw SchemaError("P[s][a] must have S entries");
                transitions.insert(transitions.end(), row.begin(), row.end());
                rewards.push_back(reward_from_json(R[s][a]));
            }
        }
        return TabularMDP(S, A, H, std::move(transitions), std::move(rewards),
                          doc.at("mu").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed MDP document: ") + e.what());
    }
}

}  // namespace mvp
