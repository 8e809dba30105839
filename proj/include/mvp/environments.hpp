#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "mvp/mdp.hpp"

namespace mvp {

enum class EnvFamily { riverswim, chain, random_dirichlet, bandit };

/// per_step_1_over_H caps every one-step reward at 1/H. terminal_only pays a
/// single reward of 1 on reaching the goal, after which the episode idles in
/// an absorbing zero-reward sink.
enum class RewardMode { per_step_1_over_H, terminal_only };

struct EnvSpec {
    EnvFamily family = EnvFamily::riverswim;
    int num_states = 5;
    int num_actions = 2;
    int horizon = 10;
    RewardMode reward_mode = RewardMode::per_step_1_over_H;
    std::uint64_t seed = 0;

    bool operator==(const EnvSpec&) const = default;
};

/// Builds the MDP described by `spec`. Pure: equal specs give equal MDPs.
///
/// Families, with action 0 = left and action 1 = right where it applies:
///  - riverswim: left moves one state left deterministically. Right drifts
///    right with probability 0.35, stays with 0.6 and slips left with 0.05;
///    at the left bank right succeeds with 0.6, and at the right bank it
///    stays with 0.6. Left at the left bank pays 0.005, right at the right
///    bank pays 1 (both scaled by 1/H in per-step mode).
///  - chain: deterministic left/right walk paying only at the right end.
///  - random_dirichlet: each transition row ~ Dirichlet(1,...,1), rewards
///    Bernoulli(p) scaled by 1/H with p ~ U[0,1], uniform initial state.
///  - bandit: H = 1, S contexts drawn uniformly, Bernoulli(p) arms.
///
/// In terminal_only mode the last state index is the sink and the goal is
/// the state to its left; the left-bank riverswim reward is dropped.
///
/// Throws SchemaError for unsupported parameter combinations and
/// AssumptionViolation if the result fails the bounded-reward check.
TabularMDP generate(const EnvSpec& spec);

std::string to_string(EnvFamily family);
std::string to_string(RewardMode mode);

nlohmann::json to_json(const EnvSpec& spec);
/// Strict: unknown keys are rejected. Missing keys take EnvSpec defaults
/// except `family`, which is required.
EnvSpec env_spec_from_json(const nlohmann::json& doc);

}  // namespace mvp
