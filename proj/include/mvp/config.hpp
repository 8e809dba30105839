#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mvp/agent.hpp"
#include "mvp/environments.hpp"
#include "mvp/harness.hpp"

namespace mvp {

/// An environment is either generated from a spec or loaded from an MDP
/// document on disk.
struct MdpFile {
    std::filesystem::path path;
};
using EnvSource = std::variant<EnvSpec, MdpFile>;

/// One experiment: a single environment and agent run once per seed.
///
/// JSON form (unknown keys are rejected at every level):
///   {"env": {"family": "riverswim", "S": 5, "A": 2, "H": 10,
///            "reward_mode": "per_step_1_over_H", "seed": 0}
///       or {"mdp_file": "path/relative/to/config.json"},
///    "agent": "mvp" | "hoeffding_ucbvi" | "greedy_no_bonus",
///    "K": 10000, "delta": 0.01, "seeds": [1, 2, 3],
///    "output_dir": "out", "audit_level": "off" | "per_episode" | "full"}
/// `delta` defaults to 0.01 and `audit_level` to per_episode.
struct ExperimentConfig {
    EnvSource env = EnvSpec{};
    AgentKind agent = AgentKind::mvp;
    std::uint64_t episodes = 1;
    double delta = 0.01;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path output_dir;
    AuditLevel audit = AuditLevel::per_episode;
};

/// Throws SchemaError naming the offending field.
ExperimentConfig config_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});

/// Throws IoError if the file cannot be read, SchemaError if it does not parse
/// or validate.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Builds or loads the environment. Throws AssumptionViolation if it can
/// collect more than unit total reward, IoError/SchemaError for bad files.
TabularMDP resolve_environment(const EnvSource& env);

/// Reads an MDP JSON document from disk.
TabularMDP load_mdp(const std::filesystem::path& path);

}  // namespace mvp
