#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "mvp/agent.hpp"
#include "mvp/mdp.hpp"
#include "mvp/random.hpp"
#include "mvp/value_tables.hpp"

namespace mvp {

/// Tolerance for every comparison against oracle values.
inline constexpr double kOracleTolerance = 1e-9;

/// off: per-episode optimism flag only. per_episode: adds the reward-weight
/// audit. full: adds whole-table optimism checks at each update and
/// re-evaluation of the cached policy value every 100 episodes.
enum class AuditLevel { off, per_episode, full };

std::string to_string(AuditLevel level);
AuditLevel audit_level_from_string(const std::string& name);

struct RunOptions {
    AgentKind agent = AgentKind::mvp;
    std::uint64_t episodes = 1;
    double delta = 0.01;
    std::uint64_t seed = 0;
    AuditLevel audit = AuditLevel::per_episode;
};

struct EpisodeRecord {
    std::uint64_t k = 0;  // 1-based
    int initial_state = 0;
    double realized_return = 0.0;
    double v_star = 0.0;
    double v_policy = 0.0;
    double regret_increment = 0.0;
    double regret_cumulative = 0.0;
    bool optimism_ok = true;
    bool updated = false;
    std::uint64_t policy_version = 0;
};

struct RunSummary {
    std::uint64_t seed = 0;
    std::uint64_t episodes = 0;
    double final_regret = 0.0;
    std::array<std::uint64_t, 3> checkpoint_episodes{};  // K/4, K/2, K
    std::array<double, 3> checkpoint_regret{};
    std::uint64_t update_count = 0;
    std::uint64_t epoch_bound = 0;
    bool epoch_bound_ok = true;
    std::uint64_t optimism_violations = 0;       // episodes with V₁ < V*₁ − tol
    std::uint64_t optimism_cell_violations = 0;  // full audit only
    std::uint64_t cache_mismatches = 0;          // full audit only
    double wall_time_s = 0.0;
};

/// Outcome of the latest-half reward estimator audit.
struct RewardWeightReport {
    std::uint64_t samples = 0;
    std::uint64_t estimates = 0;
    /// Largest coefficient × visits an estimate served within its own epoch
    /// (the N visits after a trigger at N).
    double max_total_weight = 0.0;
    /// Same, counting every visit after the final trigger too. Not gated.
    double max_total_weight_with_tail = 0.0;
    /// Largest coefficient on a single sample inside one estimate.
    double max_coefficient = 0.0;
    std::uint64_t weight_violations = 0;       // total weight > 2
    std::uint64_t multi_use_violations = 0;    // sample inside more than one estimate
    double max_reconstruction_error = 0.0;     // |r̂ − Σ coefficient · reward|

    bool ok() const {
        return weight_violations == 0 && multi_use_violations == 0 && max_reconstruction_error <= 1e-12;
    }
};

/// Rebuilds every reward estimate the agent produces as an explicit weighted
/// sum of observed rewards, tracking its own visit counts.
class RewardWeightAudit {
public:
    RewardWeightAudit(int states, int actions, TriggerSet triggers);

    /// Call after each observe, with the agent's r̂(s,a) after the call.
    void on_step(int s, int a, double reward, bool agent_fired, double agent_r_hat);
    RewardWeightReport finish();

private:
    struct Estimate {
        double coefficient = 0.0;
        std::uint64_t set_at = 0;
        std::uint64_t uses = 0;
    };
    int num_actions_;
    TriggerSet triggers_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::vector<std::uint64_t>> pending_;  // sample ids since last trigger
    std::vector<std::optional<std::size_t>> current_;  // estimate index per pair
    std::vector<double> sample_rewards_;
    std::vector<std::uint32_t> memberships_;
    std::vector<Estimate> estimates_;
    RewardWeightReport report_;
};

struct OptimismReport {
    std::uint64_t cell_violations = 0;
    double worst_shortfall = 0.0;  // max over cells of Q* − Q, clamped at 0
};

/// Counts (h, s, a) with agent Q below oracle Q* by more than the tolerance.
OptimismReport optimism_audit(const ValueTables& agent, const ValueTables& oracle);

struct RunResult {
    std::vector<EpisodeRecord> records;
    RunSummary summary;
    /// Greedy policy of each Q-table version; records index it via policy_version.
    std::vector<Policy> policies;
    PathCounters counters;
    std::optional<RewardWeightReport> reward_weights;
};

/// Plays K episodes of the chosen agent against `mdp`, scoring each episode
/// by the exact gap V*₁(s₁) − V^{π^k}₁(s₁).
RunResult run(const TabularMDP& mdp, const RunOptions& options);

/// Runs one seed per entry on up to `jobs` threads; results sorted by seed.
std::vector<RunResult> run_batch(const TabularMDP& mdp, const RunOptions& base,
                                 const std::vector<std::uint64_t>& seeds, unsigned jobs);

struct PacSelection {
    std::uint64_t episode = 0;
    Policy policy;
    double suboptimality = 0.0;  // E_{s~μ}[V*₁(s) − V^π₁(s)]
};

/// Picks one of the K executed policies uniformly at random.
PacSelection pac_select(const TabularMDP& mdp, const RunResult& result, RandomStream& rng);

struct CheckpointStats {
    std::uint64_t episode = 0;
    double mean = 0.0;
    double median = 0.0;
    double stderr_ = 0.0;
};

struct AggregateReport {
    std::size_t runs = 0;
    std::vector<std::uint64_t> seeds;
    std::array<CheckpointStats, 3> checkpoints{};
    std::uint64_t max_update_count = 0;
    std::uint64_t epoch_bound = 0;
    bool all_within_epoch_bound = true;
    std::uint64_t optimism_violations = 0;
    std::uint64_t total_episodes = 0;
    double optimism_violation_rate = 0.0;
};

/// Order-independent: summaries are sorted by seed first. Throws
/// std::invalid_argument on an empty list.
AggregateReport aggregate(std::vector<RunSummary> summaries);

/// Header k,s1,return,v_star,v_pik,regret_inc,regret_cum,optimism_ok,updated.
void write_episode_csv(std::ostream& out, const std::vector<EpisodeRecord>& records);

nlohmann::json to_json(const RunSummary& summary);
nlohmann::json to_json(const AggregateReport& report);

}  // namespace mvp
