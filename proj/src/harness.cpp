#include "mvp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "mvp/analysis.hpp"
#include "mvp/errors.hpp"
#include "mvp/oracle_dp.hpp"

namespace mvp {

std::string to_string(AuditLevel level) {
    switch (level) {
        case AuditLevel::off: return "off";
        case AuditLevel::per_episode: return "per_episode";
        case AuditLevel::full: return "full";
    }
    return "?";
}

AuditLevel audit_level_from_string(const std::string& name) {
    if (name == "off") return AuditLevel::off;
    if (name == "per_episode") return AuditLevel::per_episode;
    if (name == "full") return AuditLevel::full;
    throw SchemaError("unknown audit_level '" + name + "'");
}

// ---------------------------------------------------------------------------
// Reward-weight audit

RewardWeightAudit::RewardWeightAudit(int states, int actions, TriggerSet triggers)
    : num_actions_(actions),
      triggers_(triggers),
      counts_(static_cast<std::size_t>(states) * actions, 0),
      pending_(static_cast<std::size_t>(states) * actions),
      current_(static_cast<std::size_t>(states) * actions) {}

void RewardWeightAudit::on_step(int s, int a, double reward, bool agent_fired, double agent_r_hat) {
    const std::size_t pair = static_cast<std::size_t>(s) * num_actions_ + a;
    const std::uint64_t count = ++counts_[pair];
    if (current_[pair]) ++estimates_[*current_[pair]].uses;

    const std::uint64_t id = sample_rewards_.size();
    sample_rewards_.push_back(reward);
    memberships_.push_back(0);
    pending_[pair].push_back(id);
    ++report_.samples;

    const bool fires = triggers_.contains(count);
    if (fires != agent_fired) {
        report_.max_reconstruction_error = std::numeric_limits<double>::infinity();
        return;
    }
    if (!fires) return;

    Estimate est;
    est.coefficient = count >= 2 ? 2.0 / static_cast<double>(count) : 1.0;
    est.set_at = count;
    double rebuilt = 0.0;
    for (std::uint64_t member : pending_[pair]) {
        rebuilt += est.coefficient * sample_rewards_[member];
        if (++memberships_[member] > 1) ++report_.multi_use_violations;
    }
    pending_[pair].clear();
    report_.max_reconstruction_error =
        std::max(report_.max_reconstruction_error, std::abs(rebuilt - agent_r_hat));
    current_[pair] = estimates_.size();
    estimates_.push_back(est);
}

RewardWeightReport RewardWeightAudit::finish() {
    report_.estimates = estimates_.size();
    for (const auto& est : estimates_) {
        const double within = static_cast<double>(std::min(est.uses, est.set_at));
        const double total = est.coefficient * within;
        report_.max_total_weight = std::max(report_.max_total_weight, total);
        report_.max_total_weight_with_tail =
            std::max(report_.max_total_weight_with_tail, est.coefficient * static_cast<double>(est.uses));
        report_.max_coefficient = std::max(report_.max_coefficient, est.coefficient);
        if (total > 2.0 || est.coefficient > 2.0) ++report_.weight_violations;
    }
    return report_;
}

// ---------------------------------------------------------------------------

OptimismReport optimism_audit(const ValueTables& agent, const ValueTables& oracle) {
    OptimismReport report;
    for (std::size_t i = 0; i < agent.q.size(); ++i) {
        const double shortfall = oracle.q[i] - agent.q[i];
        if (shortfall > kOracleTolerance) ++report.cell_violations;
        report.worst_shortfall = std::max(report.worst_shortfall, shortfall);
    }
    return report;
}

namespace {

std::array<std::uint64_t, 3> checkpoint_episodes(std::uint64_t K) {
    return {std::max<std::uint64_t>(1, K / 4), std::max<std::uint64_t>(1, K / 2), K};
}

bool same_values(const ValueTables& a, const ValueTables& b) {
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        if (std::abs(a.v[i] - b.v[i]) > kOracleTolerance) return false;
    }
    return true;
}

}  // namespace

RunResult run(const TabularMDP& mdp, const RunOptions& options) {
    if (options.episodes < 1) throw SchemaError("K must be at least 1");
    const auto started = std::chrono::steady_clock::now();
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    const int H = mdp.horizon();

    Learner learner(options.agent, S, A, H, options.episodes, options.delta);
    const ValueTables optimal = optimal_values(mdp);
    RandomStream rng(options.seed);

    std::optional<RewardWeightAudit> weight_audit;
    if (options.audit != AuditLevel::off) weight_audit.emplace(S, A, learner.triggers());

    RunResult result;
    result.records.reserve(options.episodes);
    result.policies.push_back(make_greedy_policy(learner.state().values));
    ValueTables policy_values = evaluate_policy(mdp, result.policies.back());

    RunSummary& summary = result.summary;
    summary.seed = options.seed;
    summary.episodes = options.episodes;
    summary.checkpoint_episodes = checkpoint_episodes(options.episodes);
    summary.epoch_bound = analysis::epoch_count_bound(static_cast<std::uint64_t>(S),
                                                      static_cast<std::uint64_t>(A), options.episodes,
                                                      static_cast<std::uint64_t>(H));
    if (options.audit == AuditLevel::full) {
        summary.optimism_cell_violations += optimism_audit(learner.state().values, optimal).cell_violations;
    }

    double cumulative = 0.0;
    for (std::uint64_t k = 1; k <= options.episodes; ++k) {
        EpisodeRecord rec;
        rec.k = k;
        rec.policy_version = learner.version();
        int s = rng.categorical(mdp.initial_dist());
        rec.initial_state = s;
        rec.v_star = optimal.V(0, s);
        rec.v_policy = policy_values.V(0, s);
        rec.regret_increment = rec.v_star - rec.v_policy;
        rec.optimism_ok = learner.state().values.V(0, s) >= rec.v_star - kOracleTolerance;
        if (!rec.optimism_ok) ++summary.optimism_violations;

        const Policy& policy = result.policies.back();
        for (int h = 0; h < H; ++h) {
            const int a = learner.act(s, h);
            if (options.audit == AuditLevel::full && a != policy.at(h, s)) {
                throw std::logic_error("agent action diverged from its policy snapshot");
            }
            const double r = mdp.reward(s, a).sample(rng);
            const int next = rng.categorical(mdp.transition_row(s, a));
            const bool fired = learner.observe(s, a, r, next);
            if (weight_audit) {
                weight_audit->on_step(s, a, r, fired, learner.state().r_hat[learner.state().pair(s, a)]);
            }
            rec.realized_return += r;
            s = next;
        }

        rec.updated = learner.end_episode();
        if (rec.updated) {
            ++summary.update_count;
            result.policies.push_back(make_greedy_policy(learner.state().values));
            policy_values = evaluate_policy(mdp, result.policies.back());
            if (options.audit == AuditLevel::full) {
                summary.optimism_cell_violations +=
                    optimism_audit(learner.state().values, optimal).cell_violations;
            }
        }
        if (options.audit == AuditLevel::full && k % 100 == 0 &&
            !same_values(policy_values, evaluate_policy(mdp, result.policies.back()))) {
            ++summary.cache_mismatches;
        }

        cumulative += rec.regret_increment;
        rec.regret_cumulative = cumulative;
        for (std::size_t c = 0; c < 3; ++c) {
            if (summary.checkpoint_episodes[c] == k) summary.checkpoint_regret[c] = cumulative;
        }
        result.records.push_back(rec);
    }

    summary.final_regret = cumulative;
    summary.epoch_bound_ok = summary.update_count <= summary.epoch_bound;
    result.counters = learner.counters();
    if (weight_audit) result.reward_weights = weight_audit->finish();
    summary.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::vector<RunResult> run_batch(const TabularMDP& mdp, const RunOptions& base,
                                 const std::vector<std::uint64_t>& seeds, unsigned jobs) {
    std::vector<RunResult> results(seeds.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            try {
                RunOptions opts = base;
                opts.seed = seeds[i];
                results[i] = run(mdp, opts);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(seeds.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    std::stable_sort(results.begin(), results.end(), [](const RunResult& a, const RunResult& b) {
        return a.summary.seed < b.summary.seed;
    });
    return results;
}

PacSelection pac_select(const TabularMDP& mdp, const RunResult& result, RandomStream& rng) {
    if (result.records.empty()) throw std::invalid_argument("pac_select needs at least one episode");
    const auto pick = rng.uniform_index(result.records.size());
    const EpisodeRecord& rec = result.records[pick];
    PacSelection sel;
    sel.episode = rec.k;
    sel.policy = result.policies.at(rec.policy_version);
    const ValueTables optimal = optimal_values(mdp);
    const ValueTables chosen = evaluate_policy(mdp, sel.policy);
    sel.suboptimality = initial_value(mdp, optimal) - initial_value(mdp, chosen);
    return sel;
}

namespace {

CheckpointStats describe(std::uint64_t episode, std::vector<double> values) {
    CheckpointStats st;
    st.episode = episode;
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double x : values) sum += x;
    st.mean = sum / n;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    st.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    if (values.size() > 1) {
        double ss = 0.0;
        for (double x : values) ss += (x - st.mean) * (x - st.mean);
        st.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return st;
}

}  // namespace

AggregateReport aggregate(std::vector<RunSummary> summaries) {
    if (summaries.empty()) throw std::invalid_argument("aggregate needs at least one run");
    std::stable_sort(summaries.begin(), summaries.end(),
                     [](const RunSummary& a, const RunSummary& b) { return a.seed < b.seed; });
    AggregateReport report;
    report.runs = summaries.size();
    for (std::size_t c = 0; c < 3; ++c) {
        std::vector<double> values;
        for (const auto& s : summaries) values.push_back(s.checkpoint_regret[c]);
        report.checkpoints[c] = describe(summaries.front().checkpoint_episodes[c], std::move(values));
    }
    for (const auto& s : summaries) {
        report.seeds.push_back(s.seed);
        report.max_update_count = std::max(report.max_update_count, s.update_count);
        report.epoch_bound = std::max(report.epoch_bound, s.epoch_bound);
        report.all_within_epoch_bound = report.all_within_epoch_bound && s.epoch_bound_ok;
        report.optimism_violations += s.optimism_violations;
        report.total_episodes += s.episodes;
    }
    report.optimism_violation_rate =
        static_cast<double>(report.optimism_violations) / static_cast<double>(report.total_episodes);
    return report;
}

namespace {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_episode_csv(std::ostream& out, const std::vector<EpisodeRecord>& records) {
    out << "k,s1,return,v_star,v_pik,regret_inc,regret_cum,optimism_ok,updated\r\n";
    for (const auto& r : records) {
        out << r.k << ',' << r.initial_state << ',' << format_double(r.realized_return) << ','
            << format_double(r.v_star) << ',' << format_double(r.v_policy) << ','
            << format_double(r.regret_increment) << ',' << format_double(r.regret_cumulative) << ','
            << (r.optimism_ok ? 1 : 0) << ',' << (r.updated ? 1 : 0) << "\r\n";
    }
}

nlohmann::json to_json(const RunSummary& s) {
    nlohmann::json checkpoints = nlohmann::json::array();
    for (std::size_t c = 0; c < 3; ++c) {
        checkpoints.push_back({{"k", s.checkpoint_episodes[c]}, {"regret", s.checkpoint_regret[c]}});
    }
    return {{"seed", s.seed},
            {"K", s.episodes},
            {"final_regret", s.final_regret},
            {"checkpoints", std::move(checkpoints)},
            {"update_count", s.update_count},
            {"epoch_bound", s.epoch_bound},
            {"epoch_bound_ok", s.epoch_bound_ok},
            {"optimism_violations", s.optimism_violations},
            {"optimism_cell_violations", s.optimism_cell_violations},
            {"cache_mismatches", s.cache_mismatches},
            {"wall_time_s", s.wall_time_s}};
}

nlohmann::json to_json(const AggregateReport& r) {
    nlohmann::json checkpoints = nlohmann::json::array();
    for (const auto& c : r.checkpoints) {
        checkpoints.push_back({{"k", c.episode}, {"mean", c.mean}, {"median", c.median}, {"stderr", c.stderr_}});
    }
    return {{"runs", r.runs},
            {"seeds", r.seeds},
            {"checkpoints", std::move(checkpoints)},
            {"max_update_count", r.max_update_count},
            {"epoch_bound", r.epoch_bound},
            {"optimism_violations", r.optimism_violations},
            {"total_episodes", r.total_episodes},
            {"optimism_violation_rate", r.optimism_violation_rate},
            {"bound_checks", {{"epoch_count", r.all_within_epoch_bound}}}};
}

}  // namespace mvp
