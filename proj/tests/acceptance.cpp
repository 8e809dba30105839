// Acceptance gate: one PASS/FAIL line per criterion; nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mvp/environments.hpp"
#include "mvp/harness.hpp"
#include "mvp/oracle_dp.hpp"
#include "mvp/verify.hpp"
#include "test_support.hpp"

using namespace mvp;

namespace {

struct Gate {
    int failures = 0;
    bool all_runs_within_epoch_bound = true;
    std::uint64_t runs_checked = 0;

    void report(int id, const std::string& title, bool ok, const std::string& detail, double seconds) {
        std::printf("%s  %2d  %-34s %s  [%.2fs]\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(),
                    seconds);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    void note_runs(const std::vector<RunResult>& runs) {
        for (const auto& r : runs) {
            ++runs_checked;
            all_runs_within_epoch_bound = all_runs_within_epoch_bound && r.summary.epoch_bound_ok;
        }
    }
};

double elapsed(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string describe(const verify::CheckResult& r) {
    return fmt("trials=%llu failures=%llu", static_cast<unsigned long long>(r.trials),
               static_cast<unsigned long long>(r.failures)) +
           (r.detail.empty() ? "" : " " + r.detail);
}

double mean_regret_at(const std::vector<RunResult>& runs, std::uint64_t k) {
    double total = 0.0;
    for (const auto& r : runs) total += r.records.at(k - 1).regret_cumulative;
    return total / static_cast<double>(runs.size());
}

std::vector<std::uint64_t> seeds_1_to(std::uint64_t n) {
    std::vector<std::uint64_t> s(n);
    std::iota(s.begin(), s.end(), 1);
    return s;
}

}  // namespace

int main() {
    Gate gate;
    const unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    const auto river = generate({.family = EnvFamily::riverswim, .num_states = 5, .num_actions = 2, .horizon = 10});
    const auto seeds = seeds_1_to(20);

    {
        const auto t = std::chrono::steady_clock::now();
        const auto r = verify::f_monotonicity(10000, 101);
        gate.report(1, "f monotone in v", r.passed && elapsed(t) < 5, describe(r), elapsed(t));
    }
    {
        const auto t = std::chrono::steady_clock::now();
        const auto r = verify::f_lower_bound(10000, 102);
        gate.report(2, "f lower bound", r.passed && elapsed(t) < 5, describe(r), elapsed(t));
    }
    {
        const auto t = std::chrono::steady_clock::now();
        const auto r = verify::recursion_bound_fuzz(10000, 103);
        gate.report(3, "recursion bound fuzz", r.passed && elapsed(t) < 10, describe(r), elapsed(t));
    }

    // 5: instrumented run on a random MDP.
    {
        const auto t = std::chrono::steady_clock::now();
        const auto r = verify::reward_weights(10000, 105);
        gate.report(5, "reward weight <= 2", r.passed, describe(r), elapsed(t));
    }

    // 6: optimism on RiverSwim, K = 10^4.
    {
        const auto t = std::chrono::steady_clock::now();
        const auto runs = run_batch(river, {.agent = AgentKind::mvp, .episodes = 10000, .delta = 0.01}, seeds, jobs);
        gate.note_runs(runs);
        std::vector<RunSummary> sums;
        for (const auto& r : runs) sums.push_back(r.summary);
        const auto agg = aggregate(sums);
        const double secs = elapsed(t);
        gate.report(6, "optimism violation rate <= 5%", agg.optimism_violation_rate <= 0.05 && secs < 120,
                    fmt("rate=%.4f (%llu/%llu episodes)", agg.optimism_violation_rate,
                        static_cast<unsigned long long>(agg.optimism_violations),
                        static_cast<unsigned long long>(agg.total_episodes)),
                    secs);
    }

    // 7 and 8 share the K = 40k runs.
    {
        const auto t = std::chrono::steady_clock::now();
        const auto mvp_runs =
            run_batch(river, {.agent = AgentKind::mvp, .episodes = 40000, .delta = 0.01, .audit = AuditLevel::off},
                      seeds, jobs);
        gate.note_runs(mvp_runs);
        const double mvp_secs = elapsed(t);
        const double r1 = mean_regret_at(mvp_runs, 2500);
        const double r2 = mean_regret_at(mvp_runs, 10000);
        const double r3 = mean_regret_at(mvp_runs, 40000);
        const double q1 = r2 / r1;
        const double q2 = r3 / r2;
        gate.report(7, "regret growth ratio <= 2.5", q1 <= 2.5 && q2 <= 2.5 && mvp_secs < 600,
                    fmt("R(2.5k)=%.1f R(10k)=%.1f R(40k)=%.1f ratios %.3f %.3f", r1, r2, r3, q1, q2), mvp_secs);

        const auto t8 = std::chrono::steady_clock::now();
        const auto greedy_runs = run_batch(
            river, {.agent = AgentKind::greedy_no_bonus, .episodes = 40000, .delta = 0.01, .audit = AuditLevel::off},
            seeds, jobs);
        const auto hoeffding_runs = run_batch(
            river, {.agent = AgentKind::hoeffding_ucbvi, .episodes = 40000, .delta = 0.01, .audit = AuditLevel::off},
            seeds, jobs);
        gate.note_runs(greedy_runs);
        gate.note_runs(hoeffding_runs);
        const double g = mean_regret_at(greedy_runs, 40000);
        const double hf = mean_regret_at(hoeffding_runs, 40000);
        gate.report(8, "mvp below greedy at 40k", r3 < g,
                    fmt("mvp=%.1f greedy=%.1f (hoeffding_ucbvi=%.1f, not gated)", r3, g, hf), elapsed(t8));
    }

    // 9: oracle against policy enumeration.
    {
        const auto t = std::chrono::steady_clock::now();
        RandomStream rng(109);
        double worst = 0.0;
        for (int inst = 0; inst < 50; ++inst) {
            const auto mdp = reference::random_mdp(rng, 3, 2, 3);
            const auto dp = optimal_values(mdp);
            const auto brute = reference::brute_force_optimal_start_values(mdp);
            for (int s = 0; s < 3; ++s) worst = std::max(worst, std::abs(dp.V(0, s) - brute[s]));
        }
        const double secs = elapsed(t);
        gate.report(9, "oracle matches enumeration", worst <= 1e-12 && secs < 5,
                    fmt("50 instances, max |diff|=%.3g", worst), secs);
    }

    {
        const auto t = std::chrono::steady_clock::now();
        const auto r = verify::empirical_bernstein_coverage(10000, 110);
        const double secs = elapsed(t);
        gate.report(10, "empirical Bernstein coverage", r.passed && secs < 30, describe(r), secs);
    }

    // 11: byte-identical CSV from repeated runs.
    {
        const auto t = std::chrono::steady_clock::now();
        bool same = true;
        for (auto kind : {AgentKind::mvp, AgentKind::hoeffding_ucbvi, AgentKind::greedy_no_bonus}) {
            const RunOptions opt{.agent = kind, .episodes = 2000, .seed = 11};
            const auto a = run(river, opt);
            const auto b = run(river, opt);
            gate.note_runs({a, b});
            std::ostringstream ca, cb;
            write_episode_csv(ca, a.records);
            write_episode_csv(cb, b.records);
            same = same && ca.str() == cb.str();
        }
        gate.report(11, "deterministic CSV", same, "3 agents x 2000 episodes, seed 11", elapsed(t));
    }

    gate.report(4, "epoch count bound on every run", gate.all_runs_within_epoch_bound,
                fmt("%llu runs checked", static_cast<unsigned long long>(gate.runs_checked)), 0.0);

    std::printf("%d criterion(s) failed\n", gate.failures);
    return gate.failures == 0 ? 0 : 1;
}
