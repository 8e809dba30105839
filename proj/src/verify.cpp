#include "mvp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mvp/analysis.hpp"
#include "mvp/environments.hpp"
#include "mvp/harness.hpp"
#include "mvp/random.hpp"

namespace mvp::verify {

namespace {

constexpr double kSlack = 1e-12;

// Random point of the simplex; roughly a third of the coordinates get no mass.
std::vector<double> random_distribution(RandomStream& rng, int size) {
    std::vector<double> p(static_cast<std::size_t>(size), 0.0);
    double total = 0.0;
    for (auto& x : p) {
        if (rng.uniform() < 0.3) continue;
        x = rng.exponential();
        total += x;
    }
    if (total == 0.0) {
        p[rng.uniform_index(p.size())] = 1.0;
        return p;
    }
    for (auto& x : p) x /= total;
    return p;
}

std::vector<double> random_values(RandomStream& rng, int size) {
    std::vector<double> v(static_cast<std::size_t>(size));
    for (auto& x : v) {
        const double u = rng.uniform();
        // Endpoints are where the square-root branch is steepest.
        x = u < 0.1 ? 0.0 : (u < 0.2 ? 1.0 : rng.uniform());
    }
    return v;
}

double log_uniform(RandomStream& rng, double lo, double hi) {
    return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

struct Moments {
    long double mean = 0.0L;
    long double variance = 0.0L;
};

// Independent long-double evaluation of p·v and 𝕍(p, v) = E[(v − p·v)²].
Moments moments(const std::vector<double>& p, const std::vector<double>& v) {
    Moments m;
    for (std::size_t i = 0; i < p.size(); ++i) m.mean += static_cast<long double>(p[i]) * v[i];
    for (std::size_t i = 0; i < p.size(); ++i) {
        const long double d = v[i] - m.mean;
        m.variance += static_cast<long double>(p[i]) * d * d;
    }
    return m;
}

CheckResult finish(CheckResult r, std::string detail) {
    r.passed = r.failures == 0;
    r.detail = std::move(detail);
    return r;
}

}  // namespace

CheckResult f_monotonicity(std::uint64_t trials, std::uint64_t seed, const FConstants& k) {
    RandomStream rng(seed);
    CheckResult r;
    r.name = "f monotone in v";
    double worst = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const int S = 2 + static_cast<int>(rng.uniform_index(9));
        const auto p = random_distribution(rng, S);
        auto v = random_values(rng, S);
        const double n = static_cast<double>(1 + rng.uniform_index(10000));
        const double iota = log_uniform(rng, 1e-2, 50.0);
        const auto j = rng.uniform_index(static_cast<std::uint64_t>(S));
        const double step = (1.0 - v[j]) * rng.uniform();

        const double before = monotone_f(p, v, n, iota, k);
        auto raised = v;
        raised[j] = std::min(1.0, v[j] + step);
        const double after = monotone_f(p, raised, n, iota, k);
        ++r.trials;
        const double drop = before - after;
        worst = std::max(worst, drop / std::max(1.0, std::abs(before)));
        if (drop > kSlack * std::max(1.0, std::abs(before))) {
            if (r.failures++ == 0) {
                r.counterexample = {{"p", p}, {"v", v}, {"raised_index", j}, {"raised_value", raised[j]},
                                    {"n", n}, {"iota", iota}, {"f_before", before}, {"f_after", after}};
            }
        }
    }
    std::ostringstream os;
    os << "largest relative decrease " << worst;
    return finish(std::move(r), os.str());
}

CheckResult f_lower_bound(std::uint64_t trials, std::uint64_t seed, const FConstants& k) {
    RandomStream rng(seed);
    CheckResult r;
    r.name = "f lower bound";
    long double tightest = 1e300L;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const int S = 2 + static_cast<int>(rng.uniform_index(9));
        const auto p = random_distribution(rng, S);
        const auto v = random_values(rng, S);
        const double n = static_cast<double>(1 + rng.uniform_index(10000));
        const double iota = log_uniform(rng, 1e-2, 50.0);

        const double f = monotone_f(p, v, n, iota, k);
        const Moments m = moments(p, v);
        const long double bound = m.mean + 2.0L * std::sqrt(std::max(m.variance, 0.0L) * iota / n) +
                                  14.0L * iota / (3.0L * n);
        ++r.trials;
        tightest = std::min(tightest, static_cast<long double>(f) - bound);
        if (static_cast<long double>(f) < bound - static_cast<long double>(kSlack)) {
            if (r.failures++ == 0) {
                r.counterexample = {{"p", p}, {"v", v}, {"n", n}, {"iota", iota}, {"f", f},
                                    {"bound", static_cast<double>(bound)}};
            }
        }
    }
    std::ostringstream os;
    os << "smallest margin " << static_cast<double>(tightest);
    return finish(std::move(r), os.str());
}

CheckResult recursion_bound_fuzz(std::uint64_t trials, std::uint64_t seed) {
    RandomStream rng(seed);
    CheckResult r;
    r.name = "recursion bound";
    std::uint64_t rejected = 0;
    double closest = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const double l1 = log_uniform(rng, 2.0, 1e8);
        const double l2 = rng.uniform() < 0.1 ? 0.0 : log_uniform(rng, 1e-3, 1e2);
        const double l3 = log_uniform(rng, 1.0, 1e3);
        const double l4 = rng.uniform() < 0.1 ? 0.0 : log_uniform(rng, 1e-3, 1e3);
        const int len = analysis::recursion_length(l1);
        const bool greedy = rng.uniform() < 0.5;

        // Built from the far end: each term is the largest (greedy) or a
        // random fraction of the largest value the hypothesis allows.
        std::vector<double> a(static_cast<std::size_t>(len));
        double next = greedy ? l1 : l1 * rng.uniform();
        for (int i = len; i >= 1; --i) {
            const double cap = std::min(l1, l2 * std::sqrt(next + std::ldexp(l3, i + 1)) + l4);
            a[static_cast<std::size_t>(i - 1)] = greedy ? cap : cap * rng.uniform();
            next = a[static_cast<std::size_t>(i - 1)];
        }
        if (!analysis::recursion_hypothesis_holds(a, l1, l2, l3, l4)) {
            ++rejected;
            continue;
        }
        ++r.trials;
        const double bound = analysis::recursion_bound(l1, l2, l3, l4);
        closest = std::max(closest, a.front() / bound);
        if (a.front() > bound * (1.0 + kSlack)) {
            if (r.failures++ == 0) {
                r.counterexample = {{"lambda1", l1}, {"lambda2", l2}, {"lambda3", l3}, {"lambda4", l4},
                                    {"a", a}, {"bound", bound}};
            }
        }
    }
    if (rejected > 0) {
        // The generator must only produce admissible sequences.
        r.failures += rejected;
    }
    std::ostringstream os;
    os << "max a1/bound " << closest << ", generator rejects " << rejected;
    return finish(std::move(r), os.str());
}

CheckResult empirical_bernstein_coverage(std::uint64_t replications, std::uint64_t seed) {
    RandomStream rng(seed);
    CheckResult r;
    r.name = "empirical Bernstein coverage";
    constexpr double kMean = 0.3;
    std::ostringstream os;
    for (std::uint64_t n : {4u, 16u, 64u}) {
        for (double delta : {0.05, 0.01}) {
            std::uint64_t covered = 0;
            for (std::uint64_t rep = 0; rep < replications; ++rep) {
                std::uint64_t ones = 0;
                for (std::uint64_t i = 0; i < n; ++i) ones += rng.bernoulli(kMean) ? 1 : 0;
                const double mean = static_cast<double>(ones) / static_cast<double>(n);
                const double sample_var = mean * (1.0 - mean);  // (1/n) Σ (Z − Z̄)² for 0/1 data
                if (std::abs(mean - kMean) <= analysis::empirical_bernstein_radius(n, sample_var, delta)) {
                    ++covered;
                }
            }
            ++r.trials;
            const double rate = static_cast<double>(covered) / static_cast<double>(replications);
            os << "n=" << n << " delta=" << delta << " coverage=" << rate << "; ";
            if (rate < 1.0 - delta - 0.01) {
                if (r.failures++ == 0) r.counterexample = {{"n", n}, {"delta", delta}, {"coverage", rate}};
            }
        }
    }
    return finish(std::move(r), os.str());
}

CheckResult self_normalized_coverage(std::uint64_t replications, std::uint64_t seed) {
    RandomStream rng(seed);
    CheckResult r;
    r.name = "self-normalized martingale coverage";
    constexpr double kMean = 0.3;
    constexpr double kEpsilon = 1.0;
    constexpr double kIncrementBound = 1.0;
    std::ostringstream os;
    for (std::uint64_t n : {16u, 64u, 256u}) {
        for (double delta : {0.05, 0.01}) {
            const double var = static_cast<double>(n) * kMean * (1.0 - kMean);
            const double threshold = analysis::self_normalized_radius(var, kEpsilon, kIncrementBound, delta);
            const double allowed =
                analysis::self_normalized_failure_probability(n, kIncrementBound, kEpsilon, delta);
            std::uint64_t exceed = 0;
            for (std::uint64_t rep = 0; rep < replications; ++rep) {
                double m = 0.0;
                for (std::uint64_t i = 0; i < n; ++i) m += (rng.bernoulli(kMean) ? 1.0 : 0.0) - kMean;
                if (std::abs(m) >= threshold) ++exceed;
            }
            ++r.trials;
            const double rate = static_cast<double>(exceed) / static_cast<double>(replications);
            os << "n=" << n << " delta=" << delta << " exceed=" << rate << " allowed=" << allowed << "; ";
            if (rate > allowed + 0.01) {
                if (r.failures++ == 0) {
                    r.counterexample = {{"n", n}, {"delta", delta}, {"exceed_rate", rate}, {"allowed", allowed}};
                }
            }
        }
    }
    return finish(std::move(r), os.str());
}

CheckResult reward_weights(std::uint64_t episodes, std::uint64_t seed) {
    CheckResult r;
    r.name = "reward estimator weights";
    const TabularMDP mdp = generate({.family = EnvFamily::random_dirichlet,
                                     .num_states = 5,
                                     .num_actions = 2,
                                     .horizon = 10,
                                     .reward_mode = RewardMode::per_step_1_over_H,
                                     .seed = seed});
    const RunResult res = run(mdp, {.agent = AgentKind::mvp,
                                    .episodes = episodes,
                                    .delta = 0.01,
                                    .seed = seed,
                                    .audit = AuditLevel::per_episode});
    const RewardWeightReport& w = *res.reward_weights;
    r.trials = w.estimates;
    r.failures = w.weight_violations + w.multi_use_violations + (w.max_reconstruction_error <= 1e-12 ? 0 : 1);
    std::ostringstream os;
    os << w.samples << " samples in " << w.estimates << " estimates, max weight " << w.max_total_weight
       << ", max coefficient " << w.max_coefficient << ", max rebuild error " << w.max_reconstruction_error;
    if (r.failures > 0) {
        r.counterexample = {{"max_total_weight", w.max_total_weight},
                            {"weight_violations", w.weight_violations},
                            {"multi_use_violations", w.multi_use_violations},
                            {"max_reconstruction_error", w.max_reconstruction_error}};
    }
    return finish(std::move(r), os.str());
}

CheckResult replay_and_epoch_bound(std::uint64_t episodes, std::uint64_t seed) {
    CheckResult r;
    r.name = "replay and epoch bound";
    const TabularMDP mdp = generate({.family = EnvFamily::riverswim, .num_states = 5, .num_actions = 2,
                                     .horizon = 10});
    std::ostringstream os;
    for (AgentKind kind : {AgentKind::mvp, AgentKind::hoeffding_ucbvi, AgentKind::greedy_no_bonus}) {
        const RunOptions opts{.agent = kind, .episodes = episodes, .delta = 0.01, .seed = seed,
                              .audit = AuditLevel::off};
        std::ostringstream first, second;
        const RunResult a = run(mdp, opts);
        write_episode_csv(first, a.records);
        write_episode_csv(second, run(mdp, opts).records);
        ++r.trials;
        const bool same = first.str() == second.str();
        const bool bounded = a.summary.update_count <= a.summary.epoch_bound;
        os << to_string(kind) << ": updates " << a.summary.update_count << "/" << a.summary.epoch_bound
           << (same ? " replay ok; " : " replay DIFFERS; ");
        if (!same || !bounded) {
            if (r.failures++ == 0) {
                r.counterexample = {{"agent", to_string(kind)}, {"identical_csv", same},
                                    {"update_count", a.summary.update_count},
                                    {"epoch_bound", a.summary.epoch_bound}};
            }
        }
    }
    return finish(std::move(r), os.str());
}

std::vector<CheckResult> run_suite(const SuiteOptions& options) {
    const std::uint64_t seed = options.seed;
    return {f_monotonicity(10000, seed, options.f_constants),
            f_lower_bound(10000, seed + 1, options.f_constants),
            recursion_bound_fuzz(10000, seed + 2),
            empirical_bernstein_coverage(10000, seed + 3),
            self_normalized_coverage(10000, seed + 4),
            reward_weights(10000, seed + 5),
            replay_and_epoch_bound(2000, seed + 6)};
}

}  // namespace mvp::verify
