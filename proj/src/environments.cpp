#include "mvp/environments.hpp"

#include "mvp/errors.hpp"
#include "mvp/json_util.hpp"

namespace mvp {

namespace {

constexpr int kLeft = 0;
constexpr int kRight = 1;

struct Builder {
    int S, A, H;
    std::vector<double> P;
    std::vector<RewardDist> R;
    std::vector<double> mu;

    Builder(int states, int actions, int horizon)
        : S(states), A(actions), H(horizon),
          P(static_cast<std::size_t>(states) * actions * states, 0.0),
          R(static_cast<std::size_t>(states) * actions, RewardDist::deterministic(0.0)),
          mu(static_cast<std::size_t>(states), 0.0) {}

    double& p(int s, int a, int next) {
        return P[(static_cast<std::size_t>(s) * A + a) * S + next];
    }
    void reward(int s, int a, RewardDist r) { R[static_cast<std::size_t>(s) * A + a] = r; }

    TabularMDP build() { return TabularMDP(S, A, H, std::move(P), std::move(R), std::move(mu)); }
};

void require_two_actions(const EnvSpec& spec) {
    if (spec.num_actions != 2) {
        throw SchemaError(to_string(spec.family) + " requires A = 2 (left, right)");
    }
}

// River occupies states [0, river); in terminal mode state `river` is the sink.
TabularMDP make_riverswim(const EnvSpec& spec) {
    require_two_actions(spec);
    const bool terminal = spec.reward_mode == RewardMode::terminal_only;
    if (terminal && spec.num_states < 2) throw SchemaError("terminal-only riverswim needs S >= 2");

    Builder b(spec.num_states, 2, spec.horizon);
    const int river = terminal ? spec.num_states - 1 : spec.num_states;
    const int bank = river - 1;
    const double scale = terminal ? 1.0 : 1.0 / spec.horizon;

    for (int s = 0; s < river; ++s) {
        b.p(s, kLeft, s > 0 ? s - 1 : 0) += 1.0;
        if (terminal && s == bank) {
            b.p(s, kRight, spec.num_states - 1) = 1.0;
        } else if (river == 1) {
            b.p(s, kRight, s) = 1.0;
        } else if (s == 0) {
            b.p(s, kRight, 1) = 0.6;
            b.p(s, kRight, 0) = 0.4;
        } else if (s == bank) {
            b.p(s, kRight, s) = 0.6;
            b.p(s, kRight, s - 1) = 0.4;
        } else {
            b.p(s, kRight, s + 1) = 0.35;
            b.p(s, kRight, s) = 0.6;
            b.p(s, kRight, s - 1) = 0.05;
        }
    }
    if (terminal) {
        const int sink = spec.num_states - 1;
        b.p(sink, kLeft, sink) = 1.0;
        b.p(sink, kRight, sink) = 1.0;
    } else {
        b.reward(0, kLeft, RewardDist::deterministic(0.005 * scale));
    }
    b.reward(bank, kRight, RewardDist::deterministic(scale));
    b.mu[0] = 1.0;
    return b.build();
}

TabularMDP make_chain(const EnvSpec& spec) {
    require_two_actions(spec);
    const bool terminal = spec.reward_mode == RewardMode::terminal_only;
    if (terminal && spec.num_states < 2) throw SchemaError("terminal-only chain needs S >= 2");

    Builder b(spec.num_states, 2, spec.horizon);
    const int line = terminal ? spec.num_states - 1 : spec.num_states;
    const int goal = line - 1;
    for (int s = 0; s < line; ++s) {
        b.p(s, kLeft, s > 0 ? s - 1 : 0) = 1.0;
        if (s < goal) b.p(s, kRight, s + 1) = 1.0;
    }
    if (terminal) {
        const int sink = spec.num_states - 1;
        b.p(goal, kRight, sink) = 1.0;
        b.p(sink, kLeft, sink) = 1.0;
        b.p(sink, kRight, sink) = 1.0;
        b.reward(goal, kRight, RewardDist::deterministic(1.0));
    } else {
        b.p(goal, kRight, goal) = 1.0;
        b.reward(goal, kRight, RewardDist::deterministic(1.0 / spec.horizon));
    }
    b.mu[0] = 1.0;
    return b.build();
}

std::vector<double> dirichlet_row(RandomStream& rng, int size) {
    std::vector<double> row(static_cast<std::size_t>(size));
    double total = 0.0;
    for (auto& x : row) {
        x = rng.exponential();
        total += x;
    }
    for (auto& x : row) x /= total;
    return row;
}

TabularMDP make_random_dirichlet(const EnvSpec& spec) {
    if (spec.reward_mode != RewardMode::per_step_1_over_H) {
        throw SchemaError("random_dirichlet supports only per_step_1_over_H rewards");
    }
    RandomStream rng(spec.seed);
    Builder b(spec.num_states, spec.num_actions, spec.horizon);
    for (int s = 0; s < spec.num_states; ++s) {
        for (int a = 0; a < spec.num_actions; ++a) {
            const auto row = dirichlet_row(rng, spec.num_states);
            for (int next = 0; next < spec.num_states; ++next) b.p(s, a, next) = row[next];
        }
    }
    for (int s = 0; s < spec.num_states; ++s) {
        for (int a = 0; a < spec.num_actions; ++a) {
            b.reward(s, a, RewardDist::bernoulli(rng.uniform(), 1.0 / spec.horizon));
        }
    }
    for (auto& x : b.mu) x = 1.0 / spec.num_states;
    return b.build();
}

TabularMDP make_bandit(const EnvSpec& spec) {
    if (spec.horizon != 1) throw SchemaError("bandit requires H = 1");
    RandomStream rng(spec.seed);
    Builder b(spec.num_states, spec.num_actions, 1);
    for (int s = 0; s < spec.num_states; ++s) {
        for (int a = 0; a < spec.num_actions; ++a) {
            for (int next = 0; next < spec.num_states; ++next) b.p(s, a, next) = 1.0 / spec.num_states;
            b.reward(s, a, RewardDist::bernoulli(rng.uniform(), 1.0));
        }
    }
    for (auto& x : b.mu) x = 1.0 / spec.num_states;
    return b.build();
}

}  // namespace

TabularMDP generate(const EnvSpec& spec) {
    if (spec.num_states < 1 || spec.num_actions < 1 || spec.horizon < 1) {
        throw SchemaError("environment S, A and H must all be at least 1");
    }
    TabularMDP mdp = [&] {
        switch (spec.family) {
            case EnvFamily::riverswim: return make_riverswim(spec);
            case EnvFamily::chain: return make_chain(spec);
            case EnvFamily::random_dirichlet: return make_random_dirichlet(spec);
            case EnvFamily::bandit: return make_bandit(spec);
        }
        throw SchemaError("unknown environment family");
    }();
    require_bounded_total_reward(mdp);
    return mdp;
}

std::string to_string(EnvFamily family) {
    switch (family) {
        case EnvFamily::riverswim: return "riverswim";
        case EnvFamily::chain: return "chain";
        case EnvFamily::random_dirichlet: return "random_dirichlet";
        case EnvFamily::bandit: return "bandit";
    }
    return "?";
}

std::string to_string(RewardMode mode) {
    return mode == RewardMode::per_step_1_over_H ? "per_step_1_over_H" : "terminal_only";
}

nlohmann::json to_json(const EnvSpec& spec) {
    return {{"family", to_string(spec.family)},
            {"S", spec.num_states},
            {"A", spec.num_actions},
            {"H", spec.horizon},
            {"reward_mode", to_string(spec.reward_mode)},
            {"seed", spec.seed}};
}

EnvSpec env_spec_from_json(const nlohmann::json& doc) {
    reject_unknown_keys(doc, {"family", "S", "A", "H", "reward_mode", "seed"}, "env");
    EnvSpec spec;
    try {
        const std::string family = doc.at("family").get<std::string>();
        if (family == "riverswim") spec.family = EnvFamily::riverswim;
        else if (family == "chain") spec.family = EnvFamily::chain;
        else if (family == "random_dirichlet") spec.family = EnvFamily::random_dirichlet;
        else if (family == "bandit") spec.family = EnvFamily::bandit;
        else throw SchemaError("env.family: unknown family '" + family + "'");

        if (spec.family == EnvFamily::bandit) spec.horizon = 1;
        if (doc.contains("S")) spec.num_states = doc["S"].get<int>();
        if (doc.contains("A")) spec.num_actions = doc["A"].get<int>();
        if (doc.contains("H")) spec.horizon = doc["H"].get<int>();
        if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("reward_mode")) {
            const std::string mode = doc["reward_mode"].get<std::string>();
            if (mode == "per_step_1_over_H") spec.reward_mode = RewardMode::per_step_1_over_H;
            else if (mode == "terminal_only") spec.reward_mode = RewardMode::terminal_only;
            else throw SchemaError("env.reward_mode: unknown mode '" + mode + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("env: ") + e.what());
    }
    if (spec.num_states < 1 || spec.num_actions < 1 || spec.horizon < 1) {
        throw SchemaError("env: S, A and H must all be at least 1");
    }
    return spec;
}

}  // namespace mvp
