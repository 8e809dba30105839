#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace mvp {

/// Q and V tables over levels 0..H, where level H is the terminal row and is
/// identically zero. Level h here is step h+1 of an episode.
struct ValueTables {
    int num_states = 0;
    int num_actions = 0;
    int horizon = 0;
    std::vector<double> q;  // [(H+1) * S * A]
    std::vector<double> v;  // [(H+1) * S]

    ValueTables() = default;
    ValueTables(int states, int actions, int horizon_len, double fill = 0.0)
        : num_states(states),
          num_actions(actions),
          horizon(horizon_len),
          q(static_cast<std::size_t>(horizon_len + 1) * states * actions, fill),
          v(static_cast<std::size_t>(horizon_len + 1) * states, fill) {
        for (int s = 0; s < states; ++s) {
            V(horizon_len, s) = 0.0;
            for (int a = 0; a < actions; ++a) Q(horizon_len, s, a) = 0.0;
        }
    }

    std::size_t q_index(int h, int s, int a) const {
        assert(h >= 0 && h <= horizon && s >= 0 && s < num_states && a >= 0 && a < num_actions);
        return (static_cast<std::size_t>(h) * num_states + s) * num_actions + a;
    }
    std::size_t v_index(int h, int s) const {
        assert(h >= 0 && h <= horizon && s >= 0 && s < num_states);
        return static_cast<std::size_t>(h) * num_states + s;
    }

    double& Q(int h, int s, int a) { return q[q_index(h, s, a)]; }
    double Q(int h, int s, int a) const { return q[q_index(h, s, a)]; }
    double& V(int h, int s) { return v[v_index(h, s)]; }
    double V(int h, int s) const { return v[v_index(h, s)]; }

    std::span<const double> q_row(int h, int s) const {
        return {q.data() + q_index(h, s, 0), static_cast<std::size_t>(num_actions)};
    }
    std::span<const double> v_level(int h) const {
        return {v.data() + v_index(h, 0), static_cast<std::size_t>(num_states)};
    }

    bool operator==(const ValueTables&) const = default;
};

}  // namespace mvp
