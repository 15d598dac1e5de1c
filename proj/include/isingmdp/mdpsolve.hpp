#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "isingmdp/errors.hpp"
#include "isingmdp/rational.hpp"
#include "isingmdp/rng.hpp"

namespace isingmdp {

// Explicit finite MDP. Actions carry small integer ids whose numeric order
// is the tie-breaking order for greedy extraction. Scalar T is double or Rat.
template <typename T>
struct FiniteMdp {
    struct ActionRow {
        int action_id = 0;
        std::vector<std::pair<int, T>> transitions;  // (state, probability)
        T reward{};
    };
    std::vector<std::vector<ActionRow>> states;  // per-state available actions
    T discount{};

    int state_count() const { return int(states.size()); }

    // Max row-sum deviation from 1 (exact zero for rational kernels).
    T max_row_sum_error() const {
        T worst{};
        for (const auto& actions : states) {
            for (const auto& row : actions) {
                T sum{};
                for (const auto& [s, p] : row.transitions) sum += p;
                T err = sum > T(1) ? T(sum - T(1)) : T(T(1) - sum);
                if (err > worst) worst = err;
            }
        }
        return worst;
    }
};

// Deterministic stationary policy: chosen action index (into states[s]) per state.
using PolicyIndex = std::vector<int>;

template <typename T>
FiniteMdp<double> to_double_mdp(const FiniteMdp<T>& mdp) {
    FiniteMdp<double> out;
    out.discount = to_double(Rat(mdp.discount));
    out.states.resize(mdp.states.size());
    for (std::size_t s = 0; s < mdp.states.size(); ++s) {
        for (const auto& row : mdp.states[s]) {
            typename FiniteMdp<double>::ActionRow drow;
            drow.action_id = row.action_id;
            drow.reward = to_double(Rat(row.reward));
            for (const auto& [j, p] : row.transitions) drow.transitions.push_back({j, to_double(Rat(p))});
            out.states[s].push_back(std::move(drow));
        }
    }
    return out;
}

inline FiniteMdp<double> to_double_mdp(const FiniteMdp<double>& mdp) { return mdp; }

namespace detail {

// Solves A x = b by Gaussian elimination on a dense copy, processing
// unknowns from the highest index down. The toolkit's policy systems are
// (block-)upper-triangular in that order, so fill-in stays near zero; full
// pivot bookkeeping keeps the routine correct for arbitrary systems.
template <typename T>
std::vector<T> solve_linear_system(std::vector<std::vector<T>> a, std::vector<T> b) {
    const int m = int(b.size());
    std::vector<int> cols(m);
    for (int k = 0; k < m; ++k) cols[k] = m - 1 - k;
    std::vector<int> pivot_row_of(m, -1);
    std::vector<bool> used(m, false);

    for (int step = 0; step < m; ++step) {
        const int col = cols[step];
        int pivot = -1;
        if (!used[col] && a[col][col] != T(0)) {
            pivot = col;  // natural pivot; valid whenever the system is I - lambda P
        } else {
            for (int r = 0; r < m; ++r)
                if (!used[r] && a[r][col] != T(0)) {
                    pivot = r;
                    break;
                }
        }
        if (pivot < 0) throw SingularSystemError("singular linear system in policy evaluation");
        pivot_row_of[col] = pivot;
        used[pivot] = true;
        for (int r = 0; r < m; ++r) {
            if (used[r] || a[r][col] == T(0)) continue;
            T factor = a[r][col] / a[pivot][col];
            a[r][col] = T(0);
            for (int j = 0; j < m; ++j)
                if (j != col && a[pivot][j] != T(0)) a[r][j] -= factor * a[pivot][j];
            b[r] -= factor * b[pivot];
        }
    }

    std::vector<T> x(m);
    for (int step = m - 1; step >= 0; --step) {
        const int col = cols[step];
        const int row = pivot_row_of[col];
        T acc = b[row];
        for (int later = step + 1; later < m; ++later) {
            const int j = cols[later];
            if (a[row][j] != T(0)) acc -= a[row][j] * x[j];
        }
        x[col] = acc / a[row][col];
    }
    return x;
}

}  // namespace detail

// Exact (rational) or near-exact (double) solution of v = r + lambda P v
// under a fixed stationary policy.
template <typename T>
std::vector<T> policy_evaluation_exact(const FiniteMdp<T>& mdp, const PolicyIndex& policy) {
    const int m = mdp.state_count();
    std::vector<std::vector<T>> a(m, std::vector<T>(m, T(0)));
    std::vector<T> b(m);
    for (int s = 0; s < m; ++s) {
        const auto& row = mdp.states[s].at(policy[s]);
        a[s][s] = T(1);
        for (const auto& [j, p] : row.transitions) a[s][j] -= mdp.discount * p;
        b[s] = row.reward;
    }
    return detail::solve_linear_system(std::move(a), std::move(b));
}

template <typename T>
T lookahead_value(const FiniteMdp<T>& mdp, int state, int action_index,
                  const std::vector<T>& values) {
    const auto& row = mdp.states[state][action_index];
    T acc = row.reward;
    for (const auto& [j, p] : row.transitions) acc += mdp.discount * p * values[j];
    return acc;
}

// One Bellman backup; greedy ties break toward the lowest action id.
template <typename T>
std::pair<std::vector<T>, PolicyIndex> bellman_backup(const FiniteMdp<T>& mdp,
                                                      const std::vector<T>& values) {
    const int m = mdp.state_count();
    std::vector<T> out(m);
    PolicyIndex greedy(m, 0);
    for (int s = 0; s < m; ++s) {
        std::optional<T> best;
        for (std::size_t a = 0; a < mdp.states[s].size(); ++a) {
            T v = lookahead_value(mdp, s, int(a), values);
            if (!best || v > *best) {
                best = v;
                greedy[s] = int(a);
            }
        }
        out[s] = *best;
    }
    return {std::move(out), std::move(greedy)};
}

struct ValueIterationResult {
    std::vector<double> values;
    PolicyIndex greedy;
    int iterations = 0;
};

// Sup-norm fixed-point iteration with the standard stopping rule
// ||v' - v|| <= tol (1 - lambda) / (2 lambda), guaranteeing tol-accurate values.
inline ValueIterationResult value_iteration(const FiniteMdp<double>& mdp, double tol,
                                            int max_iter) {
    if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
    const double lambda = mdp.discount;
    const double threshold = lambda > 0 ? tol * (1.0 - lambda) / (2.0 * lambda) : tol;
    std::vector<double> values(mdp.state_count(), 0.0);
    for (int it = 1; it <= max_iter; ++it) {
        auto [next, greedy] = bellman_backup(mdp, values);
        double dist = 0.0;
        for (int s = 0; s < mdp.state_count(); ++s)
            dist = std::max(dist, std::abs(next[s] - values[s]));
        values = std::move(next);
        if (dist <= threshold) return {std::move(values), std::move(greedy), it};
    }
    throw MaxIterExceededError("value iteration did not reach tolerance");
}

template <typename T>
T bellman_residual(const FiniteMdp<T>& mdp, const std::vector<T>& values) {
    auto [backed, greedy] = bellman_backup(mdp, values);
    T worst{};
    for (int s = 0; s < mdp.state_count(); ++s) {
        T diff = backed[s] > values[s] ? T(backed[s] - values[s]) : T(values[s] - backed[s]);
        if (diff > worst) worst = diff;
    }
    return worst;
}

template <typename T>
bool is_optimal(const FiniteMdp<T>& mdp, const PolicyIndex& policy, const T& tol) {
    auto values = policy_evaluation_exact(mdp, policy);
    return bellman_residual(mdp, values) <= tol;
}

struct ExactSolution {
    std::vector<Rat> values;
    PolicyIndex policy;                      // lowest-id optimal action per state
    std::vector<std::vector<int>> optimal_sets;  // all argmax action indices per state
    int improvement_rounds = 0;
};

// Exact policy iteration: finite convergence to the optimal value function,
// then the full argmax set per state (rational comparisons detect exact ties).
inline ExactSolution solve_exact(const FiniteMdp<Rat>& mdp,
                                 std::optional<PolicyIndex> warm_start = std::nullopt) {
    const int m = mdp.state_count();
    PolicyIndex policy = warm_start ? *warm_start : PolicyIndex(m, 0);
    ExactSolution out;
    for (int round = 0; round < 1000; ++round) {
        auto values = policy_evaluation_exact(mdp, policy);
        auto [backed, greedy] = bellman_backup(mdp, values);
        bool improved = false;
        for (int s = 0; s < m; ++s) {
            // Keep the incumbent unless a strictly better action exists.
            Rat incumbent = lookahead_value(mdp, s, policy[s], values);
            if (backed[s] > incumbent) {
                policy[s] = greedy[s];
                improved = true;
            }
        }
        if (!improved) {
            out.values = std::move(values);
            out.policy = policy;
            out.improvement_rounds = round;
            out.optimal_sets.resize(m);
            for (int s = 0; s < m; ++s) {
                Rat best = lookahead_value(mdp, s, 0, out.values);
                for (std::size_t a = 1; a < mdp.states[s].size(); ++a)
                    best = std::max(best, lookahead_value(mdp, s, int(a), out.values));
                for (std::size_t a = 0; a < mdp.states[s].size(); ++a)
                    if (lookahead_value(mdp, s, int(a), out.values) == best)
                        out.optimal_sets[s].push_back(int(a));
            }
            return out;
        }
    }
    throw MaxIterExceededError("policy iteration failed to converge");
}

struct HittingTimeEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double discounted_return_mean = 0.0;  // E[lambda^tau(s -> target)]
};

// Monte Carlo estimate of the value function of a policy with an indicator
// reward at `target`, via v(s) = E[lambda^tau(s->target)] / (1 - E[lambda^tau(target->target)])
// (plus 1 at the target itself). tau is the first hitting time at t >= 1.
std::vector<HittingTimeEstimate> value_from_hitting_times(const FiniteMdp<double>& mdp,
                                                          const PolicyIndex& policy, int target,
                                                          const std::vector<int>& sources,
                                                          long long reps, Engine& rng);

}  // namespace isingmdp
