#include "isingmdp/mdpsolve.hpp"

#include <cmath>

namespace isingmdp {

namespace {

// First hitting time (t >= 1) of `target` from `source`; returns lambda^tau,
// or 0 when the trajectory is cut off (lambda^t below noise floor).
double discounted_hit(const FiniteMdp<double>& mdp, const PolicyIndex& policy, int source,
                      int target, Engine& rng) {
    const double lambda = mdp.discount;
    const long long t_max =
        lambda < 1.0 ? (long long)std::ceil(std::log(1e-18) / std::log(lambda)) : 100000;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int state = source;
    for (long long t = 1; t <= t_max; ++t) {
        const auto& row = mdp.states[state][policy[state]];
        double u = unif(rng);
        double acc = 0.0;
        int next = row.transitions.back().first;
        for (const auto& [j, p] : row.transitions) {
            acc += p;
            if (u < acc) {
                next = j;
                break;
            }
        }
        state = next;
        if (state == target) return std::pow(lambda, double(t));
    }
    return 0.0;
}

struct MeanVar {
    double mean = 0.0;
    double variance_of_mean = 0.0;
};

MeanVar monte_carlo_mean(const FiniteMdp<double>& mdp, const PolicyIndex& policy, int source,
                         int target, long long reps, Engine& rng) {
    double sum = 0.0, sum_sq = 0.0;
    for (long long r = 0; r < reps; ++r) {
        double v = discounted_hit(mdp, policy, source, target, rng);
        sum += v;
        sum_sq += v * v;
    }
    MeanVar out;
    out.mean = sum / double(reps);
    const double var = std::max(0.0, sum_sq / double(reps) - out.mean * out.mean);
    out.variance_of_mean = var / double(reps);
    return out;
}

}  // namespace

std::vector<HittingTimeEstimate> value_from_hitting_times(const FiniteMdp<double>& mdp,
                                                          const PolicyIndex& policy, int target,
                                                          const std::vector<int>& sources,
                                                          long long reps, Engine& rng) {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    const double lambda = mdp.discount;

    // Return-time term: exact when the target is absorbing under the policy.
    const auto& target_row = mdp.states[target][policy[target]];
    bool absorbing = target_row.transitions.size() == 1 &&
                     target_row.transitions.front().first == target;
    MeanVar ret;
    if (absorbing) {
        ret.mean = lambda;
        ret.variance_of_mean = 0.0;
    } else {
        ret = monte_carlo_mean(mdp, policy, target, target, reps, rng);
    }
    const double denom = 1.0 - ret.mean;

    std::vector<HittingTimeEstimate> out;
    for (int source : sources) {
        MeanVar num = monte_carlo_mean(mdp, policy, source, target, reps, rng);
        HittingTimeEstimate est;
        est.discounted_return_mean = num.mean;
        est.value = num.mean / denom + (source == target ? 1.0 : 0.0);
        // Independent numerator/denominator streams: first-order variance
        // propagation through A / (1 - B).
        const double var = num.variance_of_mean / (denom * denom) +
                           num.mean * num.mean * ret.variance_of_mean /
                               (denom * denom * denom * denom);
        est.std_error = std::sqrt(var);
        out.push_back(est);
    }
    return out;
}

}  // namespace isingmdp
