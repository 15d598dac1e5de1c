#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "isingmdp/lattice.hpp"
#include "isingmdp/rational.hpp"
#include "isingmdp/rng.hpp"

namespace isingmdp {

// Susceptibility is determined by integer neighbour counts alone for any
// field in (0,1): a +1 spin flips downhill iff it has at least three -1
// neighbours, a -1 spin iff it has at least two +1 neighbours. The energy
// change of a susceptible flip is strictly negative.
bool is_susceptible(const Configuration& config, TorusCoord spin);
std::vector<TorusCoord> susceptible_set(const Configuration& config);

bool is_robust(const Configuration& config);

// Dimensions (width, height) when the configuration is robust, not all-minus
// and its +1 spins form a single 4-connected cluster; nullopt otherwise.
std::optional<std::pair<int, int>> u1_dims(const Configuration& config);

bool is_single_plus_cluster(const Configuration& config);

// True when the +1 spins form exactly a rectangle whose sides lie in the
// index set {2,..,n-3, n-2, n}; the geometric half of the local-minimum
// characterisation that u1_dims tests dynamically.
bool is_exact_plus_rectangle(const Configuration& config);

// One Metropolis proposal: uniform spin, accept downhill moves outright and
// uphill moves with probability exp(-beta * dH). Returns true if it flipped.
bool metropolis_step(Configuration& config, const ModelParams& params, Engine& rng);

// Zero-temperature limit: uniform spin, flip iff susceptible.
bool zero_temperature_step(Configuration& config, Engine& rng);

struct DownhillTrace {
    std::vector<TorusCoord> flips;
    Rat probability;  // product of 1/|Delta| along the path
};

// Samples one closed downhill path (uniform susceptible flip each step);
// `config` is advanced to the robust endpoint.
DownhillTrace sample_downhill_trace(Configuration& config, Engine& rng);

// Cells that can ever hold +1 on any downhill path: closure of the current
// +1 set under "a -1 cell with >= 2 +1 neighbours joins". Cells outside can
// never flip in either direction.
std::vector<std::uint8_t> active_closure_mask(const Configuration& config);

// Fills every closure cell with +1; from a configuration whose +1 spins all
// have >= 2 +1 neighbours this is the unique robust endpoint.
Configuration closure_fill(const Configuration& config);

// True when every +1 spin has >= 2 +1 neighbours; from such a configuration
// the downhill dynamics is monotone increasing and its endpoint is
// closure_fill(config) with probability one.
bool is_upward_committed(const Configuration& config);

struct ExactDistribution {
    // Sorted by configuration content; probabilities are exact and sum to 1.
    std::vector<std::pair<Configuration, Rat>> support;

    const Rat* probability_of(const Configuration& config) const;
    Rat total_mass() const;

    // "state,probability_numerator,probability_denominator" rows; the state
    // column is the +/- raster, rows joined by '|'.
    std::string to_csv() const;
};

struct EnumerationOptions {
    std::size_t state_cap = 8'000'000;  // memo entries before STATE_EXPLOSION
    bool restrict_to_active_window = true;  // key on the active closure only
    // Collapse states whose +1 spins all have >= 2 +1 neighbours straight to
    // their closure fill. Disabled only by equivalence tests; without it the
    // wrap-heavy cases are intractable.
    bool use_commitment_pruning = true;
};

// Exact distribution over robust endpoints of the zero-temperature dynamics:
// p(sigma) is the point mass for robust sigma, otherwise the mean of
// p(sigma^i) over susceptible spins i. Memoised on configuration content.
ExactDistribution downhill_endpoint_distribution(const Configuration& config,
                                                 const EnumerationOptions& options = {});

struct QKappaEstimate {
    std::map<Configuration, long long> terminal_counts;  // robust terminals only
    long long robust_hits = 0;
    long long reps = 0;
    double robust_fraction() const { return reps ? double(robust_hits) / double(reps) : 0.0; }
    // Conditional probability of a robust terminal given terminal robustness.
    double conditional(const Configuration& config) const;
};

// Runs `reps` independent kappa-step trajectories. With params present the
// finite-beta Metropolis kernel is used; nullopt selects the
// zero-temperature dynamics. Streams derive from (rng draw, replication).
QKappaEstimate estimate_q_kappa(const Configuration& config,
                                const std::optional<ModelParams>& params, long long kappa,
                                long long reps, Engine& rng);

}  // namespace isingmdp
