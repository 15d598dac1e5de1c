#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isingmdp/lattice.hpp"
#include "isingmdp/lifting.hpp"
#include "isingmdp/rational.hpp"

namespace isingmdp {

struct ExperimentConfig {
    int n = 20;
    double h = 0.4;
    double beta = 10.0;
    long long kappa = 1000;
    std::string policy = "opt";  // opt | pi1 | pi2
    Rat lambda = Rat(9, 10);     // regime selector for the lifted optimal policy
    long long max_epochs = 2000;
    long long replications = 20;
    std::uint64_t master_seed = 1;
    std::string start_snapshot;  // path; empty means a centred 3x3 seed rectangle
    std::string output_dir = ".";
    std::string snapshot_dir;     // empty = do not write epoch snapshots
    long long snapshot_every = 0;  // epochs between snapshots (0 = endpoints only)

    void validate() const;
};

// Flat key=value file (one pair per line, '#' comments); unknown keys are an
// error so typos do not silently fall back to defaults.
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value);

LatticePolicy policy_by_name(const std::string& name, const Rat& lambda, int n);

struct RunRecord {
    std::uint64_t seed = 0;
    std::optional<long long> hit_epoch;      // nullopt = NOT_HIT within max_epochs
    std::vector<std::pair<int, int>> sizes;  // circumscribed rectangle per epoch;
                                             // (-1,-1) when no covering rectangle
                                             // smaller than the torus exists
    long long lens_fallbacks = 0;            // epochs where the box left the index set
    long long wrap_ambiguous_epochs = 0;     // epochs with the (-1,-1) reading
    std::vector<std::string> snapshot_paths;

    // Canonical text form; the determinism contract compares these bytes.
    std::string to_text() const;
};

Configuration starting_configuration(const ExperimentConfig& cfg);

// One seeded trajectory: at every decision epoch apply the lifted policy's
// flip, then run kappa Metropolis steps at beta; stops at all-plus or after
// max_epochs epochs. Fully determined by (cfg, seed).
RunRecord run_simulation(const ExperimentConfig& cfg, const LatticePolicy& policy,
                         std::uint64_t seed);

struct SweepRow {
    long long kappa = 0;
    std::string policy;
    std::uint64_t seed = 0;
    long long rep = 0;
    std::optional<long long> hit_epochs;
    std::optional<long long> hit_steps;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ordered by (kappa, policy, rep)
    std::string rows_csv() const;     // kappa,policy,seed,hit_epochs,hit_steps
    std::string summary_csv() const;  // per-cell mean/sd in epochs and steps
};

// Grid sweep over kappa values and policy names; replication r of each cell
// draws its seed from (master_seed, kappa, policy, r), so results are
// independent of worker count and of the total replication budget.
SweepResult hitting_time_sweep(const ExperimentConfig& base,
                               const std::vector<long long>& kappas,
                               const std::vector<std::string>& policies, long long reps,
                               int workers = 0);

}  // namespace isingmdp
