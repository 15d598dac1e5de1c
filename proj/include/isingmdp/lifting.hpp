#pragma once

#include <optional>

#include "isingmdp/lattice.hpp"
#include "isingmdp/rectmdp.hpp"

namespace isingmdp {

// Concrete spin realising a reduced action against the circumscribed
// rectangle of the +1 cluster. Fixed conventions: horizontal actions target
// the larger-y side, vertical actions the larger-x side, even side lengths
// break the middle tie toward the smaller coordinate, a0 targets the
// diagonal neighbour of the (larger x, larger y) corner and a_tilde that
// corner itself. Returns nullopt for noop.
std::optional<TorusCoord> lift_decision(const Configuration& config, RectAction action);

struct LatticePolicy {
    enum class Kind { LiftedOptimal, LiftedPi1, LiftedPi2 };
    Kind kind = Kind::LiftedOptimal;
    RectPolicy reduced;

    static LatticePolicy lifted_optimal(const Rat& lambda, int n);
    static LatticePolicy lifted_benchmark(BenchmarkKind which, int n);
};

struct PolicyStep {
    std::optional<TorusCoord> flip;  // nullopt = leave the configuration intact
    bool outside_lens = false;       // bounding box not a reduced state; fell back to noop
};

// Reads the cluster through its circumscribed rectangle, queries the reduced
// policy at (size, epoch parity) and lifts the action. Ragged clusters are
// identified with their bounding box; boxes with a side outside the reduced
// index set fall back to noop and are flagged.
PolicyStep step_policy(const Configuration& config, long long epoch,
                       const LatticePolicy& policy);

}  // namespace isingmdp
