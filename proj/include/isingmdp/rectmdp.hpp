#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "isingmdp/dynamics.hpp"
#include "isingmdp/lattice.hpp"
#include "isingmdp/mdpsolve.hpp"
#include "isingmdp/rational.hpp"

namespace isingmdp {

// State of the reduced MDP: the side lengths of the +1 rectangle, (0,0) for
// the all-minus configuration. Valid components lie in {2,..,n-3, n-2, n}.
struct RectState {
    int i = 0;  // width (columns)
    int j = 0;  // height (rows)
    friend bool operator==(RectState a, RectState b) { return a.i == b.i && a.j == b.j; }
    friend bool operator!=(RectState a, RectState b) { return !(a == b); }
    friend bool operator<(RectState a, RectState b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    }
    RectState swapped() const { return {j, i}; }
};

// Closed 11-symbol action alphabet. Numeric order doubles as the greedy
// tie-breaking order of the solver.
enum class RectAction : int {
    A11 = 0,   // flip at vertical distance 1 from a horizontal side, non-corner below
    A12 = 1,   // vertical distance 2, non-corner below
    A21 = 2,   // horizontal distance 1 from a vertical side, non-corner beside
    A22 = 3,   // horizontal distance 2, non-corner beside
    A11P = 4,  // vertical distance 1 above a corner
    A12P = 5,
    A21P = 6,
    A22P = 7,
    A0 = 8,      // diagonally adjacent to a corner
    ATILDE = 9,  // flip a corner of the rectangle itself
    NOOP = 10,
};

const char* to_string(RectAction action);
std::optional<RectAction> rect_action_from_string(const std::string& name);

bool valid_rect_component(int v, int n);
bool valid_rect_state(RectState s, int n);

// All states of the reduced MDP, sorted by (i+j, i); (0,0) first.
std::vector<RectState> rect_states(int n);

std::vector<RectAction> action_space(RectState s, int n);

// Exact one-step kernel rows from the closed-form case tables; throws
// ActionNotAvailableError when the action is not in action_space(s, n).
std::vector<std::pair<RectState, Rat>> kernel(RectState s, RectAction a, int n);

int reward(RectState s, int n);

inline Rat critical_discount() { return Rat(15, 17); }

// The two stationary optimal-candidate regimes: k = 1 favours the safe
// distance-1 growth above the critical discount, k = 2 the distance-2 growth
// below it.
std::set<RectAction> regime_action_set(RectState s, int k, int n);

// Optimal decision set at discount lambda: regime 1 above 15/17, regime 2
// below, their union exactly at the critical value.
std::set<RectAction> optimal_decision_set(RectState s, const Rat& lambda, int n);

struct RectPolicy {
    enum class Kind { Stationary, Period2 };
    Kind kind = Kind::Stationary;
    // Action per state and epoch parity; stationary policies ignore parity.
    std::map<RectState, std::array<RectAction, 2>> decision;

    RectAction at(RectState s, long long epoch) const;
};

// Canonical stationary policy of regime k (the (N-3,N-3) tie resolved to the
// vertical-growth member so the closed-form recursion applies verbatim).
RectPolicy regime_policy(int k, int n);

// Stationary optimal policy for a given discount (ties at the critical
// discount resolve to the regime-1 action).
RectPolicy optimal_policy(const Rat& lambda, int n);

enum class BenchmarkKind { Pi1, Pi2 };

// Alternating-sides benchmark policies: distance-1 (pi1) or distance-2 (pi2)
// growth on the horizontal side at even epochs and the vertical side at odd
// epochs, with full-side states pinned to their only growth action. Where the
// unprimed action does not exist (side length 2) the primed counterpart is
// used, matching what the lifted lattice policy does.
RectPolicy benchmark_policy(BenchmarkKind which, int n);

// Closed-form values of the regime-k policy by backward recursion over
// rectangle size, exact in lambda. Requires n >= 8.
std::map<RectState, Rat> closed_form_value(int k, const Rat& lambda, int n);

struct InequalityViolation {
    int family = 0;
    int k = 0;
    int i = 0;
    int j = 0;
    Rat value;
};

struct InequalityReport {
    int families_checked = 0;
    long long instances_checked = 0;
    bool equality_family_applicable = false;
    std::vector<InequalityViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Evaluates the 22 Bellman inequality families in the regime(s) matching
// lambda; at the critical discount the distance-1/distance-2 family becomes
// an exact equality.
InequalityReport verify_bellman_inequalities(const Rat& lambda, int n);

// Mapping from lattice configurations to reduced states: all-minus -> (0,0),
// single-cluster robust rectangles -> their dimensions. Throws
// NotAU1ConfigError otherwise.
RectState rect_state_of(const Configuration& config);

// Classifies a spin flip (nullopt = no flip) relative to a configuration in
// U1 or the all-minus configuration, by the distance-and-corner case table.
RectAction classify_flip(const Configuration& config, std::optional<TorusCoord> spin);

struct ExplicitRectMdp {
    int n = 0;
    std::vector<RectState> states;
    std::map<RectState, int> index;
    std::vector<std::vector<RectAction>> actions;  // per state, ascending ids
    FiniteMdp<Rat> mdp;                            // discount left for caller

    int state_index(RectState s) const;
    int action_index(int state_idx, RectAction a) const;
    PolicyIndex policy_index_of(const RectPolicy& policy) const;  // stationary only
};

// Materialises (states, actions, kernel, reward) with the given discount.
ExplicitRectMdp build_explicit_mdp(int n, const Rat& lambda);

// Stationary MDP on (state, parity) pairs realising a period-2 policy;
// returns values at even parity for every state.
std::map<RectState, Rat> evaluate_period2_policy(const ExplicitRectMdp& rmdp,
                                                 const RectPolicy& policy);

// Audit dump, one row per transition: "i,j,action,i2,j2,num,den".
std::string kernel_csv(int n);

}  // namespace isingmdp
