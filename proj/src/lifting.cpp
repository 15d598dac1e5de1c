#include "isingmdp/lifting.hpp"

#include "isingmdp/errors.hpp"

namespace isingmdp {

std::optional<TorusCoord> lift_decision(const Configuration& config, RectAction action) {
    if (action == RectAction::NOOP) return std::nullopt;
    auto rect = circumscribed_rectangle(config);
    if (!rect) throw NoClusterError("action requires a +1 cluster");
    const int n = config.n();
    auto wrap = [n](int v) { return ((v % n) + n) % n; };

    const int top = wrap(rect->anchor.y + rect->height - 1);
    const int right = wrap(rect->anchor.x + rect->width - 1);
    const int x_mid = wrap(rect->anchor.x + (rect->width - 1) / 2);
    const int y_mid = wrap(rect->anchor.y + (rect->height - 1) / 2);

    switch (action) {
        case RectAction::A11: return TorusCoord{x_mid, wrap(top + 1)};
        case RectAction::A12: return TorusCoord{x_mid, wrap(top + 2)};
        case RectAction::A11P: return TorusCoord{right, wrap(top + 1)};
        case RectAction::A12P: return TorusCoord{right, wrap(top + 2)};
        case RectAction::A21: return TorusCoord{wrap(right + 1), y_mid};
        case RectAction::A22: return TorusCoord{wrap(right + 2), y_mid};
        case RectAction::A21P: return TorusCoord{wrap(right + 1), top};
        case RectAction::A22P: return TorusCoord{wrap(right + 2), top};
        case RectAction::A0: return TorusCoord{wrap(right + 1), wrap(top + 1)};
        case RectAction::ATILDE: return TorusCoord{right, top};
        case RectAction::NOOP: return std::nullopt;
    }
    return std::nullopt;
}

LatticePolicy LatticePolicy::lifted_optimal(const Rat& lambda, int n) {
    LatticePolicy policy;
    policy.kind = Kind::LiftedOptimal;
    policy.reduced = optimal_policy(lambda, n);
    return policy;
}

LatticePolicy LatticePolicy::lifted_benchmark(BenchmarkKind which, int n) {
    LatticePolicy policy;
    policy.kind = which == BenchmarkKind::Pi1 ? Kind::LiftedPi1 : Kind::LiftedPi2;
    policy.reduced = benchmark_policy(which, n);
    return policy;
}

PolicyStep step_policy(const Configuration& config, long long epoch,
                       const LatticePolicy& policy) {
    PolicyStep out;
    std::optional<Rect> rect;
    try {
        rect = circumscribed_rectangle(config);
    } catch (const AmbiguousWrapError&) {
        // Near-full transient: the cluster touches every row and column while
        // the last gap fills. No rectangle reading exists, so wait.
        out.outside_lens = true;
        return out;
    }
    RectState state{0, 0};
    if (rect) {
        state = {rect->width, rect->height};
        if (!valid_rect_state(state, config.n())) {
            out.outside_lens = true;
            return out;
        }
    }
    const RectAction action = policy.reduced.at(state, epoch);
    out.flip = lift_decision(config, action);
    return out;
}

}  // namespace isingmdp
