#include "isingmdp/rectmdp.hpp"

#include <algorithm>
#include <sstream>

#include "isingmdp/errors.hpp"

namespace isingmdp {

const char* to_string(RectAction action) {
    switch (action) {
        case RectAction::A11: return "a11";
        case RectAction::A12: return "a12";
        case RectAction::A21: return "a21";
        case RectAction::A22: return "a22";
        case RectAction::A11P: return "a11p";
        case RectAction::A12P: return "a12p";
        case RectAction::A21P: return "a21p";
        case RectAction::A22P: return "a22p";
        case RectAction::A0: return "a0";
        case RectAction::ATILDE: return "a_tilde";
        case RectAction::NOOP: return "noop";
    }
    return "?";
}

std::optional<RectAction> rect_action_from_string(const std::string& name) {
    for (int v = 0; v <= int(RectAction::NOOP); ++v) {
        RectAction a = RectAction(v);
        if (name == to_string(a)) return a;
    }
    return std::nullopt;
}

bool valid_rect_component(int v, int n) {
    return (v >= 2 && v <= n - 3) || v == n - 2 || v == n;
}

bool valid_rect_state(RectState s, int n) {
    if (s.i == 0 && s.j == 0) return true;
    return valid_rect_component(s.i, n) && valid_rect_component(s.j, n);
}

std::vector<RectState> rect_states(int n) {
    if (n < 6) throw std::invalid_argument("reduced MDP needs n >= 6");
    std::vector<int> comps;
    for (int v = 2; v <= n - 3; ++v) comps.push_back(v);
    comps.push_back(n - 2);
    comps.push_back(n);
    std::vector<RectState> out;
    out.push_back({0, 0});
    for (int i : comps)
        for (int j : comps) out.push_back({i, j});
    std::sort(out.begin(), out.end(), [](RectState a, RectState b) {
        if (a.i + a.j != b.i + b.j) return a.i + a.j < b.i + b.j;
        return a < b;
    });
    return out;
}

std::vector<RectAction> action_space(RectState s, int n) {
    using A = RectAction;
    if (!valid_rect_state(s, n)) throw std::invalid_argument("invalid reduced state");
    const int i = s.i, j = s.j;
    auto mid = [&](int v) { return v >= 3 && v <= n - 3; };  // 3..N-3
    if ((i == 0 && j == 0) || (i == n && j == n)) return {A::NOOP};
    if (i == 2 && j == 2) return {A::A11P, A::A12P, A::A21P, A::A22P, A::A0, A::ATILDE, A::NOOP};
    if (i == 2 && mid(j))
        return {A::A21, A::A22, A::A11P, A::A12P, A::A21P, A::A22P, A::A0, A::ATILDE, A::NOOP};
    if (i == 2 && j == n - 2)
        return {A::A21, A::A22, A::A11P, A::A21P, A::A22P, A::A0, A::ATILDE, A::NOOP};
    if (mid(i) && j == 2)
        return {A::A11, A::A12, A::A11P, A::A12P, A::A21P, A::A22P, A::A0, A::ATILDE, A::NOOP};
    if (i == n - 2 && j == 2)
        return {A::A11, A::A12, A::A11P, A::A12P, A::A21P, A::A0, A::ATILDE, A::NOOP};
    if (mid(i) && mid(j))
        return {A::A11, A::A12, A::A21, A::A22, A::A11P, A::A12P, A::A21P, A::A22P,
                A::A0,  A::ATILDE, A::NOOP};
    if (i == n - 2 && mid(j))
        return {A::A11, A::A12, A::A21, A::A11P, A::A12P, A::A21P, A::A0, A::ATILDE, A::NOOP};
    if (mid(i) && j == n - 2)
        return {A::A11, A::A21, A::A22, A::A11P, A::A21P, A::A22P, A::A0, A::ATILDE, A::NOOP};
    if (i == n - 2 && j == n - 2)
        return {A::A11, A::A21, A::A11P, A::A21P, A::A0, A::ATILDE, A::NOOP};
    if (i == n - 2 && j == n) return {A::A21, A::NOOP};
    if (i == n && j >= 2 && j <= n - 3) return {A::A11, A::A12, A::NOOP};
    if (i == n && j == n - 2) return {A::A11, A::NOOP};
    if (i >= 2 && i <= n - 3 && j == n) return {A::A21, A::A22, A::NOOP};
    throw std::logic_error("action space case table missed a state");
}

namespace {

using Row = std::vector<std::pair<RectState, Rat>>;

Row swap_row(Row row) {
    for (auto& [s, p] : row) s = s.swapped();
    return row;
}

// Kernel rows for the actions that grow the vertical extent j; the i-growing
// actions are their i<->j transposes.
Row horizontal_action_row(RectState s, RectAction a, int n) {
    const int i = s.i, j = s.j;
    switch (a) {
        case RectAction::A11:
            if (j <= n - 3) return {{{i, j}, Rat(1, 3)}, {{i, j + 1}, Rat(2, 3)}};
            return {{{i, n - 2}, Rat(1, 4)}, {{i, n}, Rat(3, 4)}};  // j == n-2
        case RectAction::A12:
            if (j <= n - 4)
                return {{{i, j}, Rat(5, 9)}, {{i, j + 1}, Rat(7, 27)}, {{i, j + 2}, Rat(5, 27)}};
            // j == n-3: the filled slab is one row short of wrapping, so the
            // distance-2 flip can cascade all the way to the full band.
            return {{{i, n - 3}, Rat(7, 18)},
                    {{i, n - 2}, Rat(31, 144)},
                    {{i, n}, Rat(19, 48)}};
        case RectAction::A11P:
            if (j <= n - 3) return {{{i, j}, Rat(1, 2)}, {{i, j + 1}, Rat(1, 2)}};
            return {{{i, n - 2}, Rat(1, 3)}, {{i, n}, Rat(2, 3)}};  // j == n-2
        case RectAction::A12P:
            if (j <= n - 4)
                return {{{i, j}, Rat(5, 8)}, {{i, j + 1}, Rat(1, 4)}, {{i, j + 2}, Rat(1, 8)}};
            return {{{i, n - 3}, Rat(4, 9)},
                    {{i, n - 2}, Rat(5, 27)},
                    {{i, n}, Rat(10, 27)}};  // j == n-3
        default: throw std::logic_error("not a horizontal action");
    }
}

Row a0_row(RectState s, int n) {
    const int i = s.i, j = s.j;
    if (i <= n - 3 && j <= n - 3)
        return {{{i, j}, Rat(4, 9)},
                {{i + 1, j}, Rat(1, 9)},
                {{i, j + 1}, Rat(1, 9)},
                {{i + 1, j + 1}, Rat(1, 3)}};
    if (i <= n - 3 && j == n - 2)
        return {{{i, n - 2}, Rat(5, 12)},
                {{i, n}, Rat(1, 8)},
                {{i + 1, n - 2}, Rat(1, 9)},
                {{i + 1, n}, Rat(25, 72)}};
    if (i == n - 2 && j <= n - 3)
        return {{{n - 2, j}, Rat(5, 12)},
                {{n, j}, Rat(1, 8)},
                {{n - 2, j + 1}, Rat(1, 9)},
                {{n, j + 1}, Rat(25, 72)}};
    // (n-2, n-2): both gaps are width 2, all four wrap cascades are live.
    return {{{n - 2, n - 2}, Rat(7, 18)},
            {{n, n - 2}, Rat(1, 8)},
            {{n - 2, n}, Rat(1, 8)},
            {{n, n}, Rat(13, 36)}};
}

Row atilde_row(RectState s) {
    const int i = s.i, j = s.j;
    if (i >= 3 && j >= 3) return {{{i, j}, Rat(1)}};
    if (i == 2 && j >= 3) return {{{2, j}, Rat(1, 2)}, {{2, j - 1}, Rat(1, 2)}};
    if (i >= 3 && j == 2) return {{{i, 2}, Rat(1, 2)}, {{i - 1, 2}, Rat(1, 2)}};
    return {{{2, 2}, Rat(1, 3)}, {{0, 0}, Rat(2, 3)}};  // (2,2)
}

}  // namespace

std::vector<std::pair<RectState, Rat>> kernel(RectState s, RectAction a, int n) {
    auto available = action_space(s, n);
    if (std::find(available.begin(), available.end(), a) == available.end())
        throw ActionNotAvailableError(std::string(to_string(a)) + " not available at (" +
                                      std::to_string(s.i) + "," + std::to_string(s.j) + ")");
    switch (a) {
        case RectAction::A11:
        case RectAction::A12:
        case RectAction::A11P:
        case RectAction::A12P: return horizontal_action_row(s, a, n);
        case RectAction::A21:
            return swap_row(horizontal_action_row(s.swapped(), RectAction::A11, n));
        case RectAction::A22:
            return swap_row(horizontal_action_row(s.swapped(), RectAction::A12, n));
        case RectAction::A21P:
            return swap_row(horizontal_action_row(s.swapped(), RectAction::A11P, n));
        case RectAction::A22P:
            return swap_row(horizontal_action_row(s.swapped(), RectAction::A12P, n));
        case RectAction::A0: return a0_row(s, n);
        case RectAction::ATILDE: return atilde_row(s);
        case RectAction::NOOP: return {{s, Rat(1)}};
    }
    throw std::logic_error("unhandled action");
}

int reward(RectState s, int n) { return (s.i == n && s.j == n) ? 1 : 0; }

std::set<RectAction> regime_action_set(RectState s, int k, int n) {
    using A = RectAction;
    if (k != 1 && k != 2) throw std::invalid_argument("regime k must be 1 or 2");
    if (!valid_rect_state(s, n)) throw std::invalid_argument("invalid reduced state");
    const int i = s.i, j = s.j;
    if (i == 0 && j == 0) return {A::NOOP};
    if (i == n && j == n) return {A::NOOP};
    if (i == n) {
        if (j == n - 2 || j == n - 4) return {A::A11};
        if (j == n - 3) return {A::A12};
        if (j >= 2 && j <= n - 5) return k == 1 ? std::set<A>{A::A11} : std::set<A>{A::A12};
    } else if (j == n) {
        if (i == n - 2 || i == n - 4) return {A::A21};
        if (i == n - 3) return {A::A22};
        if (i >= 2 && i <= n - 5) return k == 1 ? std::set<A>{A::A21} : std::set<A>{A::A22};
    } else if (i == n - 2) {
        if (j == n - 3) return {A::A12};
        if (j == n - 2 || (j >= 2 && j <= n - 4)) return {A::A0};
    } else if (j == n - 2) {
        if (i == n - 3) return {A::A22};
        if (i >= 2 && i <= n - 4) return {A::A0};
    } else if (i == n - 3) {
        if (j == n - 3) return {A::A12, A::A22};
        if (j >= 2 && j <= n - 4) return {A::A0};
    } else if (j == n - 3) {
        if (i >= 2 && i <= n - 4) return {A::A0};
    } else if (i >= 2 && i <= n - 4 && j >= 2 && j <= n - 4) {
        return {A::A0};
    }
    throw std::logic_error("optimal action case list does not cover (" + std::to_string(i) +
                           "," + std::to_string(j) + ")");
}

std::set<RectAction> optimal_decision_set(RectState s, const Rat& lambda, int n) {
    if (!(lambda > 0 && lambda < 1)) throw std::invalid_argument("lambda must lie in (0,1)");
    const Rat lc = critical_discount();
    if (lambda > lc) return regime_action_set(s, 1, n);
    if (lambda < lc) return regime_action_set(s, 2, n);
    auto a1 = regime_action_set(s, 1, n);
    auto a2 = regime_action_set(s, 2, n);
    a1.insert(a2.begin(), a2.end());
    return a1;
}

RectAction RectPolicy::at(RectState s, long long epoch) const {
    auto it = decision.find(s);
    if (it == decision.end())
        throw std::invalid_argument("policy has no decision for (" + std::to_string(s.i) + "," +
                                    std::to_string(s.j) + ")");
    return it->second[kind == Kind::Period2 ? int(epoch & 1) : 0];
}

RectPolicy regime_policy(int k, int n) {
    RectPolicy policy;
    policy.kind = RectPolicy::Kind::Stationary;
    for (RectState s : rect_states(n)) {
        auto set = regime_action_set(s, k, n);
        // The only non-singleton is (n-3, n-3); its two members have mirrored
        // effect and the vertical-growth one matches the closed-form recursion.
        RectAction chosen = set.size() == 1 ? *set.begin() : RectAction::A22;
        policy.decision[s] = {chosen, chosen};
    }
    return policy;
}

RectPolicy optimal_policy(const Rat& lambda, int n) {
    const Rat lc = critical_discount();
    return regime_policy(lambda >= lc ? 1 : 2, n);
}

RectPolicy benchmark_policy(BenchmarkKind which, int n) {
    using A = RectAction;
    RectPolicy policy;
    policy.kind = RectPolicy::Kind::Period2;
    for (RectState s : rect_states(n)) {
        const int i = s.i, j = s.j;
        std::array<A, 2> d{A::NOOP, A::NOOP};
        if ((i == 0 && j == 0) || (i == n && j == n)) {
            // keep NOOP
        } else if (which == BenchmarkKind::Pi1) {
            if (i == n)
                d = {A::A11, A::A11};
            else if (j == n)
                d = {A::A21, A::A21};
            else {
                const A grow_j = i >= 3 ? A::A11 : A::A11P;
                const A grow_i = j >= 3 ? A::A21 : A::A21P;
                d = {grow_j, grow_i};
            }
        } else {
            if (i == n)
                d = j <= n - 3 ? std::array<A, 2>{A::A12, A::A12}
                               : std::array<A, 2>{A::A11, A::A11};
            else if (j == n)
                d = i <= n - 3 ? std::array<A, 2>{A::A22, A::A22}
                               : std::array<A, 2>{A::A21, A::A21};
            else {
                A even = j <= n - 3 ? (i >= 3 ? A::A12 : A::A12P) : (i >= 3 ? A::A11 : A::A11P);
                A odd = i <= n - 3 ? (j >= 3 ? A::A22 : A::A22P) : (j >= 3 ? A::A21 : A::A21P);
                d = {even, odd};
            }
        }
        policy.decision[s] = d;
    }
    return policy;
}

std::map<RectState, Rat> closed_form_value(int k, const Rat& lambda, int n) {
    if (n < 8) throw std::invalid_argument("closed-form recursion needs n >= 8");
    if (!(lambda > 0 && lambda < 1)) throw std::invalid_argument("lambda must lie in (0,1)");
    if (k != 1 && k != 2) throw std::invalid_argument("regime k must be 1 or 2");
    const Rat l = lambda;
    std::map<RectState, Rat> v;
    auto get = [&](int i, int j) -> const Rat& {
        auto it = v.find(i >= j ? RectState{i, j} : RectState{j, i});
        if (it == v.end()) throw std::logic_error("closed-form recursion ordering bug");
        return it->second;
    };

    v[{n, n}] = Rat(1) / (1 - l);
    v[{n, n - 2}] = 3 * l / (4 - l) * get(n, n);
    v[{n, n - 3}] =
        31 * l / (8 * (18 - 7 * l)) * get(n, n - 2) + 57 * l / (8 * (18 - 7 * l)) * get(n, n);
    for (int j = n - 4; j >= 2; --j) {
        if (k == 1 || j == n - 4)
            v[{n, j}] = 2 * l / (3 - l) * get(n, j + 1);
        else
            v[{n, j}] = 7 * l / (3 * (9 - 5 * l)) * get(n, j + 1) +
                        5 * l / (3 * (9 - 5 * l)) * get(n, j + 2);
    }
    v[{n - 2, n - 2}] =
        9 * l / (2 * (18 - 7 * l)) * get(n, n - 2) + 13 * l / (2 * (18 - 7 * l)) * get(n, n);
    v[{n - 2, n - 3}] = 31 * l / (8 * (18 - 7 * l)) * get(n - 2, n - 2) +
                        57 * l / (8 * (18 - 7 * l)) * get(n, n - 2);  // v(n-2, n) mirror
    for (int j = n - 4; j >= 2; --j)
        v[{n - 2, j}] = Rat(12) / (12 - 5 * l) *
                        (l / 8 * get(n, j) + 25 * l / 72 * get(n, j + 1) +
                         l / 9 * get(n - 2, j + 1));
    v[{n - 3, n - 3}] = 31 * l / (8 * (18 - 7 * l)) * get(n - 2, n - 3) +
                        57 * l / (8 * (18 - 7 * l)) * get(n, n - 3);
    for (int i = n - 3; i >= 2; --i)
        for (int j = std::min(i, n - 4); j >= 2; --j)
            v[{i, j}] = l / (9 - 4 * l) *
                        (get(i, j + 1) + get(i + 1, j) + 3 * get(i + 1, j + 1));

    // Mirror onto i < j and close the table over the full state set.
    std::map<RectState, Rat> full;
    full[{0, 0}] = Rat(0);
    for (RectState s : rect_states(n)) {
        if (s.i == 0) continue;
        full[s] = s.i >= s.j ? v.at(s) : v.at(s.swapped());
    }
    return full;
}

namespace {

struct FamilyCheck {
    InequalityReport* report;
    const std::map<RectState, Rat>* values;
    int k;

    const Rat& v(int i, int j) const {
        return values->at(i >= j ? RectState{i, j} : RectState{j, i});
    }
    void strict(int family, const Rat& value, int i, int j) {
        ++report->instances_checked;
        if (!(value > 0)) report->violations.push_back({family, k, i, j, value});
    }
    void equal(int family, const Rat& value, int i, int j) {
        ++report->instances_checked;
        if (!(value == 0)) report->violations.push_back({family, k, i, j, value});
    }
};

}  // namespace

InequalityReport verify_bellman_inequalities(const Rat& lambda, int n) {
    if (n < 8) throw std::invalid_argument("inequality suite needs n >= 8");
    const Rat lc = critical_discount();
    InequalityReport report;
    report.families_checked = 22;
    report.equality_family_applicable = lambda == lc;

    std::vector<int> regimes;
    if (lambda >= lc) regimes.push_back(1);
    if (lambda <= lc) regimes.push_back(2);

    for (int k : regimes) {
        auto values = closed_form_value(k, lambda, n);
        FamilyCheck c{&report, &values, k};
        const int N = n;
        c.strict(1, 8 * c.v(N, N - 3) - 65 * c.v(N, N - 2) + 57 * c.v(N, N), N, N - 3);
        c.strict(2, -6 * c.v(N, N - 4) + 11 * c.v(N, N - 3) - 5 * c.v(N, N - 2), N, N - 4);
        if (k == 1 && lambda > lc)
            for (int j = 2; j <= N - 5; ++j)
                c.strict(3, -6 * c.v(N, j) + 11 * c.v(N, j + 1) - 5 * c.v(N, j + 2), N, j);
        if (k == 2 && lambda < lc)
            for (int j = 2; j <= N - 5; ++j)
                c.strict(4, 6 * c.v(N, j) - 11 * c.v(N, j + 1) + 5 * c.v(N, j + 2), N, j);
        if (lambda == lc)
            for (int j = 2; j <= N - 5; ++j)
                c.equal(5, -6 * c.v(N, j) + 11 * c.v(N, j + 1) - 5 * c.v(N, j + 2), N, j);
        c.strict(6, 5 * c.v(N - 2, N - 2) - 18 * c.v(N, N - 2) + 13 * c.v(N, N), N - 2, N - 2);
        c.strict(7, 8 * c.v(N - 2, N - 3) - 65 * c.v(N - 2, N - 2) + 57 * c.v(N - 2, N), N - 2,
                 N - 3);
        c.strict(8,
                 20 * c.v(N - 2, N - 3) + 31 * c.v(N - 2, N - 2) + 57 * c.v(N - 2, N) -
                     108 * c.v(N, N - 3),
                 N - 2, N - 3);
        c.strict(9,
                 -4 * c.v(N - 2, N - 3) + 15 * c.v(N - 2, N - 2) - 18 * c.v(N, N - 3) +
                     7 * c.v(N, N - 2),
                 N - 2, N - 3);
        for (int j = 2; j <= N - 4; ++j) {
            c.strict(10,
                     6 * c.v(N - 2, j) - 40 * c.v(N - 2, j + 1) + 9 * c.v(N, j) +
                         25 * c.v(N, j + 1),
                     N - 2, j);
            c.strict(11,
                     -30 * c.v(N - 2, j) - 32 * c.v(N - 2, j + 1) - 40 * c.v(N - 2, j + 2) +
                         27 * c.v(N, j) + 75 * c.v(N, j + 1),
                     N - 2, j);
            c.strict(12,
                     12 * c.v(N - 2, j) + 8 * c.v(N - 2, j + 1) - 45 * c.v(N, j) +
                         25 * c.v(N, j + 1),
                     N - 2, j);
        }
        c.strict(13, 8 * c.v(N - 3, N - 3) - 65 * c.v(N - 2, N - 3) + 57 * c.v(N, N - 3), N - 3,
                 N - 3);
        c.strict(14,
                 -8 * c.v(N - 3, N - 3) - c.v(N - 2, N - 3) - 48 * c.v(N - 2, N - 2) +
                     57 * c.v(N, N - 3),
                 N - 3, N - 3);
        for (int j = 2; j <= N - 4; ++j) {
            c.strict(15,
                     c.v(N - 3, j) - 5 * c.v(N - 3, j + 1) + c.v(N - 2, j) +
                         3 * c.v(N - 2, j + 1),
                     N - 3, j);
            c.strict(16,
                     -3 * c.v(N - 3, j) - 4 * c.v(N - 3, j + 1) - 5 * c.v(N - 3, j + 2) +
                         3 * c.v(N - 2, j) + 9 * c.v(N - 2, j + 1),
                     N - 3, j);
            c.strict(17,
                     c.v(N - 3, j) + c.v(N - 3, j + 1) - 5 * c.v(N - 2, j) +
                         3 * c.v(N - 2, j + 1),
                     N - 3, j);
            c.strict(18,
                     8 * c.v(N - 3, j) + 16 * c.v(N - 3, j + 1) - 15 * c.v(N - 2, j) +
                         48 * c.v(N - 2, j + 1) - 57 * c.v(N, j),
                     N - 3, j);
        }
        for (int i = 2; i <= N - 4; ++i) {
            for (int j = 2; j <= N - 4; ++j) {
                c.strict(19,
                         c.v(i, j) + c.v(i + 1, j) - 5 * c.v(i, j + 1) + 3 * c.v(i + 1, j + 1),
                         i, j);
                c.strict(20,
                         c.v(i, j) - 5 * c.v(i + 1, j) + c.v(i, j + 1) + 3 * c.v(i + 1, j + 1),
                         i, j);
                c.strict(21,
                         -3 * c.v(i, j) + 3 * c.v(i + 1, j) - 4 * c.v(i, j + 1) +
                             9 * c.v(i + 1, j + 1) - 5 * c.v(i, j + 2),
                         i, j);
                c.strict(22,
                         -3 * c.v(i, j) - 4 * c.v(i + 1, j) + 3 * c.v(i, j + 1) +
                             9 * c.v(i + 1, j + 1) - 5 * c.v(i + 2, j),
                         i, j);
            }
        }
    }
    return report;
}

RectState rect_state_of(const Configuration& config) {
    if (config.count_plus() == 0) return {0, 0};
    auto dims = u1_dims(config);
    if (!dims) throw NotAU1ConfigError("configuration is not a robust single-cluster rectangle");
    if (!valid_rect_state({dims->first, dims->second}, config.n()))
        throw NotAU1ConfigError("rectangle dimensions outside the reduced index set");
    return {dims->first, dims->second};
}

RectAction classify_flip(const Configuration& config, std::optional<TorusCoord> spin) {
    using A = RectAction;
    if (config.count_plus() != 0) (void)rect_state_of(config);  // precondition check
    if (!spin) return A::NOOP;
    const TorusCoord a = *spin;
    const int n = config.n();
    auto plus = config.plus_cells();
    if (plus.empty()) return A::NOOP;

    auto corners = classify_spins(config).corners;
    auto is_corner = [&](TorusCoord c) {
        return std::find(corners.begin(), corners.end(), c) != corners.end();
    };
    if (config.at(a) > 0) return is_corner(a) ? A::ATILDE : A::NOOP;

    auto dv = set_directional_distance(a, plus, n, Axis::Vertical);
    auto dh = set_directional_distance(a, plus, n, Axis::Horizontal);
    if (dv && (*dv == 1 || *dv == 2)) {
        auto mu = nearest_in_set_directional(a, plus, n, Axis::Vertical);
        const bool corner = !mu.empty() && is_corner(mu.front());
        if (*dv == 1) return corner ? A::A11P : A::A11;
        return corner ? A::A12P : A::A12;
    }
    if (dh && (*dh == 1 || *dh == 2)) {
        auto mu = nearest_in_set_directional(a, plus, n, Axis::Horizontal);
        const bool corner = !mu.empty() && is_corner(mu.front());
        if (*dh == 1) return corner ? A::A21P : A::A21;
        return corner ? A::A22P : A::A22;
    }
    auto d = set_distance(a, plus, n);
    if (d && *d == 2 && !dh && !dv) return A::A0;
    return A::NOOP;
}

int ExplicitRectMdp::state_index(RectState s) const {
    auto it = index.find(s);
    if (it == index.end()) throw std::invalid_argument("state not in the reduced MDP");
    return it->second;
}

int ExplicitRectMdp::action_index(int state_idx, RectAction a) const {
    const auto& list = actions.at(state_idx);
    auto it = std::find(list.begin(), list.end(), a);
    if (it == list.end())
        throw ActionNotAvailableError(std::string(to_string(a)) + " not available here");
    return int(it - list.begin());
}

PolicyIndex ExplicitRectMdp::policy_index_of(const RectPolicy& policy) const {
    if (policy.kind != RectPolicy::Kind::Stationary)
        throw std::invalid_argument("period-2 policies need the parity-doubled evaluator");
    PolicyIndex out(states.size());
    for (std::size_t s = 0; s < states.size(); ++s)
        out[s] = action_index(int(s), policy.at(states[s], 0));
    return out;
}

ExplicitRectMdp build_explicit_mdp(int n, const Rat& lambda) {
    if (n < 8) throw std::invalid_argument("explicit reduced MDP needs n >= 8");
    ExplicitRectMdp out;
    out.n = n;
    out.states = rect_states(n);
    for (std::size_t k = 0; k < out.states.size(); ++k) out.index[out.states[k]] = int(k);
    out.actions.resize(out.states.size());
    out.mdp.discount = lambda;
    out.mdp.states.resize(out.states.size());
    for (std::size_t k = 0; k < out.states.size(); ++k) {
        const RectState s = out.states[k];
        auto acts = action_space(s, n);
        std::sort(acts.begin(), acts.end());
        out.actions[k] = acts;
        for (RectAction a : acts) {
            typename FiniteMdp<Rat>::ActionRow row;
            row.action_id = int(a);
            row.reward = Rat(reward(s, n));
            for (const auto& [target, p] : kernel(s, a, n))
                row.transitions.push_back({out.index.at(target), p});
            out.mdp.states[k].push_back(std::move(row));
        }
    }
    return out;
}

std::map<RectState, Rat> evaluate_period2_policy(const ExplicitRectMdp& rmdp,
                                                 const RectPolicy& policy) {
    const int m = int(rmdp.states.size());
    FiniteMdp<Rat> doubled;
    doubled.discount = rmdp.mdp.discount;
    doubled.states.resize(std::size_t(m) * 2);
    for (int s = 0; s < m; ++s) {
        for (int parity = 0; parity < 2; ++parity) {
            typename FiniteMdp<Rat>::ActionRow row;
            row.action_id = 0;
            row.reward = Rat(reward(rmdp.states[s], rmdp.n));
            const RectAction a = policy.at(rmdp.states[s], parity);
            for (const auto& [target, p] : kernel(rmdp.states[s], a, rmdp.n))
                row.transitions.push_back({rmdp.state_index(target) * 2 + (1 - parity), p});
            doubled.states[std::size_t(s) * 2 + parity].push_back(std::move(row));
        }
    }
    PolicyIndex trivial(std::size_t(m) * 2, 0);
    auto values = policy_evaluation_exact(doubled, trivial);
    std::map<RectState, Rat> out;
    for (int s = 0; s < m; ++s) out[rmdp.states[s]] = values[std::size_t(s) * 2];
    return out;
}

std::string kernel_csv(int n) {
    std::ostringstream out;
    out << "i,j,action,i2,j2,num,den\n";
    for (RectState s : rect_states(n)) {
        for (RectAction a : action_space(s, n)) {
            for (const auto& [target, p] : kernel(s, a, n)) {
                out << s.i << ',' << s.j << ',' << to_string(a) << ',' << target.i << ','
                    << target.j << ',' << boost::multiprecision::numerator(p) << ','
                    << boost::multiprecision::denominator(p) << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace isingmdp
