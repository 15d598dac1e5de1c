#include "isingmdp/audit.hpp"

#include <sstream>

#include "isingmdp/lifting.hpp"

namespace isingmdp {

std::vector<std::pair<RectState, RectAction>> kernel_audit_classes(int n) {
    if (n < 8) throw std::invalid_argument("kernel audit needs n >= 8");
    using A = RectAction;
    const int mid = 4, mid2 = 5;  // generic side lengths away from every special case
    return {
        {{mid2, mid}, A::A11},        {{mid, mid2}, A::A21},
        {{mid2, mid}, A::A12},        {{mid, mid2}, A::A22},
        {{mid, mid}, A::A0},          {{mid, mid}, A::A11P},
        {{mid, mid}, A::A21P},        {{mid, mid}, A::A12P},
        {{mid, mid}, A::A22P},
        {{mid2, n - 2}, A::A11},      {{n - 2, mid2}, A::A21},
        {{mid2, n - 3}, A::A12},      {{n - 3, mid2}, A::A22},
        {{mid2, n - 2}, A::A0},       {{n - 2, mid2}, A::A0},
        {{n - 2, n - 2}, A::A0},
        {{mid2, n - 2}, A::A11P},     {{n - 2, mid2}, A::A21P},
        {{mid2, n - 3}, A::A12P},     {{n - 3, mid2}, A::A22P},
        {{mid, mid}, A::ATILDE},      {{2, mid2}, A::ATILDE},
        {{mid2, 2}, A::ATILDE},       {{2, 2}, A::ATILDE},
    };
}

KernelAuditEntry audit_kernel_case(RectState s, RectAction a, int n,
                                   std::optional<TorusCoord> spin,
                                   const EnumerationOptions& options) {
    KernelAuditEntry entry;
    entry.state = s;
    entry.action = a;
    auto config = rectangle_config(n, s.i, s.j, {0, 0});
    if (!spin) spin = lift_decision(config, a);
    entry.spin = *spin;
    auto post = config.flipped(*spin);
    auto dist = downhill_endpoint_distribution(post, options);
    for (const auto& [endpoint, p] : dist.support) {
        RectState target = rect_state_of(endpoint);
        entry.oracle[target] += p;
        entry.multiplicity[target] += 1;
    }
    for (const auto& [target, p] : kernel(s, a, n)) entry.table[target] = p;
    entry.matches = entry.oracle == entry.table;
    return entry;
}

KernelAuditReport audit_kernel(int n, const EnumerationOptions& options) {
    KernelAuditReport report;
    report.n = n;
    for (auto [s, a] : kernel_audit_classes(n))
        report.entries.push_back(audit_kernel_case(s, a, n, std::nullopt, options));
    return report;
}

int KernelAuditReport::mismatches() const {
    int bad = 0;
    for (const auto& entry : entries) bad += !entry.matches;
    return bad;
}

std::string KernelAuditReport::summary() const {
    std::ostringstream out;
    for (const auto& entry : entries) {
        out << (entry.matches ? "ok      " : "MISMATCH") << "  (" << entry.state.i << ","
            << entry.state.j << ") " << to_string(entry.action) << "\n";
        if (!entry.matches) {
            for (const auto& [target, p] : entry.table)
                out << "    table  (" << target.i << "," << target.j << ") = " << p << "\n";
            for (const auto& [target, p] : entry.oracle)
                out << "    oracle (" << target.i << "," << target.j << ") = " << p << " ~ "
                    << to_double(p) << "\n";
        }
    }
    out << (mismatches() == 0
                ? "all " + std::to_string(entries.size()) + " kernel equation classes verified"
                : std::to_string(mismatches()) + " of " + std::to_string(entries.size()) +
                      " kernel equation classes mismatch the enumeration oracle")
        << "\n";
    return out.str();
}

}  // namespace isingmdp
