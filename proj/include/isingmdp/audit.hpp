#pragma once

#include <map>
#include <string>
#include <vector>

#include "isingmdp/dynamics.hpp"
#include "isingmdp/rectmdp.hpp"

namespace isingmdp {

// One kernel equation class: a reduced state whose case row the audit
// exercises with a concrete lattice representative.
struct KernelAuditEntry {
    RectState state;
    RectAction action;
    TorusCoord spin;                        // representative flip
    std::map<RectState, Rat> oracle;        // enumeration, summed per reduced state
    std::map<RectState, int> multiplicity;  // robust endpoints per reduced state
    std::map<RectState, Rat> table;         // kernel() row
    bool matches = false;
};

struct KernelAuditReport {
    int n = 0;
    std::vector<KernelAuditEntry> entries;
    int mismatches() const;
    bool ok() const { return mismatches() == 0; }
    std::string summary() const;  // one line per class
};

// The 24 case rows of the kernel table, each with a representative rectangle
// embedded at the given lattice size (n >= 8).
std::vector<std::pair<RectState, RectAction>> kernel_audit_classes(int n);

// Embeds each class, runs the exact downhill enumeration from the
// post-decision configuration, maps endpoints through the state mapping and
// compares against the kernel table.
KernelAuditReport audit_kernel(int n, const EnumerationOptions& options = {});

// Oracle distribution for one (state, action) pair using the given
// representative spin (defaults to the lifted one when spin is nullopt).
KernelAuditEntry audit_kernel_case(RectState s, RectAction a, int n,
                                   std::optional<TorusCoord> spin = std::nullopt,
                                   const EnumerationOptions& options = {});

}  // namespace isingmdp
