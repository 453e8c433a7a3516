#pragma once

// Lower bounds on the number of leaves of a best out-branching, and an
// empirical checker that measures instances with the exact oracle.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dmleaf/digraph.hpp"
#include "dmleaf/generators.hpp"

namespace dmleaf {

/// (n/2)^(1/5) - 1: oriented with min in-degree >= 2, or min in-degree >= 3.
double theorem_main_bound(int n);
/// 2k^5: order bound for in-degree-2 oriented graphs without a k-leaf out-tree.
long long lemma_order_bound(int k);
double tournament_bound(int n);
double multipartite_bound(int n);

/// Smallest integer that satisfies the bound, with 1e-9 downward slack.
int required_leaves(double bound);

enum class InDegreeMode { oriented_two, any_three };

/// Drops arcs outside the spanning out-branching `t` until every in-degree is
/// exactly 2, keeping the tree arc plus the smallest extra tails. In
/// any_three mode the double arcs of the cover paths of `t` go first.
Digraph reduce_in_degree_two(const Digraph& d, const OutTree& t, InDegreeMode mode);

struct BoundReport {
    std::string instance_id;
    std::string family;
    int n = 0;
    std::uint64_t seed = 0;
    std::string bound_name;
    double bound_value = 0.0;
    int measured = 0;
    bool holds = true;
    bool skipped = false;
    std::string skipped_reason;
    int source_count = 0;
    std::string membership;   // "sufficient", "exact", "no" or "" when not examined
    bool vacuous = false;     // bound below one leaf, so any out-branching meets it
};

struct BoundCheckSummary {
    std::vector<BoundReport> reports;
    int checked = 0;
    int skipped = 0;
    int violations = 0;
    int vacuous = 0;

    bool ok() const { return violations == 0; }
};

BoundCheckSummary check_bounds(const std::vector<GenSpec>& specs, int oracle_budget);

void write_bounds_csv(std::ostream& out, const std::vector<BoundReport>& reports);

}  // namespace dmleaf
