#include <algorithm>
#include <string>

#include "dmleaf/solver.hpp"

namespace dmleaf {

// A tree with internal vertex set I is an out-branching of d[I] plus one arc
// from I into every other vertex it keeps. So l_s is the largest n - |I| over
// sets I that induce a digraph with an out-branching and dominate V \ I, and
// l is the largest |N+(I) \ I| over sets I that induce a digraph with an
// out-branching. A single vertex is a one-leaf tree.

namespace {

void guard(const Digraph& d, const char* who) {
    if (d.order() > brute_force_max_order) {
        throw ContractError(std::string(who) + ": order " + std::to_string(d.order()) + " exceeds " +
                            std::to_string(brute_force_max_order));
    }
}

VertexSet members(int n, unsigned mask) {
    VertexSet out;
    for (Vertex v = 0; v < n; ++v) {
        if (mask >> v & 1U) out.push_back(v);
    }
    return out;
}

std::vector<unsigned> out_masks(const Digraph& d) {
    std::vector<unsigned> m(d.order(), 0);
    for (const auto& [u, v] : d.arcs()) m[u] |= 1U << v;
    return m;
}

/// True iff d[mask] has an out-branching, i.e. some member reaches all others
/// inside the mask.
bool induces_branching(const std::vector<unsigned>& out, unsigned mask) {
    for (Vertex r = 0; r < static_cast<Vertex>(out.size()); ++r) {
        if (!(mask >> r & 1U)) continue;
        unsigned seen = 1U << r;
        unsigned frontier = seen;
        while (frontier) {
            unsigned next = 0;
            for (Vertex v = 0; v < static_cast<Vertex>(out.size()); ++v) {
                if (frontier >> v & 1U) next |= out[v];
            }
            next &= mask & ~seen;
            seen |= next;
            frontier = next;
        }
        if (seen == mask) return true;
    }
    return false;
}

/// Out-branching of d[internal] extended by one arc into each of `attach`.
OutTree build_tree(const Digraph& d, unsigned internal, unsigned attach) {
    const int n = d.order();
    auto sub = induced_subdigraph(d, members(n, internal));
    OutTree t = lift_out_tree(find_out_branching(sub.digraph), sub.to_original, n);
    for (Vertex v = 0; v < n; ++v) {
        if (!(attach >> v & 1U)) continue;
        for (Vertex u : d.in(v)) {
            if (internal >> u & 1U) {
                t.parent[v] = u;
                break;
            }
        }
    }
    return t;
}

OutTree single_vertex(Vertex v, int n) {
    OutTree t;
    t.root = v;
    t.host_size = n;
    return t;
}

}  // namespace

OracleResult brute_force_out_branching(const Digraph& d) {
    guard(d, "brute_force_out_branching");
    const int n = d.order();
    if (n == 0 || !has_out_branching(d)) return {0, std::nullopt};
    if (n == 1) return {1, single_vertex(0, 1)};

    const auto out = out_masks(d);
    const unsigned all = (1U << n) - 1;
    int best = -1;
    unsigned best_mask = 0;
    for (unsigned mask = 1; mask <= all; ++mask) {
        int leaves = n - __builtin_popcount(mask);
        if (leaves <= best) continue;
        unsigned dominated = mask;
        for (Vertex v = 0; v < n; ++v) {
            if (mask >> v & 1U) dominated |= out[v];
        }
        if (dominated != all || !induces_branching(out, mask)) continue;
        best = leaves;
        best_mask = mask;
    }
    OutTree t = build_tree(d, best_mask, all & ~best_mask);
    return {t.leaf_count(), std::move(t)};
}

OracleResult brute_force_out_tree(const Digraph& d) {
    guard(d, "brute_force_out_tree");
    const int n = d.order();
    if (n == 0) return {0, std::nullopt};

    const auto out = out_masks(d);
    const unsigned all = (1U << n) - 1;
    int best = 1;
    unsigned best_mask = 0;
    unsigned best_attach = 0;
    for (unsigned mask = 1; mask <= all; ++mask) {
        unsigned reach = 0;
        for (Vertex v = 0; v < n; ++v) {
            if (mask >> v & 1U) reach |= out[v];
        }
        reach &= ~mask;
        int leaves = __builtin_popcount(reach);
        if (leaves <= best || !induces_branching(out, mask)) continue;
        best = leaves;
        best_mask = mask;
        best_attach = reach;
    }
    if (best_mask == 0) return {1, single_vertex(0, n)};
    OutTree t = build_tree(d, best_mask, best_attach);
    return {t.leaf_count(), std::move(t)};
}

bool in_L_exact(const Digraph& d, int max_order) {
    if (d.order() > std::min(max_order, brute_force_max_order)) {
        throw BudgetExceeded("in_L_exact: order " + std::to_string(d.order()) + " exceeds oracle budget");
    }
    int spanning = brute_force_out_branching(d).value;
    return spanning == 0 || spanning == brute_force_out_tree(d).value;
}

}  // namespace dmleaf
