#pragma once

// Test-only reference computations. Each one works straight from a definition
// and shares no code path with the library routine it is used to check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "dmleaf/digraph.hpp"

namespace oracle {

using dmleaf::Arc;
using dmleaf::Digraph;
using dmleaf::Vertex;

/// Every labeled digraph on n vertices (no loops), in mask order.
inline std::vector<Digraph> all_digraphs(int n) {
    std::vector<Arc> slots;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = 0; v < n; ++v) {
            if (u != v) slots.emplace_back(u, v);
        }
    }
    std::vector<Digraph> out;
    const std::uint32_t total = 1U << slots.size();
    out.reserve(total);
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        std::vector<Arc> arcs;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (mask >> i & 1U) arcs.push_back(slots[i]);
        }
        out.emplace_back(n, std::move(arcs));
    }
    return out;
}

/// Each ordered pair becomes an arc independently with probability p.
inline Digraph random_digraph(int n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Arc> arcs;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = 0; v < n; ++v) {
            if (u != v && coin(rng)) arcs.emplace_back(u, v);
        }
    }
    return Digraph(n, std::move(arcs));
}

/// reach[u][v]: v reachable from u (reflexive), by Floyd-Warshall closure.
inline std::vector<std::vector<char>> closure(const Digraph& d) {
    const int n = d.order();
    std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
    for (Vertex v = 0; v < n; ++v) r[v][v] = 1;
    for (const auto& [u, v] : d.arcs()) r[u][v] = 1;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            if (!r[i][k]) continue;
            for (int j = 0; j < n; ++j) {
                if (r[k][j]) r[i][j] = 1;
            }
        }
    }
    return r;
}

/// Partition into mutually reachable classes, each sorted, sorted by minimum.
inline std::vector<std::vector<Vertex>> mutual_reachability_classes(const Digraph& d) {
    auto r = closure(d);
    std::vector<std::vector<Vertex>> classes;
    std::vector<char> done(d.order(), 0);
    for (Vertex u = 0; u < d.order(); ++u) {
        if (done[u]) continue;
        std::vector<Vertex> c;
        for (Vertex v = 0; v < d.order(); ++v) {
            if (r[u][v] && r[v][u]) {
                c.push_back(v);
                done[v] = 1;
            }
        }
        classes.push_back(std::move(c));
    }
    return classes;
}

/// Best leaf count over parent maps. In spanning mode every vertex is in the
/// tree; otherwise vertices may be left out. Returns 0 if no tree exists.
inline int parent_map_optimum(const Digraph& d, bool spanning) {
    const int n = d.order();
    // choice[v]: -2 absent, -1 no parent, otherwise the parent.
    std::vector<std::vector<int>> options(n);
    for (Vertex v = 0; v < n; ++v) {
        if (!spanning) options[v].push_back(-2);
        options[v].push_back(-1);
        for (Vertex u : d.in(v)) options[v].push_back(u);
    }
    std::vector<int> choice(n);
    int best = 0;
    std::function<void(int)> rec = [&](int v) {
        if (v == n) {
            int roots = 0, present = 0;
            Vertex root = -1;
            for (Vertex x = 0; x < n; ++x) {
                if (choice[x] == -2) continue;
                ++present;
                if (choice[x] == -1) {
                    ++roots;
                    root = x;
                } else if (choice[choice[x]] == -2) {
                    return;
                }
            }
            if (present == 0 || roots != 1) return;
            for (Vertex x = 0; x < n; ++x) {
                if (choice[x] == -2) continue;
                Vertex y = x;
                int steps = 0;
                while (y != root && steps <= n) {
                    y = choice[y];
                    ++steps;
                }
                if (y != root) return;
            }
            std::vector<char> has_child(n, 0);
            for (Vertex x = 0; x < n; ++x) {
                if (choice[x] >= 0) has_child[choice[x]] = 1;
            }
            int leaves = 0;
            for (Vertex x = 0; x < n; ++x) {
                if (choice[x] != -2 && !has_child[x]) ++leaves;
            }
            best = std::max(best, leaves);
            return;
        }
        for (int c : options[v]) {
            choice[v] = c;
            rec(v + 1);
        }
    };
    rec(0);
    return best;
}

/// Whether some parent map is a spanning out-tree.
inline bool has_spanning_parent_map(const Digraph& d) { return parent_map_optimum(d, true) > 0; }

/// Pathwidth from the definition: a path decomposition exists with bags of at
/// most w+1 vertices iff (all introduced, empty bag) is reachable from
/// (nothing introduced, empty bag), where a vertex may be forgotten once all
/// its neighbors have been introduced.
inline int brute_force_pathwidth(const dmleaf::UndirectedGraph& g) {
    const int n = g.order();
    if (n == 0) return -1;
    std::vector<std::uint32_t> nbr(n, 0);
    for (const auto& [u, v] : g.edges()) {
        nbr[u] |= 1U << v;
        nbr[v] |= 1U << u;
    }
    const std::uint32_t all = (1U << n) - 1;
    for (int w = 0; w < n; ++w) {
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> todo{{0, 0}};
        seen.insert({0, 0});
        bool found = false;
        while (!todo.empty() && !found) {
            auto [introduced, bag] = todo.back();
            todo.pop_back();
            if (introduced == all && bag == 0) {
                found = true;
                break;
            }
            for (int v = 0; v < n; ++v) {
                std::pair<std::uint32_t, std::uint32_t> next;
                if (!(introduced >> v & 1U)) {
                    if (__builtin_popcount(bag) + 1 > w + 1) continue;
                    next = {introduced | 1U << v, bag | 1U << v};
                } else if (bag >> v & 1U) {
                    if ((nbr[v] & introduced) != nbr[v]) continue;
                    next = {introduced, bag & ~(1U << v)};
                } else {
                    continue;
                }
                if (seen.insert(next).second) todo.push_back(next);
            }
        }
        if (found) return w;
    }
    return n - 1;
}

/// Each unordered pair becomes an edge with probability p.
inline dmleaf::UndirectedGraph random_graph(int n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (coin(rng)) edges.emplace_back(u, v);
        }
    }
    return dmleaf::UndirectedGraph(n, std::move(edges));
}

}  // namespace oracle
