#include "dmleaf/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace dmleaf {

namespace {

std::string describe_sources(const std::vector<VertexSet>& sources) {
    std::string s = "no out-branching: " + std::to_string(sources.size()) + " source strong components";
    for (const auto& c : sources) {
        s += " {";
        for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
        s += "}";
    }
    return s;
}

std::vector<int> positions_on(int n, const Path& path) {
    std::vector<int> pos(n, -1);
    for (int i = 0; i < static_cast<int>(path.size()); ++i) pos[path[i]] = i;
    return pos;
}

long long cube(long long k) { return k * k * k; }

}  // namespace

NoOutBranchingError::NoOutBranchingError(std::vector<VertexSet> sources)
    : std::runtime_error(describe_sources(sources)), sources_(std::move(sources)) {}

int PathDecomposition::width() const {
    std::size_t best = 0;
    for (const auto& bag : bags) best = std::max(best, bag.size());
    return static_cast<int>(best) - 1;
}

DecompositionReport validate_path_decomposition(const UndirectedGraph& g, const PathDecomposition& pd) {
    DecompositionReport report;
    const int n = g.order();
    std::vector<int> first(n, -1), last(n, -1), count(n, 0);
    for (int b = 0; b < static_cast<int>(pd.bags.size()); ++b) {
        std::set<Vertex> seen;
        for (Vertex v : pd.bags[b]) {
            if (v < 0 || v >= n) {
                report.issues.push_back("bag " + std::to_string(b) + ": vertex " + std::to_string(v) + " out of range");
                continue;
            }
            if (!seen.insert(v).second) continue;
            if (first[v] == -1) first[v] = b;
            last[v] = b;
            ++count[v];
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        if (first[v] == -1) {
            report.issues.push_back("vertex " + std::to_string(v) + " in no bag");
        } else if (count[v] != last[v] - first[v] + 1) {
            report.issues.push_back("vertex " + std::to_string(v) + " occurs in non-contiguous bags");
        }
    }
    for (const auto& [u, v] : g.edges()) {
        bool covered = false;
        if (first[u] != -1 && first[v] != -1) {
            int lo = std::max(first[u], first[v]);
            int hi = std::min(last[u], last[v]);
            // With contiguity the occurrence intervals must overlap; check the
            // bags themselves so a non-contiguous input is judged correctly too.
            for (int b = 0; b < static_cast<int>(pd.bags.size()) && !covered; ++b) {
                if (lo <= hi && (b < lo || b > hi)) continue;
                const auto& bag = pd.bags[b];
                covered = std::find(bag.begin(), bag.end(), u) != bag.end() &&
                          std::find(bag.begin(), bag.end(), v) != bag.end();
            }
        }
        if (!covered) {
            report.issues.push_back("edge {" + std::to_string(u) + "," + std::to_string(v) + "} in no bag");
        }
    }
    report.valid = report.issues.empty();
    return report;
}

// -- out-branching and path cover -------------------------------------------

OutTree find_out_branching(const Digraph& d, std::optional<Vertex> root) {
    const int n = d.order();
    if (n == 0) throw NoOutBranchingError({});
    Vertex start;
    if (root) {
        if (*root < 0 || *root >= n) throw ContractError("find_out_branching: root out of range");
        start = *root;
    } else {
        auto c = strongly_connected_components(d);
        auto sources = source_strong_components(c);
        if (sources.size() != 1) {
            std::vector<VertexSet> comps;
            for (int s : sources) comps.push_back(c.components[s]);
            throw NoOutBranchingError(std::move(comps));
        }
        start = c.components[sources.front()].front();
    }

    OutTree t;
    t.root = start;
    t.host_size = n;
    std::vector<char> seen(n, 0);
    std::deque<Vertex> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (Vertex w : d.out(u)) {
            if (seen[w]) continue;
            seen[w] = 1;
            t.parent[w] = u;
            queue.push_back(w);
        }
    }
    if (static_cast<int>(t.parent.size()) + 1 != n) {
        throw ContractError("find_out_branching: not every vertex is reachable from root " + std::to_string(start));
    }
    return t;
}

PathCover path_cover_from_out_branching(const OutTree& t) {
    const int n = t.host_size;
    Digraph own(n, t.arcs());
    auto report = validate_out_tree(own, t);
    if (!report.valid) {
        throw ContractError("path_cover_from_out_branching: invalid out-tree (" +
                            std::string(to_string(report.issues.front().kind)) + ")");
    }
    if (!report.spanning) throw ContractError("path_cover_from_out_branching: out-tree is not spanning");

    std::vector<std::set<Vertex>> children(n);
    std::vector<Vertex> parent(n, -1);
    for (const auto& [child, p] : t.parent) {
        children[p].insert(child);
        parent[child] = p;
    }
    int branching = 0;
    for (Vertex v = 0; v < n; ++v) branching += children[v].size() >= 2 ? 1 : 0;

    PathCover cover;
    for (Vertex leaf : t.leaves()) {
        if (branching == 0) break;
        Path segment{leaf};
        Vertex v = leaf;
        while (children[parent[v]].size() < 2) {
            v = parent[v];
            segment.push_back(v);
        }
        Vertex cut_at = parent[v];
        children[cut_at].erase(v);
        if (children[cut_at].size() == 1) --branching;
        std::reverse(segment.begin(), segment.end());
        cover.paths.push_back(std::move(segment));
    }
    Path rest{t.root};
    while (!children[rest.back()].empty()) rest.push_back(*children[rest.back()].begin());
    cover.paths.push_back(std::move(rest));
    return cover;
}

// -- stages ---------------------------------------------------------------------

VertexSet off_path_out_neighbors(const Digraph& d, const Path& path) {
    std::vector<char> on(d.order(), 0);
    for (Vertex v : path) on[v] = 1;
    std::set<Vertex> w;
    for (Vertex u : path) {
        for (Vertex x : d.out(u)) {
            if (!on[x]) w.insert(x);
        }
    }
    return {w.begin(), w.end()};
}

OutTree witness_from_off_path(const Path& path, const std::map<Vertex, Vertex>& tail_of, int host_size) {
    if (path.empty()) throw ContractError("witness_from_off_path: empty path");
    OutTree t;
    t.root = path.front();
    t.host_size = host_size;
    for (std::size_t i = 1; i < path.size(); ++i) t.parent[path[i]] = path[i - 1];
    for (const auto& [w, tail] : tail_of) t.parent[w] = tail;
    return t;
}

Digraph trim_around(const Digraph& d, const VertexSet& around, const PathCover& cover) {
    const int n = d.order();
    std::vector<char> trimmed(n, 0);
    for (Vertex v : around) trimmed[v] = 1;

    std::set<Arc> path_arcs;
    std::vector<char> covered(n, 0);
    for (const auto& p : cover.paths) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            covered[p[i]] = 1;
            if (i + 1 < p.size()) path_arcs.insert({p[i], p[i + 1]});
        }
    }
    for (Vertex v : around) {
        if (!covered[v]) throw ContractError("trim_around: vertex " + std::to_string(v) + " lies on no cover path");
    }

    std::vector<Arc> kept;
    kept.reserve(d.arc_count());
    for (const auto& a : d.arcs()) {
        if ((trimmed[a.first] || trimmed[a.second]) && !path_arcs.count(a)) continue;
        kept.push_back(a);
    }
    return Digraph(n, std::move(kept));
}

std::vector<ForwardArc> forward_arcs_on_path(const Digraph& d, const Path& path) {
    auto pos = positions_on(d.order(), path);
    std::vector<ForwardArc> out;
    for (int i = 0; i < static_cast<int>(path.size()); ++i) {
        for (Vertex head : d.out(path[i])) {
            int j = pos[head];
            if (j != -1 && i <= j - 2) out.push_back({i, j, path[i], head});
        }
    }
    std::sort(out.begin(), out.end(), [](const ForwardArc& a, const ForwardArc& b) {
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    return out;
}

VertexSet forward_arc_heads(const std::vector<ForwardArc>& arcs) {
    std::set<Vertex> heads;
    for (const auto& a : arcs) heads.insert(a.head);
    return {heads.begin(), heads.end()};
}

std::vector<ForwardArc> reduce_forward_arcs(std::vector<ForwardArc> arcs) {
    std::map<Vertex, ForwardArc> best;
    for (const auto& a : arcs) {
        auto [it, inserted] = best.emplace(a.head, a);
        if (inserted) continue;
        const auto& cur = it->second;
        if (a.j - a.i < cur.j - cur.i || (a.j - a.i == cur.j - cur.i && a.i < cur.i)) it->second = a;
    }
    std::vector<ForwardArc> out;
    out.reserve(best.size());
    for (const auto& [head, a] : best) out.push_back(a);
    std::sort(out.begin(), out.end(), [](const ForwardArc& a, const ForwardArc& b) {
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    return out;
}

std::optional<OutTree> witness_from_forward_arcs(const Path& path, const std::vector<ForwardArc>& arcs, int k,
                                                 int host_size) {
    if (k < 2) throw ContractError("witness_from_forward_arcs: k must be >= 2");
    {
        std::set<Vertex> heads;
        for (const auto& a : arcs) {
            if (!heads.insert(a.head).second) {
                throw ContractError("witness_from_forward_arcs: more than one forward arc into " +
                                    std::to_string(a.head));
            }
        }
    }
    if (arcs.empty()) return std::nullopt;

    // Interval of arc (i, j) is [i, j-1]. Earliest right endpoint first gives a
    // maximum set of pairwise disjoint intervals.
    std::vector<ForwardArc> by_right = arcs;
    std::sort(by_right.begin(), by_right.end(), [](const ForwardArc& a, const ForwardArc& b) {
        return std::tie(a.j, a.i) < std::tie(b.j, b.i);
    });
    std::vector<ForwardArc> chain;
    int free_from = -1;  // next interval must start at or after this position
    for (const auto& a : by_right) {
        if (a.i >= free_from) {
            chain.push_back(a);
            free_from = a.j;
            if (static_cast<int>(chain.size()) == k - 1) break;
        }
    }

    OutTree t;
    t.host_size = host_size;
    if (static_cast<int>(chain.size()) == k - 1) {
        // Root u_{i_1}; each forward arc, the path stretch j_s..i_{s+1}, and the
        // path arc leaving each u_{i_s}. Leaves: every u_{i_s + 1} and u_{j_last}.
        t.root = path[chain.front().i];
        for (std::size_t s = 0; s < chain.size(); ++s) {
            const auto& a = chain[s];
            t.parent[path[a.j]] = path[a.i];
            t.parent[path[a.i + 1]] = path[a.i];
            if (s + 1 < chain.size()) {
                for (int x = a.j; x < chain[s + 1].i; ++x) t.parent[path[x + 1]] = path[x];
            }
        }
        return t;
    }

    // Maximum point coverage. Coverage can only increase at a left endpoint.
    int best_point = -1;
    int best_cover = 0;
    for (const auto& a : arcs) {
        int point = a.i;
        int cover = 0;
        for (const auto& b : arcs) cover += (b.i <= point && point <= b.j - 1) ? 1 : 0;
        if (cover > best_cover || (cover == best_cover && point < best_point)) {
            best_cover = cover;
            best_point = point;
        }
    }
    if (best_cover < k) return std::nullopt;

    std::vector<ForwardArc> clique;
    for (const auto& a : arcs) {
        if (a.i <= best_point && best_point <= a.j - 1) clique.push_back(a);
        if (static_cast<int>(clique.size()) == k) break;
    }
    int h = path.size();
    for (const auto& a : clique) h = std::min(h, a.j - 1);
    t.root = path.front();
    for (int x = 1; x <= h; ++x) t.parent[path[x]] = path[x - 1];
    for (const auto& a : clique) t.parent[a.head] = a.tail;
    return t;
}

BackwardCheck backward_component_check(const Digraph& d, const Path& path, int k) {
    const int q = static_cast<int>(path.size());
    auto pos = positions_on(d.order(), path);

    // furthest[i]: largest position of an in-neighbor of path[i] on the path.
    std::vector<int> furthest(q, -1);
    std::vector<Vertex> furthest_tail(q, -1);
    for (int i = 0; i < q; ++i) {
        for (Vertex u : d.in(path[i])) {
            int j = pos[u];
            if (j == -1) continue;
            if (j < i && j != i - 1) {
                throw ContractError("backward_component_check: forward chord " + std::to_string(u) + "->" +
                                    std::to_string(path[i]));
            }
            if (j > furthest[i]) {
                furthest[i] = j;
                furthest_tail[i] = u;
            }
        }
    }

    // counted[j]: vertices among the first j with an in-neighbor at position >= j.
    std::vector<int> delta(q + 2, 0);
    for (int i = 0; i < q; ++i) {
        if (furthest[i] > i) {
            delta[i + 1] += 1;
            delta[furthest[i] + 1] -= 1;
        }
    }
    int running = 0;
    for (int j = 1; j < q; ++j) {
        running += delta[j];
        if (running < k) continue;
        OutTree t;
        t.root = path[j];
        t.host_size = d.order();
        for (int x = j + 1; x < q; ++x) t.parent[path[x]] = path[x - 1];
        for (int i = 0; i < j; ++i) {
            if (furthest[i] >= j) t.parent[path[i]] = furthest_tail[i];
        }
        return t;
    }
    return std::vector<Vertex>(path.begin(), path.end());
}

int vertex_separation(const UndirectedGraph& g, const std::vector<Vertex>& order) {
    const int n = g.order();
    std::vector<int> pos(n, -1);
    if (static_cast<int>(order.size()) != n) throw ContractError("vertex_separation: ordering is not a permutation");
    for (int i = 0; i < n; ++i) {
        Vertex v = order[i];
        if (v < 0 || v >= n || pos[v] != -1) throw ContractError("vertex_separation: ordering is not a permutation");
        pos[v] = i;
    }
    // Vertex at position i is in the boundary of V_j for i < j <= last neighbor position.
    std::vector<int> delta(n + 2, 0);
    for (int i = 0; i < n; ++i) {
        int reach = i;
        for (Vertex w : g.neighbors(order[i])) reach = std::max(reach, pos[w]);
        if (reach > i) {
            delta[i + 1] += 1;
            delta[reach + 1] -= 1;
        }
    }
    int best = 0;
    int running = 0;
    for (int j = 1; j <= n; ++j) {
        running += delta[j];
        best = std::max(best, running);
    }
    return best;
}

PathDecomposition ordering_to_path_decomposition(const UndirectedGraph& g, const std::vector<Vertex>& order) {
    const int n = g.order();
    vertex_separation(g, order);  // permutation check
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    std::vector<int> reach(n);
    for (int i = 0; i < n; ++i) {
        reach[i] = i;
        for (Vertex w : g.neighbors(order[i])) reach[i] = std::max(reach[i], pos[w]);
    }
    // Bag j: order[j] plus earlier vertices with a neighbor at position >= j.
    PathDecomposition pd;
    pd.bags.reserve(n);
    std::set<int> open;  // positions still carried forward
    for (int j = 0; j < n; ++j) {
        for (auto it = open.begin(); it != open.end();) {
            if (reach[*it] < j) it = open.erase(it);
            else ++it;
        }
        VertexSet bag;
        for (int i : open) bag.push_back(order[i]);
        bag.push_back(order[j]);
        std::sort(bag.begin(), bag.end());
        pd.bags.push_back(std::move(bag));
        open.insert(j);
    }
    return pd;
}

// -- pipeline -------------------------------------------------------------------

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::out_branching: return "out-branching";
        case Stage::path_cover: return "path-cover";
        case Stage::off_path: return "off-path";
        case Stage::trim_off_path: return "trim-off-path";
        case Stage::forward_arcs: return "forward-arcs";
        case Stage::trim_forward_heads: return "trim-forward-heads";
        case Stage::backward_arcs: return "backward-arcs";
        case Stage::assemble: return "assemble";
    }
    return "unknown";
}

DecomposeOutcome DecomposeOutcome::witness(const Digraph& d, OutTree t, int k, std::vector<Stage> trace,
                                           StageStats stats) {
    t.host_size = d.order();
    auto report = validate_out_tree(d, t);
    if (!report.valid) {
        throw InvariantError("witness at stage " + std::string(to_string(trace.back())) + " is not an out-tree of the digraph (" +
                             report.issues.front().detail + ")");
    }
    if (report.leaf_count < k) {
        throw InvariantError("witness at stage " + std::string(to_string(trace.back())) + " has " +
                             std::to_string(report.leaf_count) + " < k leaves");
    }
    return DecomposeOutcome(std::move(t), k, std::move(trace), stats);
}

DecomposeOutcome DecomposeOutcome::decomposition(const Digraph& d, PathDecomposition pd, int k,
                                                 std::vector<Stage> trace, StageStats stats) {
    auto report = validate_path_decomposition(underlying_undirected(d), pd);
    if (!report.valid) throw InvariantError("decomposition invalid: " + report.issues.front());
    if (pd.width() > cube(k)) {
        throw InvariantError("decomposition width " + std::to_string(pd.width()) + " exceeds k^3");
    }
    return DecomposeOutcome(std::move(pd), k, std::move(trace), stats);
}

DecomposeOutcome decompose(const Digraph& d, int k, std::optional<Vertex> root) {
    if (k < 2) throw ContractError("decompose: k must be >= 2");
    const int n = d.order();
    std::vector<Stage> trace;
    StageStats stats;

    auto done_witness = [&](OutTree t, Stage stage) {
        trace.push_back(stage);
        return DecomposeOutcome::witness(d, std::move(t), k, trace, stats);
    };

    trace.push_back(Stage::out_branching);
    OutTree branching = find_out_branching(d, root);
    if (branching.leaf_count() >= k) {
        trace.pop_back();
        return done_witness(std::move(branching), Stage::out_branching);
    }

    trace.push_back(Stage::path_cover);
    const PathCover cover = path_cover_from_out_branching(branching);
    stats.path_count = static_cast<int>(cover.paths.size());

    trace.push_back(Stage::off_path);
    std::set<Vertex> u1;
    for (const auto& path : cover.paths) {
        VertexSet w = off_path_out_neighbors(d, path);
        stats.max_off_path = std::max(stats.max_off_path, static_cast<int>(w.size()));
        if (static_cast<int>(w.size()) >= k) {
            std::vector<char> on(n, 0);
            for (Vertex v : path) on[v] = 1;
            std::map<Vertex, Vertex> tail_of;
            for (Vertex v : path) {
                for (Vertex x : d.out(v)) {
                    if (!on[x]) tail_of.emplace(x, v);
                }
            }
            trace.pop_back();
            return done_witness(witness_from_off_path(path, tail_of, n), Stage::off_path);
        }
        u1.insert(w.begin(), w.end());
    }
    stats.u1_size = static_cast<int>(u1.size());
    if (stats.u1_size > (k - 1) * (k - 1)) {
        throw InvariantError("|U1| = " + std::to_string(stats.u1_size) + " exceeds (k-1)^2");
    }

    trace.push_back(Stage::trim_off_path);
    const VertexSet u1_set(u1.begin(), u1.end());
    const Digraph d1 = trim_around(d, u1_set, cover);
    {
        std::vector<int> path_of(n, -1);
        for (int p = 0; p < static_cast<int>(cover.paths.size()); ++p) {
            for (Vertex v : cover.paths[p]) path_of[v] = p;
        }
        for (const auto& [a, b] : d1.arcs()) {
            if (path_of[a] != path_of[b]) {
                throw InvariantError("arc " + std::to_string(a) + "->" + std::to_string(b) +
                                     " joins two cover paths after trimming");
            }
        }
    }

    trace.push_back(Stage::forward_arcs);
    std::set<Vertex> u2;
    for (const auto& path : cover.paths) {
        auto reduced = reduce_forward_arcs(forward_arcs_on_path(d1, path));
        stats.max_forward_heads = std::max(stats.max_forward_heads, static_cast<int>(reduced.size()));
        if (auto t = witness_from_forward_arcs(path, reduced, k, n)) {
            trace.pop_back();
            return done_witness(std::move(*t), Stage::forward_arcs);
        }
        if (static_cast<int>(reduced.size()) > (k - 2) * (k - 1)) {
            throw InvariantError("|S[P]| = " + std::to_string(reduced.size()) +
                                 " exceeds (k-2)(k-1) without a forward-arc witness");
        }
        for (const auto& a : reduced) u2.insert(a.head);
    }
    stats.u2_size = static_cast<int>(u2.size());
    if (stats.u2_size > (k - 2) * (k - 1) * (k - 1)) {
        throw InvariantError("|U2| = " + std::to_string(stats.u2_size) + " exceeds (k-2)(k-1)^2");
    }

    trace.push_back(Stage::trim_forward_heads);
    const Digraph d2 = trim_around(d1, VertexSet(u2.begin(), u2.end()), cover);

    trace.push_back(Stage::backward_arcs);
    // Components of UN(d2) are exactly the cover paths. Concatenating the path
    // orders, smallest vertex id first, and building one decomposition over
    // UN(d2) equals concatenating the per-component decompositions.
    std::vector<const Path*> ordered;
    for (const auto& path : cover.paths) ordered.push_back(&path);
    std::sort(ordered.begin(), ordered.end(), [](const Path* a, const Path* b) {
        return *std::min_element(a->begin(), a->end()) < *std::min_element(b->begin(), b->end());
    });
    std::vector<Vertex> order;
    order.reserve(n);
    for (const Path* path : ordered) {
        BackwardCheck check;
        try {
            check = backward_component_check(d2, *path, k);
        } catch (const ContractError& e) {
            throw InvariantError(std::string("after trimming: ") + e.what());
        }
        if (auto* t = std::get_if<OutTree>(&check)) {
            trace.pop_back();
            return done_witness(std::move(*t), Stage::backward_arcs);
        }
        const auto& sigma = std::get<std::vector<Vertex>>(check);
        order.insert(order.end(), sigma.begin(), sigma.end());
    }

    trace.push_back(Stage::assemble);
    const auto g2 = underlying_undirected(d2);
    PathDecomposition pd = ordering_to_path_decomposition(g2, order);
    stats.component_width = pd.width();
    if (stats.component_width > k) {
        throw InvariantError("component width " + std::to_string(stats.component_width) + " exceeds k");
    }
    std::set<Vertex> all_u(u1.begin(), u1.end());
    all_u.insert(u2.begin(), u2.end());
    for (auto& bag : pd.bags) {
        std::set<Vertex> merged(bag.begin(), bag.end());
        merged.insert(all_u.begin(), all_u.end());
        bag.assign(merged.begin(), merged.end());
    }
    return DecomposeOutcome::decomposition(d, std::move(pd), k, std::move(trace), stats);
}

ReachableOutcome decompose_out_tree(const Digraph& d, Vertex v, int k) {
    auto sub = induced_subdigraph(d, reachable_set(d, v));
    Vertex local = static_cast<Vertex>(std::find(sub.to_original.begin(), sub.to_original.end(), v) -
                                       sub.to_original.begin());
    auto outcome = decompose(sub.digraph, k, local);
    return ReachableOutcome{std::move(sub), local, std::move(outcome)};
}

}  // namespace dmleaf
