#include "dmleaf/digraph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace dmleaf {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

void require_vertex(int n, Vertex v, const char* who) {
    if (v < 0 || v >= n) {
        throw ContractError(std::string(who) + ": vertex " + std::to_string(v) +
                            " out of range 0.." + std::to_string(n - 1));
    }
}

}  // namespace

Digraph::Digraph(int n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs)) {
    if (n < 0) throw ContractError("Digraph: negative order");
    for (const auto& [u, v] : arcs_) {
        require_vertex(n, u, "Digraph");
        require_vertex(n, v, "Digraph");
        if (u == v) throw ContractError("Digraph: self-loop at " + std::to_string(u));
    }
    std::sort(arcs_.begin(), arcs_.end());
    arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
    out_.assign(n, {});
    in_.assign(n, {});
    for (const auto& [u, v] : arcs_) {
        out_[u].push_back(v);
        in_[v].push_back(u);
    }
    // arcs_ sorted by (tail, head) gives sorted out lists; in lists need a sort.
    for (auto& list : in_) std::sort(list.begin(), list.end());
}

bool Digraph::has_arc(Vertex tail, Vertex head) const {
    if (tail < 0 || tail >= n_ || head < 0 || head >= n_) return false;
    return std::binary_search(out_[tail].begin(), out_[tail].end(), head);
}

Digraph Digraph::reversed() const {
    std::vector<Arc> rev;
    rev.reserve(arcs_.size());
    for (const auto& [u, v] : arcs_) rev.emplace_back(v, u);
    return Digraph(n_, std::move(rev));
}

UndirectedGraph::UndirectedGraph(int n, std::vector<std::pair<Vertex, Vertex>> edges)
    : n_(n), edges_(std::move(edges)) {
    if (n < 0) throw ContractError("UndirectedGraph: negative order");
    for (auto& e : edges_) {
        require_vertex(n, e.first, "UndirectedGraph");
        require_vertex(n, e.second, "UndirectedGraph");
        if (e.first == e.second) throw ContractError("UndirectedGraph: loop at " + std::to_string(e.first));
        if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    adj_.assign(n, {});
    for (const auto& [u, v] : edges_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());
}

bool UndirectedGraph::has_edge(Vertex u, Vertex v) const {
    if (u < 0 || u >= n_ || v < 0 || v >= n_) return false;
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

// -- OutTree -----------------------------------------------------------------

VertexSet OutTree::vertices() const {
    VertexSet vs;
    vs.reserve(parent.size() + 1);
    vs.push_back(root);
    for (const auto& [child, p] : parent) vs.push_back(child);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

VertexSet OutTree::leaves() const {
    std::set<Vertex> has_child;
    for (const auto& [child, p] : parent) has_child.insert(p);
    VertexSet out;
    for (Vertex v : vertices()) {
        if (!has_child.count(v)) out.push_back(v);
    }
    return out;
}

int OutTree::leaf_count() const { return static_cast<int>(leaves().size()); }

std::vector<Arc> OutTree::arcs() const {
    std::vector<Arc> out;
    out.reserve(parent.size());
    for (const auto& [child, p] : parent) out.emplace_back(p, child);
    std::sort(out.begin(), out.end());
    return out;
}

std::string_view to_string(IssueKind kind) {
    switch (kind) {
        case IssueKind::id_out_of_range: return "id-out-of-range";
        case IssueKind::missing_arc: return "missing-arc";
        case IssueKind::root_has_parent: return "root-has-parent";
        case IssueKind::cycle: return "cycle";
        case IssueKind::unreachable_root: return "unreachable-root";
    }
    return "unknown";
}

// -- text format -------------------------------------------------------------

ParseResult parse_digraph_with_warnings(std::istream& in) {
    ParseResult result;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    int n = 0;
    long long declared = 0;
    long long seen = 0;
    std::vector<Arc> arcs;
    std::set<Arc> distinct;

    auto read_int = [&](std::istringstream& ss, const char* what) -> long long {
        long long value = 0;
        if (!(ss >> value)) throw ParseError(lineno, std::string("expected integer ") + what);
        return value;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;  // blank line
        if (tag == "c") continue;
        if (tag == "p") {
            if (have_header) throw ParseError(lineno, "duplicate problem line");
            std::string kind;
            if (!(ss >> kind) || kind != "dig") throw ParseError(lineno, "malformed header, expected 'p dig <n> <m>'");
            long long nn = read_int(ss, "<n>");
            declared = read_int(ss, "<m>");
            if (nn < 0 || declared < 0 || nn > 100000000) throw ParseError(lineno, "malformed header, bad counts");
            std::string extra;
            if (ss >> extra) throw ParseError(lineno, "malformed header, trailing token '" + extra + "'");
            n = static_cast<int>(nn);
            have_header = true;
            continue;
        }
        if (tag == "a") {
            if (!have_header) throw ParseError(lineno, "arc line before header");
            long long u = read_int(ss, "<u>");
            long long v = read_int(ss, "<v>");
            std::string extra;
            if (ss >> extra) throw ParseError(lineno, "trailing token '" + extra + "'");
            if (u < 1 || u > n || v < 1 || v > n) throw ParseError(lineno, "vertex id out of range 1.." + std::to_string(n));
            if (u == v) throw ParseError(lineno, "self-loop at vertex " + std::to_string(u));
            ++seen;
            Arc arc{static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1)};
            if (!distinct.insert(arc).second) {
                result.warnings.push_back("line " + std::to_string(lineno) + ": duplicate arc " +
                                          std::to_string(u) + " " + std::to_string(v) + " ignored");
                continue;
            }
            arcs.push_back(arc);
            continue;
        }
        throw ParseError(lineno, "unknown line type '" + tag + "'");
    }
    if (!have_header) throw ParseError(lineno, "missing header 'p dig <n> <m>'");
    if (seen != declared) {
        throw ParseError(lineno, "header declares " + std::to_string(declared) + " arcs, found " + std::to_string(seen));
    }
    result.digraph = Digraph(n, std::move(arcs));
    return result;
}

Digraph parse_digraph(std::istream& in) { return parse_digraph_with_warnings(in).digraph; }

Digraph parse_digraph(std::string_view text) {
    std::istringstream ss{std::string(text)};
    return parse_digraph(ss);
}

void write_digraph(std::ostream& out, const Digraph& d) {
    out << "p dig " << d.order() << ' ' << d.arc_count() << '\n';
    for (const auto& [u, v] : d.arcs()) out << "a " << u + 1 << ' ' << v + 1 << '\n';
}

std::string to_text(const Digraph& d) {
    std::ostringstream ss;
    write_digraph(ss, d);
    return ss.str();
}

// -- structure ---------------------------------------------------------------

Condensation strongly_connected_components(const Digraph& d) {
    // Iterative Tarjan. Components come out in reverse topological order and
    // are flipped at the end so that dag arcs point to larger indices.
    const int n = d.order();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<Vertex> stack;
    std::vector<std::pair<Vertex, std::size_t>> call;
    std::vector<VertexSet> comps;
    int counter = 0;

    for (Vertex s = 0; s < n; ++s) {
        if (index[s] != -1) continue;
        call.emplace_back(s, 0);
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = 1;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            const auto& succ = d.out(v);
            if (pos < succ.size()) {
                Vertex w = succ[pos++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                VertexSet c;
                Vertex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    c.push_back(w);
                } while (w != v);
                std::sort(c.begin(), c.end());
                comps.push_back(std::move(c));
            }
            Vertex done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }

    std::reverse(comps.begin(), comps.end());
    Condensation result;
    result.component_of.assign(n, -1);
    for (int i = 0; i < static_cast<int>(comps.size()); ++i) {
        for (Vertex v : comps[i]) result.component_of[v] = i;
    }
    for (const auto& [u, v] : d.arcs()) {
        int cu = result.component_of[u];
        int cv = result.component_of[v];
        if (cu != cv) result.dag_arcs.emplace_back(cu, cv);
    }
    std::sort(result.dag_arcs.begin(), result.dag_arcs.end());
    result.dag_arcs.erase(std::unique(result.dag_arcs.begin(), result.dag_arcs.end()), result.dag_arcs.end());
    result.components = std::move(comps);
    return result;
}

std::vector<int> source_strong_components(const Condensation& c) {
    std::vector<char> has_in(c.components.size(), 0);
    for (const auto& [from, to] : c.dag_arcs) has_in[to] = 1;
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(c.components.size()); ++i) {
        if (!has_in[i]) out.push_back(i);
    }
    return out;
}

bool has_out_branching(const Digraph& d) {
    if (d.order() == 0) return false;
    return source_strong_components(strongly_connected_components(d)).size() == 1;
}

VertexSet reachable_set(const Digraph& d, Vertex v) {
    require_vertex(d.order(), v, "reachable_set");
    std::vector<char> seen(d.order(), 0);
    std::vector<Vertex> todo{v};
    seen[v] = 1;
    while (!todo.empty()) {
        Vertex u = todo.back();
        todo.pop_back();
        for (Vertex w : d.out(u)) {
            if (!seen[w]) {
                seen[w] = 1;
                todo.push_back(w);
            }
        }
    }
    VertexSet out;
    for (Vertex u = 0; u < d.order(); ++u) {
        if (seen[u]) out.push_back(u);
    }
    return out;
}

InducedSubdigraph induced_subdigraph(const Digraph& d, const VertexSet& vertices) {
    std::vector<int> local(d.order(), -1);
    InducedSubdigraph result;
    for (Vertex v : vertices) {
        require_vertex(d.order(), v, "induced_subdigraph");
        if (local[v] != -1) continue;
        local[v] = static_cast<int>(result.to_original.size());
        result.to_original.push_back(v);
    }
    std::vector<Arc> arcs;
    for (const auto& [u, v] : d.arcs()) {
        if (local[u] != -1 && local[v] != -1) arcs.emplace_back(local[u], local[v]);
    }
    result.digraph = Digraph(static_cast<int>(result.to_original.size()), std::move(arcs));
    return result;
}

UndirectedGraph underlying_undirected(const Digraph& d) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(d.arc_count());
    for (const auto& [u, v] : d.arcs()) edges.emplace_back(u, v);
    return UndirectedGraph(d.order(), std::move(edges));
}

bool in_L_sufficient(const Digraph& d) {
    const auto c = strongly_connected_components(d);
    for (const auto& [from, to] : c.dag_arcs) {
        for (Vertex q : c.components[to]) {
            const auto& preds = d.in(q);
            bool ok = std::any_of(preds.begin(), preds.end(),
                                  [&](Vertex u) { return c.component_of[u] == from; });
            if (!ok) return false;
        }
    }
    return true;
}

int min_in_degree(const Digraph& d) {
    if (d.order() == 0) return 0;
    std::size_t best = d.in(0).size();
    for (Vertex v = 1; v < d.order(); ++v) best = std::min(best, d.in(v).size());
    return static_cast<int>(best);
}

bool is_oriented(const Digraph& d) {
    return std::none_of(d.arcs().begin(), d.arcs().end(),
                        [&](const Arc& a) { return d.has_arc(a.second, a.first); });
}

int source_count(const Digraph& d) {
    int count = 0;
    for (Vertex v = 0; v < d.order(); ++v) count += d.in(v).empty() ? 1 : 0;
    return count;
}

// -- witnesses ---------------------------------------------------------------

ValidationReport validate_out_tree(const Digraph& d, const OutTree& t) {
    ValidationReport report;
    const int n = d.order();
    auto in_range = [n](Vertex v) { return v >= 0 && v < n; };

    if (!in_range(t.root)) {
        report.issues.push_back({IssueKind::id_out_of_range, t.root, "root out of range"});
    }
    for (const auto& [child, p] : t.parent) {
        if (!in_range(child) || !in_range(p)) {
            report.issues.push_back({IssueKind::id_out_of_range, in_range(child) ? p : child,
                                     "parent link " + std::to_string(p) + "->" + std::to_string(child)});
            continue;
        }
        if (child == t.root) {
            report.issues.push_back({IssueKind::root_has_parent, child, "root has parent " + std::to_string(p)});
        }
        if (!d.has_arc(p, child)) {
            report.issues.push_back({IssueKind::missing_arc, child,
                                     "arc " + std::to_string(p) + "->" + std::to_string(child) + " not in digraph"});
        }
    }

    // Every chain of parent links must end at the root without repeating.
    const std::size_t limit = t.parent.size() + 1;
    for (const auto& [start, first_parent] : t.parent) {
        if (start == t.root) continue;
        Vertex v = start;
        std::size_t steps = 0;
        while (v != t.root) {
            auto it = t.parent.find(v);
            if (it == t.parent.end()) {
                report.issues.push_back({IssueKind::unreachable_root, start,
                                         "parent chain stops at " + std::to_string(v) + " before the root"});
                break;
            }
            v = it->second;
            if (++steps > limit) {
                report.issues.push_back({IssueKind::cycle, start, "parent chain does not terminate"});
                break;
            }
        }
    }

    report.leaf_count = t.leaf_count();
    const auto vs = t.vertices();
    report.spanning = static_cast<int>(vs.size()) == n &&
                      std::all_of(vs.begin(), vs.end(), in_range);
    report.valid = report.issues.empty();
    return report;
}

OutTree extend_out_tree(const Digraph& d, OutTree t) {
    const int n = d.order();
    std::vector<char> in_tree(n, 0), has_child(n, 0);
    for (Vertex v : t.vertices()) in_tree[v] = 1;
    for (const auto& [child, p] : t.parent) has_child[p] = 1;

    bool grown = true;
    while (grown) {
        grown = false;
        for (Vertex v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            // Prefer a parent that already has a child: the new vertex is then
            // a fresh leaf and no leaf is lost.
            Vertex chosen = -1;
            for (Vertex u : d.in(v)) {
                if (!in_tree[u]) continue;
                if (has_child[u]) {
                    chosen = u;
                    break;
                }
                if (chosen == -1) chosen = u;
            }
            if (chosen == -1) continue;
            t.parent[v] = chosen;
            in_tree[v] = 1;
            has_child[chosen] = 1;
            grown = true;
        }
        if (grown) continue;
        for (Vertex u : d.in(t.root)) {
            if (in_tree[u]) continue;
            t.parent[t.root] = u;
            t.root = u;
            in_tree[u] = 1;
            has_child[u] = 1;
            grown = true;
            break;
        }
    }
    t.host_size = n;
    return t;
}

OutTree lift_out_tree(const OutTree& t, const std::vector<Vertex>& to_original, int host_size) {
    OutTree lifted;
    lifted.root = to_original.at(t.root);
    lifted.host_size = host_size;
    for (const auto& [child, p] : t.parent) lifted.parent[to_original.at(child)] = to_original.at(p);
    return lifted;
}

}  // namespace dmleaf
