#pragma once

// Core digraph model: simple digraphs on dense ids 0..n-1, strong components,
// reachability, out-tree witnesses and their validation.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dmleaf {

using Vertex = int;
using Arc = std::pair<Vertex, Vertex>;
using VertexSet = std::vector<Vertex>;  // sorted, duplicate free

/// Thrown when a caller breaks an operation's precondition.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Thrown when an internally guaranteed bound does not hold (a bug).
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Immutable simple digraph. Self-loops are rejected, duplicate arcs collapse.
/// Opposite arcs (u,v) and (v,u) may coexist.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(int n, std::vector<Arc> arcs = {});

    int order() const noexcept { return n_; }
    std::size_t arc_count() const noexcept { return arcs_.size(); }

    /// All arcs sorted by (tail, head).
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }
    const std::vector<Vertex>& out(Vertex v) const { return out_[v]; }
    const std::vector<Vertex>& in(Vertex v) const { return in_[v]; }
    bool has_arc(Vertex tail, Vertex head) const;

    /// Same vertex set with every arc reversed.
    Digraph reversed() const;

    friend bool operator==(const Digraph& a, const Digraph& b) {
        return a.n_ == b.n_ && a.arcs_ == b.arcs_;
    }

private:
    int n_ = 0;
    std::vector<Arc> arcs_;
    std::vector<std::vector<Vertex>> out_;
    std::vector<std::vector<Vertex>> in_;
};

class UndirectedGraph {
public:
    UndirectedGraph() = default;
    /// Edges are normalized to (min, max); duplicates collapse, loops throw.
    explicit UndirectedGraph(int n, std::vector<std::pair<Vertex, Vertex>> edges = {});

    int order() const noexcept { return n_; }
    const std::vector<std::pair<Vertex, Vertex>>& edges() const noexcept { return edges_; }
    const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
    bool has_edge(Vertex u, Vertex v) const;

private:
    int n_ = 0;
    std::vector<std::pair<Vertex, Vertex>> edges_;
    std::vector<std::vector<Vertex>> adj_;
};

struct Condensation {
    std::vector<VertexSet> components;
    std::vector<int> component_of;                 // vertex -> component index
    std::vector<std::pair<int, int>> dag_arcs;     // sorted, duplicate free
};

/// Rooted out-tree given by parent links. Tree vertices are the root plus
/// every key of `parent`.
struct OutTree {
    Vertex root = 0;
    std::map<Vertex, Vertex> parent;
    int host_size = 0;

    VertexSet vertices() const;
    VertexSet leaves() const;
    /// Vertices without children. A single vertex tree has one leaf.
    int leaf_count() const;
    std::vector<Arc> arcs() const;
    bool contains(Vertex v) const { return v == root || parent.count(v) != 0; }
};

enum class IssueKind { id_out_of_range, missing_arc, root_has_parent, cycle, unreachable_root };

struct ValidationIssue {
    IssueKind kind;
    Vertex vertex;
    std::string detail;
};

struct ValidationReport {
    bool valid = false;
    bool spanning = false;
    int leaf_count = 0;
    std::vector<ValidationIssue> issues;
};

std::string_view to_string(IssueKind kind);

// -- text format ------------------------------------------------------------

struct ParseResult {
    Digraph digraph;
    std::vector<std::string> warnings;
};

/// Reads the `p dig n m` / `a u v` format (1-indexed ids, `c` comments).
ParseResult parse_digraph_with_warnings(std::istream& in);
Digraph parse_digraph(std::istream& in);
Digraph parse_digraph(std::string_view text);
void write_digraph(std::ostream& out, const Digraph& d);
std::string to_text(const Digraph& d);

// -- structure ---------------------------------------------------------------

Condensation strongly_connected_components(const Digraph& d);
/// Components with no incoming dag arc, ascending index order.
std::vector<int> source_strong_components(const Condensation& c);
bool has_out_branching(const Digraph& d);
VertexSet reachable_set(const Digraph& d, Vertex v);

struct InducedSubdigraph {
    Digraph digraph;
    std::vector<Vertex> to_original;  // new id -> original id
};

InducedSubdigraph induced_subdigraph(const Digraph& d, const VertexSet& vertices);
UndirectedGraph underlying_undirected(const Digraph& d);

/// For every dag arc R -> Q of the condensation, each vertex of Q has an
/// in-neighbor in R. Sufficient for membership in the family where the best
/// out-branching is as good as the best out-tree.
bool in_L_sufficient(const Digraph& d);

int min_in_degree(const Digraph& d);
bool is_oriented(const Digraph& d);
/// Vertices with in-degree zero.
int source_count(const Digraph& d);

// -- witnesses ---------------------------------------------------------------

ValidationReport validate_out_tree(const Digraph& d, const OutTree& t);

/// Grows `t` by arcs from tree vertices to new vertices and by arcs from new
/// vertices into the root until no such arc exists. Neither kind of step
/// lowers the leaf count. Returns the grown tree (spanning iff it reached
/// every vertex).
OutTree extend_out_tree(const Digraph& d, OutTree t);

/// Maps an out-tree of an induced subdigraph back to original ids.
OutTree lift_out_tree(const OutTree& t, const std::vector<Vertex>& to_original, int host_size);

}  // namespace dmleaf
