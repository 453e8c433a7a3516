#pragma once

// Win/win decomposition: from a digraph with an out-branching and a leaf
// target k, produce either an out-tree with at least k leaves or a path
// decomposition of the underlying undirected graph of width at most k^3.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dmleaf/digraph.hpp"

namespace dmleaf {

using Path = std::vector<Vertex>;

struct PathCover {
    std::vector<Path> paths;
};

struct PathDecomposition {
    std::vector<VertexSet> bags;  // each bag sorted

    /// Largest bag size minus one; -1 for no bags.
    int width() const;
};

struct DecompositionReport {
    bool valid = false;
    std::vector<std::string> issues;
};

/// Checks coverage of vertices and edges and contiguity of every vertex.
DecompositionReport validate_path_decomposition(const UndirectedGraph& g, const PathDecomposition& pd);

/// Chord (path[i], path[j]) with i <= j - 2.
struct ForwardArc {
    int i = 0;
    int j = 0;
    Vertex tail = 0;
    Vertex head = 0;

    friend bool operator==(const ForwardArc&, const ForwardArc&) = default;
};

class NoOutBranchingError : public std::runtime_error {
public:
    explicit NoOutBranchingError(std::vector<VertexSet> sources);
    const std::vector<VertexSet>& source_components() const noexcept { return sources_; }

private:
    std::vector<VertexSet> sources_;
};

/// Breadth-first spanning out-tree from `root`, or from the smallest vertex
/// of the unique source strong component.
OutTree find_out_branching(const Digraph& d, std::optional<Vertex> root = std::nullopt);

/// Repeatedly cuts the part of the root-to-leaf walk after its last vertex of
/// out-degree >= 2 (smallest leaf id first). Produces leaf_count paths.
PathCover path_cover_from_out_branching(const OutTree& t);

/// Vertices off `path` that are heads of arcs with tails on `path`.
VertexSet off_path_out_neighbors(const Digraph& d, const Path& path);

/// The path plus, for every w in `tail_of`, the arc tail_of[w] -> w.
OutTree witness_from_off_path(const Path& path, const std::map<Vertex, Vertex>& tail_of, int host_size);

/// Drops every arc at a vertex of `around` except the arcs of its cover path.
Digraph trim_around(const Digraph& d, const VertexSet& around, const PathCover& cover);

std::vector<ForwardArc> forward_arcs_on_path(const Digraph& d, const Path& path);
VertexSet forward_arc_heads(const std::vector<ForwardArc>& arcs);
/// Keeps one forward arc per head: shortest span, then smallest tail position.
std::vector<ForwardArc> reduce_forward_arcs(std::vector<ForwardArc> arcs);

/// Out-tree with >= k leaves built from k-1 pairwise disjoint forward-arc
/// intervals (chain) or from k intervals sharing a point (clique), if either
/// exists. Requires k >= 2 and at most one arc per head.
std::optional<OutTree> witness_from_forward_arcs(const Path& path, const std::vector<ForwardArc>& arcs, int k,
                                                 int host_size);

/// Path order of `path` (vertex separation <= k in the path-plus-backward-arcs
/// digraph) or an out-tree with >= k leaves.
using BackwardCheck = std::variant<std::vector<Vertex>, OutTree>;
BackwardCheck backward_component_check(const Digraph& d, const Path& path, int k);

int vertex_separation(const UndirectedGraph& g, const std::vector<Vertex>& order);
PathDecomposition ordering_to_path_decomposition(const UndirectedGraph& g, const std::vector<Vertex>& order);

enum class Stage {
    out_branching,
    path_cover,
    off_path,
    trim_off_path,
    forward_arcs,
    trim_forward_heads,
    backward_arcs,
    assemble,
};

std::string_view to_string(Stage s);

/// Sizes observed while running the pipeline.
struct StageStats {
    int path_count = 0;
    int u1_size = 0;
    int u2_size = 0;
    int max_off_path = 0;        // max |W(P)| over paths
    int max_forward_heads = 0;   // max |S[P]| over paths
    int component_width = -1;    // width before U is added
};

class DecomposeOutcome {
public:
    /// Throws InvariantError unless `t` is a valid out-tree of `d` with >= k leaves.
    static DecomposeOutcome witness(const Digraph& d, OutTree t, int k, std::vector<Stage> trace, StageStats stats);
    /// Throws InvariantError unless `pd` is a valid decomposition of UN(d) of width <= k^3.
    static DecomposeOutcome decomposition(const Digraph& d, PathDecomposition pd, int k, std::vector<Stage> trace,
                                          StageStats stats);

    bool is_witness() const noexcept { return std::holds_alternative<OutTree>(result_); }
    const OutTree& tree() const { return std::get<OutTree>(result_); }
    const PathDecomposition& decomposition() const { return std::get<PathDecomposition>(result_); }
    const std::vector<Stage>& trace() const noexcept { return trace_; }
    const StageStats& stats() const noexcept { return stats_; }
    int k() const noexcept { return k_; }

private:
    DecomposeOutcome(std::variant<OutTree, PathDecomposition> r, int k, std::vector<Stage> trace, StageStats stats)
        : result_(std::move(r)), k_(k), trace_(std::move(trace)), stats_(stats) {}

    std::variant<OutTree, PathDecomposition> result_;
    int k_ = 0;
    std::vector<Stage> trace_;
    StageStats stats_;
};

/// Requires k >= 2 and an out-branching (rooted at `root` when given).
DecomposeOutcome decompose(const Digraph& d, int k, std::optional<Vertex> root = std::nullopt);

struct ReachableOutcome {
    InducedSubdigraph sub;    // d[R_v], v has local id `root`
    Vertex root = 0;
    DecomposeOutcome outcome;
};

/// decompose on the subdigraph induced by the vertices reachable from v.
ReachableOutcome decompose_out_tree(const Digraph& d, Vertex v, int k);

}  // namespace dmleaf
