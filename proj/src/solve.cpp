#include <algorithm>

#include "dmleaf/solver.hpp"

namespace dmleaf {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::trivial: return "trivial";
        case Method::decompose_witness: return "decompose-witness";
        case Method::dp: return "dp";
        case Method::branch_and_bound: return "branch-and-bound";
        case Method::brute_force: return "brute-force";
    }
    return "unknown";
}

std::string_view to_string(Problem p) { return p == Problem::dmlob ? "dmlob" : "dmlot"; }

namespace {

SolveResult make(Problem problem, int k, Answer answer, int value, std::optional<OutTree> witness, Method method) {
    SolveResult r;
    r.problem = problem;
    r.k = k;
    r.answer = answer;
    r.value = std::min(value, k);
    r.at_least_k = r.value >= k;
    r.witness = std::move(witness);
    r.method = method;
    return r;
}

/// Exact search with the node limit honored only when unknown is allowed.
SolveResult exact_search(const Digraph& d, int k, Mode mode, const SolveOptions& opts) {
    BranchAndBoundConfig cfg;
    if (opts.allow_unknown) cfg.node_limit = opts.bb_node_limit;
    try {
        return branch_and_bound(d, k, mode, cfg);
    } catch (const BudgetExceeded&) {
        return make(mode == Mode::spanning ? Problem::dmlob : Problem::dmlot, k, Answer::unknown, 0, std::nullopt,
                    Method::branch_and_bound);
    }
}

SolveResult dp_or_search(const Digraph& d, const PathDecomposition& pd, int k, Mode mode, const SolveOptions& opts) {
    DpConfig cfg;
    cfg.mode = mode;
    cfg.leaf_cap = k;
    cfg.width_budget = opts.dp_width_budget;
    cfg.table_budget = opts.dp_table_budget;
    try {
        return dp_pathwidth(d, pd, cfg);
    } catch (const BudgetExceeded&) {
        return exact_search(d, k, mode, opts);
    }
}

}  // namespace

SolveResult solve_dmlob(const Digraph& d, int k, const SolveOptions& opts) {
    if (k < 1) throw ContractError("solve_dmlob: k must be >= 1");
    if (!has_out_branching(d)) return make(Problem::dmlob, k, Answer::no, 0, std::nullopt, Method::trivial);
    if (k == 1) {
        OutTree t = find_out_branching(d);
        return make(Problem::dmlob, k, Answer::yes, 1, std::move(t), Method::trivial);
    }

    auto outcome = decompose(d, k);
    if (outcome.is_witness()) {
        // Growing an out-tree never loses leaves. When the strong components
        // satisfy the in-neighbor condition the grown tree always spans.
        OutTree grown = extend_out_tree(d, outcome.tree());
        const bool spans = static_cast<int>(grown.vertices().size()) == d.order();
        if (in_L_sufficient(d) && !spans) {
            throw InvariantError("solve_dmlob: maximal out-tree does not span a digraph with the in-neighbor condition");
        }
        if (spans) return make(Problem::dmlob, k, Answer::yes, k, std::move(grown), Method::decompose_witness);
        // Outside the family a many-leaf out-tree says nothing about out-branchings.
        auto r = exact_search(d, k, Mode::spanning, opts);
        r.problem = Problem::dmlob;
        return r;
    }
    auto r = dp_or_search(d, outcome.decomposition(), k, Mode::spanning, opts);
    r.problem = Problem::dmlob;
    return r;
}

SolveResult solve_dmlot(const Digraph& d, int k, const SolveOptions& opts) {
    if (k < 1) throw ContractError("solve_dmlot: k must be >= 1");
    const int n = d.order();
    if (n == 0) return make(Problem::dmlot, k, Answer::no, 0, std::nullopt, Method::trivial);
    if (k == 1) {
        OutTree t;
        t.root = 0;
        t.host_size = n;
        return make(Problem::dmlot, k, Answer::yes, 1, std::move(t), Method::trivial);
    }

    // Every out-tree lies inside d[R_v] for its root v, and R_v is contained
    // in R_u whenever v is reachable from u, so a subtree-mode solve on d[R_u]
    // also settles every v in R_u.
    std::vector<char> settled(n, 0);
    SolveResult best = make(Problem::dmlot, k, Answer::no, 0, std::nullopt, Method::dp);
    bool unknown = false;
    for (Vertex v = 0; v < n; ++v) {
        if (settled[v]) continue;
        auto reach = decompose_out_tree(d, v, k);
        for (Vertex u : reach.sub.to_original) settled[u] = 1;
        if (reach.outcome.is_witness()) {
            OutTree t = lift_out_tree(reach.outcome.tree(), reach.sub.to_original, n);
            return make(Problem::dmlot, k, Answer::yes, k, std::move(t), Method::decompose_witness);
        }
        auto r = dp_or_search(reach.sub.digraph, reach.outcome.decomposition(), k, Mode::subtree, opts);
        if (r.answer == Answer::unknown) {
            unknown = true;
            continue;
        }
        if (r.witness) r.witness = lift_out_tree(*r.witness, reach.sub.to_original, n);
        if (r.answer == Answer::yes) {
            r.problem = Problem::dmlot;
            return r;
        }
        if (r.value > best.value || !best.witness) {
            best.value = r.value;
            best.witness = r.witness;
            best.method = r.method;
        }
    }
    if (unknown) best.answer = Answer::unknown;
    return best;
}

}  // namespace dmleaf
