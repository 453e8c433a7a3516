#pragma once

// Exact solvers for the maximum-leaf out-branching (spanning) and out-tree
// (subtree) problems, and the two parameterized drivers built on decompose().

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "dmleaf/decomposition.hpp"
#include "dmleaf/digraph.hpp"

namespace dmleaf {

enum class Mode { spanning, subtree };

enum class Method { trivial, decompose_witness, dp, branch_and_bound, brute_force };
std::string_view to_string(Method m);

enum class Problem { dmlob, dmlot };
std::string_view to_string(Problem p);

enum class Answer { no, yes, unknown };

struct SolveResult {
    Problem problem = Problem::dmlob;
    int k = 0;
    Answer answer = Answer::no;
    int value = 0;            // min(optimum, k); a lower bound when answer is unknown
    bool at_least_k = false;  // value == k
    std::optional<OutTree> witness;
    Method method = Method::trivial;
};

struct OracleResult {
    int value = 0;
    std::optional<OutTree> witness;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr int brute_force_max_order = 12;

/// Exact l_s(d) (0 without an out-branching) by enumerating internal vertex
/// sets. Throws ContractError above brute_force_max_order vertices.
OracleResult brute_force_out_branching(const Digraph& d);
/// Exact l(d) over all out-trees; 0 only for the empty digraph.
OracleResult brute_force_out_tree(const Digraph& d);

/// l_s(d) == 0 or l_s(d) == l(d), by the brute-force oracles. Throws
/// BudgetExceeded when the order is above `max_order`.
bool in_L_exact(const Digraph& d, int max_order = brute_force_max_order);

struct BranchAndBoundConfig {
    std::uint64_t node_limit = 0;  // 0: unlimited
};

/// Exact decision l_s(d) >= k (spanning) or l(d) >= k (subtree). Grows
/// out-trees from every admissible root; each free leaf is branched as
/// "stays a leaf" or "takes all its outside out-neighbors". Throws
/// BudgetExceeded when a node limit is set and hit.
SolveResult branch_and_bound(const Digraph& d, int k, Mode mode, BranchAndBoundConfig cfg = {});

struct DpConfig {
    Mode mode = Mode::spanning;
    int leaf_cap = 1;
    int width_budget = 64;
    std::uint64_t table_budget = 10'000'000;
};

/// Dynamic program over `pd` (a path decomposition of UN(d)). Returns
/// min(optimum, leaf_cap) with a witness whenever a tree exists. Throws
/// BudgetExceeded when the width or state budget is exceeded.
SolveResult dp_pathwidth(const Digraph& d, const PathDecomposition& pd, const DpConfig& cfg);

struct SolveOptions {
    std::uint64_t dp_table_budget = 10'000'000;
    int dp_width_budget = 64;
    std::uint64_t bb_node_limit = 100'000'000;
    /// Only when set does the node limit apply; the answer may then be unknown.
    bool allow_unknown = false;
};

SolveResult solve_dmlob(const Digraph& d, int k, const SolveOptions& opts = {});
SolveResult solve_dmlot(const Digraph& d, int k, const SolveOptions& opts = {});

}  // namespace dmleaf
