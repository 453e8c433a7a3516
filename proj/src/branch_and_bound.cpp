#include <algorithm>

#include "dmleaf/solver.hpp"

namespace dmleaf {

namespace {

enum class Role : char { outside, free_leaf, fixed_leaf, internal };

// If a free leaf v ends up internal, some optimal completion makes every
// out-neighbor of v outside the current tree a child of v: none of them is an
// ancestor of v, so re-hanging them under v never loses a leaf.
class Search {
public:
    Search(const Digraph& d, int k, Mode mode, std::uint64_t node_limit)
        : d_(d), n_(d.order()), cap_(k), mode_(mode), node_limit_(node_limit),
          role_(n_, Role::outside), parent_(n_, -1), mark_(n_, 0) {}

    void run_from(Vertex root) {
        role_[root] = Role::free_leaf;
        in_tree_ = 1;
        free_.push_back(root);
        current_root_ = root;
        recurse();
        free_.pop_back();
        role_[root] = Role::outside;
        in_tree_ = 0;
    }

    int best() const { return best_; }
    const std::optional<OutTree>& best_tree() const { return best_tree_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    void recurse() {
        if (best_ >= cap_) return;
        if (node_limit_ && ++nodes_ > node_limit_) throw BudgetExceeded("branch-and-bound node limit reached");
        if (!node_limit_) ++nodes_;

        const int reach = outside_reachable();
        if (mode_ == Mode::spanning && in_tree_ + reach < n_) return;
        const int fixed = fixed_count_;
        if (fixed + static_cast<int>(free_.size()) + reach <= best_) return;

        // Free leaf with the most outside out-neighbors.
        int pick = -1;
        int pick_gain = 0;
        for (int idx = 0; idx < static_cast<int>(free_.size()); ++idx) {
            int gain = 0;
            for (Vertex w : d_.out(free_[idx])) gain += role_[w] == Role::outside ? 1 : 0;
            if (gain > pick_gain) {
                pick_gain = gain;
                pick = idx;
            }
        }
        if (pick == -1) {
            record();
            return;
        }

        Vertex v = free_[pick];
        free_.erase(free_.begin() + pick);

        // v internal: adopt every outside out-neighbor.
        std::vector<Vertex> adopted;
        for (Vertex w : d_.out(v)) {
            if (role_[w] != Role::outside) continue;
            role_[w] = Role::free_leaf;
            parent_[w] = v;
            adopted.push_back(w);
        }
        role_[v] = Role::internal;
        in_tree_ += static_cast<int>(adopted.size());
        free_.insert(free_.end(), adopted.begin(), adopted.end());
        recurse();
        free_.resize(free_.size() - adopted.size());
        in_tree_ -= static_cast<int>(adopted.size());
        for (Vertex w : adopted) {
            role_[w] = Role::outside;
            parent_[w] = -1;
        }

        // v stays a leaf.
        role_[v] = Role::fixed_leaf;
        ++fixed_count_;
        recurse();
        --fixed_count_;
        role_[v] = Role::free_leaf;
        free_.insert(free_.begin() + pick, v);
    }

    int outside_reachable() {
        ++stamp_;
        std::vector<Vertex>& todo = scratch_;
        todo.assign(free_.begin(), free_.end());
        int count = 0;
        while (!todo.empty()) {
            Vertex u = todo.back();
            todo.pop_back();
            for (Vertex w : d_.out(u)) {
                if (role_[w] != Role::outside || mark_[w] == stamp_) continue;
                mark_[w] = stamp_;
                ++count;
                todo.push_back(w);
            }
        }
        return count;
    }

    void record() {
        if (mode_ == Mode::spanning && in_tree_ < n_) return;
        int leaves = fixed_count_ + static_cast<int>(free_.size());
        if (leaves <= best_) return;
        best_ = leaves;
        OutTree t;
        t.root = current_root_;
        t.host_size = n_;
        for (Vertex v = 0; v < n_; ++v) {
            if (parent_[v] != -1) t.parent[v] = parent_[v];
        }
        best_tree_ = std::move(t);
    }

    const Digraph& d_;
    int n_;
    int cap_;
    Mode mode_;
    std::uint64_t node_limit_;
    std::uint64_t nodes_ = 0;

    std::vector<Role> role_;
    std::vector<Vertex> parent_;
    std::vector<Vertex> free_;
    int fixed_count_ = 0;
    int in_tree_ = 0;
    Vertex current_root_ = 0;

    std::vector<std::uint32_t> mark_;
    std::uint32_t stamp_ = 0;
    std::vector<Vertex> scratch_;

    int best_ = 0;
    std::optional<OutTree> best_tree_;
};

}  // namespace

SolveResult branch_and_bound(const Digraph& d, int k, Mode mode, BranchAndBoundConfig cfg) {
    if (k < 1) throw ContractError("branch_and_bound: k must be >= 1");
    SolveResult result;
    result.problem = mode == Mode::spanning ? Problem::dmlob : Problem::dmlot;
    result.k = k;
    result.method = Method::branch_and_bound;

    std::vector<Vertex> roots;
    if (d.order() > 0) {
        if (mode == Mode::spanning) {
            auto c = strongly_connected_components(d);
            auto sources = source_strong_components(c);
            if (sources.size() == 1) roots = c.components[sources.front()];
        } else {
            for (Vertex v = 0; v < d.order(); ++v) roots.push_back(v);
        }
    }

    Search search(d, k, mode, cfg.node_limit);
    for (Vertex r : roots) {
        search.run_from(r);
        if (search.best() >= k) break;
    }

    result.value = std::min(search.best(), k);
    result.at_least_k = result.value >= k;
    result.answer = result.at_least_k ? Answer::yes : Answer::no;
    result.witness = search.best_tree();
    return result;
}

}  // namespace dmleaf
