#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "dmleaf/solver.hpp"

namespace dmleaf {

// Left-to-right dynamic program over a path decomposition, refined into
// single-vertex introduce / forget steps. When a vertex is introduced all of
// its arcs to the current bag are decided at once: at most one parent and any
// set of parentless children from other components.
//
// Per bag vertex the state keeps: unused (subtree mode only) or used with
// "has parent", "has child" and the label of its component in the partial
// forest. Globally it keeps whether the root has been fixed and whether a
// component has been closed. A used vertex forgotten without a parent becomes
// the root (at most one). Forgetting the last bag vertex of a component closes
// it; that is only allowed when no other used vertex is in the bag, and no
// used vertex may be introduced afterwards. The value of a state is the number
// of forgotten childless used vertices, saturated at the leaf cap.
//
// Keys are byte strings, one byte per slot plus a trailing global byte.

namespace {

constexpr unsigned char slot_unused = 0;
constexpr unsigned char flag_used = 1;
constexpr unsigned char flag_parent = 2;
constexpr unsigned char flag_child = 4;
constexpr unsigned char flag_mask = 7;
constexpr int comp_shift = 3;

constexpr std::size_t max_slots = 32;  // labels fit in five bits

constexpr unsigned char global_root = 1;
constexpr unsigned char global_closed = 2;

unsigned char label_of(unsigned char s) { return static_cast<unsigned char>(s >> comp_shift); }
unsigned char with_label(unsigned char s, unsigned label) {
    return static_cast<unsigned char>((s & flag_mask) | (label << comp_shift));
}

// Relabel components by first occurrence.
void canonicalize(std::string& key) {
    unsigned char map[max_slots + 1];
    std::fill(std::begin(map), std::end(map), 0xFF);
    unsigned next = 0;
    for (std::size_t i = 0; i + 1 < key.size(); ++i) {
        auto s = static_cast<unsigned char>(key[i]);
        if (!(s & flag_used)) continue;
        unsigned char c = label_of(s);
        if (map[c] == 0xFF) map[c] = static_cast<unsigned char>(next++);
        key[i] = static_cast<char>(with_label(s, map[c]));
    }
}

struct Step {
    bool introduce;
    Vertex v;
    std::vector<Vertex> bag;            // before the step
    std::vector<int> parent_slots;      // introduce: slots u with u -> v
    std::uint64_t child_candidates = 0; // introduce: slots u with v -> u
};

std::vector<Step> refine(const Digraph& d, const PathDecomposition& pd) {
    std::vector<Step> steps;
    std::vector<Vertex> bag;
    std::vector<char> present(d.order(), 0);
    auto forget = [&](Vertex v) {
        steps.push_back({false, v, bag, {}, 0});
        present[v] = 0;
        bag.erase(std::find(bag.begin(), bag.end(), v));
    };
    for (const auto& next : pd.bags) {
        std::vector<char> wanted(d.order(), 0);
        for (Vertex v : next) wanted[v] = 1;
        for (Vertex v : std::vector<Vertex>(bag)) {
            if (!wanted[v]) forget(v);
        }
        for (Vertex v : next) {
            if (present[v]) continue;
            Step s{true, v, bag, {}, 0};
            for (std::size_t i = 0; i < bag.size(); ++i) {
                if (d.has_arc(bag[i], v)) s.parent_slots.push_back(static_cast<int>(i));
                if (d.has_arc(v, bag[i])) s.child_candidates |= std::uint64_t{1} << i;
            }
            steps.push_back(std::move(s));
            bag.push_back(v);
            present[v] = 1;
        }
    }
    for (Vertex v : std::vector<Vertex>(bag)) forget(v);
    return steps;
}

struct Entry {
    std::int32_t prev;
    std::uint8_t leaves;
    std::int8_t parent_slot;   // introduce: -1 none
    bool used;                 // introduce
    std::uint32_t children;    // introduce: slot mask
};

}  // namespace

SolveResult dp_pathwidth(const Digraph& d, const PathDecomposition& pd, const DpConfig& cfg) {
    if (cfg.leaf_cap < 1) throw ContractError("dp_pathwidth: leaf cap must be >= 1");
    if (cfg.leaf_cap > 250) throw ContractError("dp_pathwidth: leaf cap above 250 is not supported");
    auto report = validate_path_decomposition(underlying_undirected(d), pd);
    if (!report.valid) throw ContractError("dp_pathwidth: invalid decomposition: " + report.issues.front());
    if (pd.width() > cfg.width_budget) {
        throw BudgetExceeded("dp_pathwidth: width " + std::to_string(pd.width()) + " exceeds budget " +
                             std::to_string(cfg.width_budget));
    }
    if (static_cast<std::size_t>(pd.width()) + 1 > max_slots) {
        throw BudgetExceeded("dp_pathwidth: width " + std::to_string(pd.width()) + " too large for state encoding");
    }

    const bool subtree = cfg.mode == Mode::subtree;
    const int cap = cfg.leaf_cap;
    const auto steps = refine(d, pd);

    SolveResult result;
    result.problem = subtree ? Problem::dmlot : Problem::dmlob;
    result.k = cap;
    result.method = Method::dp;

    std::vector<std::vector<Entry>> layers;
    layers.reserve(steps.size() + 1);
    layers.push_back({Entry{-1, 0, -1, false, 0}});
    std::vector<std::string> keys{std::string(1, '\0')};
    std::uint64_t stored = 1;

    for (const Step& step : steps) {
        std::vector<Entry> next;
        std::vector<std::string> next_keys;
        std::unordered_map<std::string, std::int32_t> index;
        const auto& prev = layers.back();
        index.reserve(prev.size() * 2);

        auto emit = [&](std::string&& key, const Entry& e) {
            canonicalize(key);
            auto [it, inserted] = index.try_emplace(key, static_cast<std::int32_t>(next.size()));
            if (inserted) {
                next.push_back(e);
                next_keys.push_back(std::move(key));
                if (++stored > cfg.table_budget) {
                    throw BudgetExceeded("dp_pathwidth: table budget of " + std::to_string(cfg.table_budget) +
                                         " states exceeded");
                }
            } else if (e.leaves > next[it->second].leaves) {
                next[it->second] = e;
            }
        };

        const std::size_t slot_v =
            step.introduce ? 0 : static_cast<std::size_t>(std::find(step.bag.begin(), step.bag.end(), step.v) -
                                                          step.bag.begin());

        for (std::int32_t idx = 0; idx < static_cast<std::int32_t>(prev.size()); ++idx) {
            const std::string& key = keys[idx];
            const std::uint8_t leaves = prev[idx].leaves;
            const auto global = static_cast<unsigned char>(key.back());
            const std::size_t width = key.size() - 1;

            if (!step.introduce) {
                auto s = static_cast<unsigned char>(key[slot_v]);
                std::string rest = key;
                rest.erase(slot_v, 1);
                if (!(s & flag_used)) {
                    emit(std::move(rest), {idx, leaves, -1, false, 0});
                    continue;
                }
                unsigned char g = global;
                if (!(s & flag_parent)) {
                    if (g & global_root) continue;
                    g |= global_root;
                }
                bool others_same = false, others_used = false;
                for (std::size_t i = 0; i + 1 < rest.size(); ++i) {
                    auto r = static_cast<unsigned char>(rest[i]);
                    if (!(r & flag_used)) continue;
                    others_used = true;
                    if (label_of(r) == label_of(s)) others_same = true;
                }
                if (!others_same) {
                    if (others_used) continue;
                    g |= global_closed;
                }
                rest.back() = static_cast<char>(g);
                auto gained = static_cast<std::uint8_t>((s & flag_child) ? leaves : std::min(cap, leaves + 1));
                emit(std::move(rest), {idx, gained, -1, false, 0});
                continue;
            }

            std::string base = key.substr(0, width);
            if (subtree) {
                std::string k = base;
                k.push_back(static_cast<char>(slot_unused));
                k.push_back(static_cast<char>(global));
                emit(std::move(k), {idx, leaves, -1, false, 0});
            }
            if (global & global_closed) continue;

            // Children: used, parentless bag vertices with an arc from v.
            std::vector<int> kids;
            for (std::size_t i = 0; i < width; ++i) {
                auto s = static_cast<unsigned char>(key[i]);
                if ((step.child_candidates >> i & 1U) && (s & flag_used) && !(s & flag_parent)) {
                    kids.push_back(static_cast<int>(i));
                }
            }
            std::vector<int> parents{-1};
            for (int i : step.parent_slots) {
                if (static_cast<unsigned char>(key[i]) & flag_used) parents.push_back(i);
            }
            const unsigned fresh = max_slots - 1;  // at most max_slots - 1 used slots precede v
            for (int p : parents) {
                // A child in the parent's component would close a cycle.
                std::vector<int> allowed;
                for (int c : kids) {
                    if (p < 0 || label_of(static_cast<unsigned char>(key[c])) !=
                                     label_of(static_cast<unsigned char>(key[p]))) {
                        allowed.push_back(c);
                    }
                }
                const std::uint32_t subsets = std::uint32_t{1} << allowed.size();
                for (std::uint32_t sub = 0; sub < subsets; ++sub) {
                    std::string k = base;
                    std::uint32_t mask = 0;
                    unsigned merged[max_slots + 1] = {};
                    for (std::size_t j = 0; j < allowed.size(); ++j) {
                        if (!(sub >> j & 1U)) continue;
                        int c = allowed[j];
                        mask |= std::uint32_t{1} << c;
                        merged[label_of(static_cast<unsigned char>(key[c]))] = 1;
                        k[c] = static_cast<char>(static_cast<unsigned char>(k[c]) | flag_parent);
                    }
                    unsigned char vs = flag_used;
                    unsigned label = fresh;
                    if (p >= 0) {
                        label = label_of(static_cast<unsigned char>(key[p]));
                        k[p] = static_cast<char>(static_cast<unsigned char>(k[p]) | flag_child);
                        vs |= flag_parent;
                    }
                    if (mask) vs |= flag_child;
                    for (std::size_t i = 0; i < width; ++i) {
                        auto s = static_cast<unsigned char>(k[i]);
                        if ((s & flag_used) && merged[label_of(s)]) k[i] = static_cast<char>(with_label(s, label));
                    }
                    k.push_back(static_cast<char>(with_label(vs, label)));
                    k.push_back(static_cast<char>(global));
                    emit(std::move(k), {idx, leaves, static_cast<std::int8_t>(p), true, mask});
                }
            }
        }

        layers.push_back(std::move(next));
        keys = std::move(next_keys);
    }

    // Accept: single closed component (root fixed implicitly).
    std::int32_t best = -1;
    for (std::int32_t idx = 0; idx < static_cast<std::int32_t>(layers.back().size()); ++idx) {
        if (!(static_cast<unsigned char>(keys[idx].back()) & global_closed)) continue;
        if (best == -1 || layers.back()[idx].leaves > layers.back()[best].leaves) best = idx;
    }
    if (best == -1) {
        result.value = 0;
        result.answer = Answer::no;
        return result;
    }

    result.value = layers.back()[best].leaves;
    result.at_least_k = result.value >= cap;
    result.answer = result.at_least_k ? Answer::yes : Answer::no;

    OutTree t;
    t.host_size = d.order();
    std::vector<Vertex> used;
    std::int32_t at = best;
    for (std::size_t s = steps.size(); s-- > 0;) {
        const Entry& e = layers[s + 1][at];
        const Step& step = steps[s];
        if (step.introduce && e.used) {
            used.push_back(step.v);
            if (e.parent_slot >= 0) t.parent[step.v] = step.bag[e.parent_slot];
            for (std::size_t i = 0; i < step.bag.size(); ++i) {
                if (e.children >> i & 1U) t.parent[step.bag[i]] = step.v;
            }
        }
        at = e.prev;
    }
    for (Vertex v : used) {
        if (!t.parent.count(v)) t.root = v;
    }
    result.witness = std::move(t);
    return result;
}

}  // namespace dmleaf
