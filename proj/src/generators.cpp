#include "dmleaf/generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace dmleaf {

namespace {

constexpr int max_attempts_per_slot = 1000;

struct FamilyName {
    Family family;
    std::string_view name;
};

constexpr FamilyName family_names[] = {
    {Family::cycle, "cycle"},
    {Family::double_cycle, "double-cycle"},
    {Family::path, "path"},
    {Family::out_star, "out-star"},
    {Family::tournament_random, "tournament-random"},
    {Family::tournament_transitive, "tournament-transitive"},
    {Family::multipartite_tournament, "multipartite-tournament"},
    {Family::min_in_degree_random, "min-in-degree-random"},
    {Family::strong_random, "strong-random"},
};

void require(bool ok, const std::string& what) {
    if (!ok) throw GenerationError(what);
}

std::vector<Vertex> random_permutation(int n, std::mt19937_64& rng) {
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    // Fisher-Yates with the portable draw.
    for (int i = n - 1; i > 0; --i) {
        auto j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

Digraph min_in_degree_random(const GenSpec& spec, std::mt19937_64& rng) {
    const int n = spec.n;
    const int d = spec.d;
    require(d >= 1, "min-in-degree-random: d must be positive");
    require(d < n, "min-in-degree-random: need d < n");
    if (spec.oriented) require(2 * d <= n - 1, "min-in-degree-random: oriented needs 2d <= n-1");

    std::set<Arc> arcs;
    for (Vertex v = 0; v < n; ++v) {
        for (int slot = 0; slot < d; ++slot) {
            bool placed = false;
            for (int attempt = 0; attempt < max_attempts_per_slot; ++attempt) {
                auto u = static_cast<Vertex>(uniform_below(rng, static_cast<std::uint64_t>(n)));
                if (u == v || arcs.count({u, v})) continue;
                if (spec.oriented && arcs.count({v, u})) continue;
                arcs.insert({u, v});
                placed = true;
                break;
            }
            require(placed, "min-in-degree-random: no admissible in-neighbor for vertex " + std::to_string(v) +
                                " after " + std::to_string(max_attempts_per_slot) + " attempts");
        }
    }
    return Digraph(n, {arcs.begin(), arcs.end()});
}

}  // namespace

std::string_view to_string(Family f) {
    for (const auto& entry : family_names) {
        if (entry.family == f) return entry.name;
    }
    return "unknown";
}

Family family_from_string(std::string_view tag) {
    for (const auto& entry : family_names) {
        if (entry.name == tag) return entry.family;
    }
    throw GenerationError("unknown family '" + std::string(tag) + "'");
}

int GenSpec::order() const {
    if (family == Family::multipartite_tournament) return std::accumulate(parts.begin(), parts.end(), 0);
    return n;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % bound + 1) % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x > limit);
    return x % bound;
}

Digraph gen(const GenSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    const int n = spec.n;
    std::vector<Arc> arcs;

    if (spec.family != Family::multipartite_tournament) require(n >= 1, "size parameter n must be positive");

    switch (spec.family) {
        case Family::cycle:
            require(n >= 2, "cycle: need n >= 2");
            for (Vertex i = 0; i < n; ++i) arcs.emplace_back(i, (i + 1) % n);
            break;
        case Family::double_cycle:
            require(n >= 3, "double-cycle: need n >= 3");
            for (Vertex i = 0; i < n; ++i) {
                arcs.emplace_back(i, (i + 1) % n);
                arcs.emplace_back((i + 1) % n, i);
            }
            break;
        case Family::path:
            for (Vertex i = 0; i + 1 < n; ++i) arcs.emplace_back(i, i + 1);
            break;
        case Family::out_star:
            for (Vertex i = 1; i < n; ++i) arcs.emplace_back(0, i);
            break;
        case Family::tournament_random:
            for (Vertex i = 0; i < n; ++i) {
                for (Vertex j = i + 1; j < n; ++j) {
                    if (rng() & 1U) arcs.emplace_back(i, j);
                    else arcs.emplace_back(j, i);
                }
            }
            break;
        case Family::tournament_transitive:
            for (Vertex i = 0; i < n; ++i) {
                for (Vertex j = i + 1; j < n; ++j) arcs.emplace_back(i, j);
            }
            break;
        case Family::multipartite_tournament: {
            require(spec.parts.size() >= 2, "multipartite-tournament: need at least 2 parts");
            std::vector<int> part_of;
            for (int p = 0; p < static_cast<int>(spec.parts.size()); ++p) {
                require(spec.parts[p] >= 1, "multipartite-tournament: part sizes must be positive");
                part_of.insert(part_of.end(), spec.parts[p], p);
            }
            const int total = static_cast<int>(part_of.size());
            for (Vertex i = 0; i < total; ++i) {
                for (Vertex j = i + 1; j < total; ++j) {
                    if (part_of[i] == part_of[j]) continue;
                    if (rng() & 1U) arcs.emplace_back(i, j);
                    else arcs.emplace_back(j, i);
                }
            }
            return Digraph(total, std::move(arcs));
        }
        case Family::min_in_degree_random:
            return min_in_degree_random(spec, rng);
        case Family::strong_random: {
            require(n >= 2, "strong-random: need n >= 2");
            const long long capacity = static_cast<long long>(n) * (n - 1) - n;
            require(spec.extra >= 0 && spec.extra <= capacity, "strong-random: too many extra arcs");
            auto perm = random_permutation(n, rng);
            std::set<Arc> chosen;
            for (int i = 0; i < n; ++i) chosen.insert({perm[i], perm[(i + 1) % n]});
            int added = 0;
            while (added < spec.extra) {
                auto u = static_cast<Vertex>(uniform_below(rng, static_cast<std::uint64_t>(n)));
                auto v = static_cast<Vertex>(uniform_below(rng, static_cast<std::uint64_t>(n)));
                if (u == v || !chosen.insert({u, v}).second) continue;
                ++added;
            }
            return Digraph(n, {chosen.begin(), chosen.end()});
        }
    }
    return Digraph(n, std::move(arcs));
}

}  // namespace dmleaf
