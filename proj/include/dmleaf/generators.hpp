#pragma once

// Seeded instance families. All randomness comes from std::mt19937_64 seeded
// with GenSpec::seed; integer draws use rejection sampling so the output is
// identical on every conforming standard library.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dmleaf/digraph.hpp"

namespace dmleaf {

enum class Family {
    cycle,
    double_cycle,
    path,
    out_star,
    tournament_random,
    tournament_transitive,
    multipartite_tournament,
    min_in_degree_random,
    strong_random,
};

std::string_view to_string(Family f);
/// Accepts the dashed tags used on the command line ("double-cycle", ...).
Family family_from_string(std::string_view tag);

struct GenSpec {
    Family family = Family::cycle;
    int n = 1;
    int d = 0;                // min-in-degree-random
    bool oriented = false;    // min-in-degree-random
    int extra = 0;            // strong-random
    std::vector<int> parts;   // multipartite-tournament
    std::uint64_t seed = 0;

    /// Vertex count of the generated digraph.
    int order() const;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Digraph gen(const GenSpec& spec);

/// Uniform integer in [0, bound) by rejection; bound > 0.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace dmleaf
