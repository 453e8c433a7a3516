#pragma once

// JSON and DOT forms of witnesses, decompositions and results. Vertex ids in
// every external form are 1-based, matching the text digraph format.

#include <iosfwd>
#include <stdexcept>

#include <json.hpp>

#include "dmleaf/decomposition.hpp"
#include "dmleaf/solver.hpp"

namespace dmleaf {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json to_json(const OutTree& t);
Json to_json(const PathDecomposition& pd);
Json to_json(const DecomposeOutcome& outcome);
Json to_json(const SolveResult& r);
Json to_json(const ValidationReport& r);

/// Inverse of to_json(OutTree); host_size is taken from the caller.
OutTree out_tree_from_json(const Json& j, int host_size);
PathDecomposition path_decomposition_from_json(const Json& j);

/// Digraph with tree arcs solid, other arcs dashed, leaves double-circled.
void write_dot(std::ostream& out, const Digraph& d, const OutTree& t);

}  // namespace dmleaf
