#include "dmleaf/serialize.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <string>

namespace dmleaf {

Json to_json(const OutTree& t) {
    Json parent = Json::object();
    for (const auto& [child, p] : t.parent) parent[std::to_string(child + 1)] = p + 1;
    return Json{{"type", "out-tree"}, {"root", t.root + 1}, {"parent", std::move(parent)}, {"leaves", t.leaf_count()}};
}

Json to_json(const PathDecomposition& pd) {
    Json bags = Json::array();
    for (const auto& bag : pd.bags) {
        Json b = Json::array();
        for (Vertex v : bag) b.push_back(v + 1);
        bags.push_back(std::move(b));
    }
    return Json{{"type", "path-decomposition"}, {"bags", std::move(bags)}, {"width", pd.width()}};
}

Json to_json(const DecomposeOutcome& outcome) {
    Json j = outcome.is_witness() ? to_json(outcome.tree()) : to_json(outcome.decomposition());
    j["k"] = outcome.k();
    Json trace = Json::array();
    for (Stage s : outcome.trace()) trace.push_back(std::string(to_string(s)));
    j["trace"] = std::move(trace);
    const auto& s = outcome.stats();
    j["stats"] = Json{{"paths", s.path_count},
                      {"u1", s.u1_size},
                      {"u2", s.u2_size},
                      {"maxOffPath", s.max_off_path},
                      {"maxForwardHeads", s.max_forward_heads},
                      {"componentWidth", s.component_width}};
    return j;
}

Json to_json(const SolveResult& r) {
    Json answer;
    if (r.answer == Answer::yes) answer = true;
    else if (r.answer == Answer::no) answer = false;
    return Json{{"problem", std::string(to_string(r.problem))},
                {"k", r.k},
                {"answer", answer},
                {"value", r.value},
                {"atLeastK", r.at_least_k},
                {"method", std::string(to_string(r.method))},
                {"witness", r.witness ? to_json(*r.witness) : Json()}};
}

Json to_json(const ValidationReport& r) {
    Json issues = Json::array();
    for (const auto& issue : r.issues) {
        issues.push_back(Json{{"kind", std::string(to_string(issue.kind))},
                              {"vertex", issue.vertex + 1},
                              {"detail", issue.detail}});
    }
    return Json{{"type", "out-tree"},
                {"valid", r.valid},
                {"leaves", r.leaf_count},
                {"spanning", r.spanning},
                {"issues", std::move(issues)}};
}

OutTree out_tree_from_json(const Json& j, int host_size) {
    try {
        if (j.at("type") != "out-tree") throw FormatError("expected type out-tree");
        OutTree t;
        t.host_size = host_size;
        t.root = j.at("root").get<int>() - 1;
        for (const auto& [key, value] : j.at("parent").items()) {
            std::size_t used = 0;
            int child = std::stoi(key, &used);
            if (used != key.size()) throw FormatError("bad vertex key '" + key + "'");
            t.parent[child - 1] = value.get<int>() - 1;
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed out-tree: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw FormatError("malformed out-tree: non-numeric vertex key");
    } catch (const std::out_of_range&) {
        throw FormatError("malformed out-tree: vertex key out of range");
    }
}

PathDecomposition path_decomposition_from_json(const Json& j) {
    try {
        if (j.at("type") != "path-decomposition") throw FormatError("expected type path-decomposition");
        PathDecomposition pd;
        for (const auto& bag : j.at("bags")) {
            VertexSet b;
            for (const auto& v : bag) b.push_back(v.get<int>() - 1);
            std::sort(b.begin(), b.end());
            pd.bags.push_back(std::move(b));
        }
        return pd;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed path decomposition: ") + e.what());
    }
}

void write_dot(std::ostream& out, const Digraph& d, const OutTree& t) {
    const auto tree_arcs = t.arcs();
    const std::set<Arc> in_tree(tree_arcs.begin(), tree_arcs.end());
    const auto leaves = t.leaves();
    const std::set<Vertex> leaf_set(leaves.begin(), leaves.end());
    const auto members = t.vertices();
    const std::set<Vertex> member_set(members.begin(), members.end());

    out << "digraph witness {\n";
    for (Vertex v = 0; v < d.order(); ++v) {
        out << "  " << v + 1;
        if (leaf_set.count(v)) out << " [shape=doublecircle]";
        else if (member_set.count(v)) out << " [shape=circle]";
        else out << " [shape=circle, color=gray]";
        out << ";\n";
    }
    for (const auto& [u, v] : d.arcs()) {
        out << "  " << u + 1 << " -> " << v + 1;
        out << (in_tree.count({u, v}) ? " [style=solid]" : " [style=dashed, color=gray]") << ";\n";
    }
    out << "}\n";
}

}  // namespace dmleaf
