#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dmleaf/bounds.hpp"
#include "dmleaf/decomposition.hpp"
#include "dmleaf/generators.hpp"
#include "dmleaf/serialize.hpp"
#include "dmleaf/solver.hpp"

namespace dmleaf::cli {

namespace {

// Failure carrying its exit code and a short kind tag for the JSON error line.
struct Failure {
    ExitCode code;
    std::string kind;
    std::string message;
};

[[noreturn]] void fail(ExitCode code, std::string kind, std::string message) {
    throw Failure{code, std::move(kind), std::move(message)};
}

std::string slurp(const std::string& path, std::istream& in) {
    if (path.empty() || path == "-") {
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }
    std::ifstream f(path);
    if (!f) fail(input, "io", "cannot open '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Digraph read_digraph(const std::string& path, std::istream& in, std::ostream& err, bool verbose) {
    std::istringstream text(slurp(path, in));
    try {
        auto r = parse_digraph_with_warnings(text);
        if (verbose) {
            for (const auto& w : r.warnings) err << (path.empty() ? "<stdin>" : path) << ": " << w << '\n';
        }
        return std::move(r.digraph);
    } catch (const ParseError& e) {
        fail(input, "parse", (path.empty() ? std::string("<stdin>") : path) + ": " + e.what());
    }
}

// Output goes to `out` unless a file is named.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) fail(input, "io", "cannot write '" + path + "'");
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

// Runs jobs in up to `jobs` threads; results come back in input order.
template <class F>
auto run_ordered(std::size_t count, int jobs, F work) {
    using R = decltype(work(std::size_t{0}));
    std::vector<R> results(count);
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = work(i);
        return results;
    }
    std::vector<std::future<void>> pending;
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    const int threads = std::min<int>(jobs, static_cast<int>(count));
    for (int t = 0; t < threads; ++t) {
        pending.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i; (i = next++) < count;) {
                try {
                    results[i] = work(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        }));
    }
    for (auto& p : pending) p.get();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

struct Common {
    bool verbose = false;
};

// -- solve ------------------------------------------------------------------------

struct SolveArgs {
    std::vector<std::string> inputs;
    std::string problem = "dmlob";
    int k = 0;
    std::string out;
    std::uint64_t dp_budget = 10'000'000;
    int width_budget = 64;
    std::uint64_t bb_budget = 100'000'000;
    bool allow_unknown = false;
    int jobs = 1;
};

int do_solve(const SolveArgs& a, const Common& c, std::istream& in, std::ostream& out, std::ostream& err) {
    std::vector<std::string> inputs = a.inputs.empty() ? std::vector<std::string>{""} : a.inputs;
    std::vector<Digraph> graphs;
    for (const auto& path : inputs) graphs.push_back(read_digraph(path, in, err, c.verbose));

    SolveOptions opts;
    opts.dp_table_budget = a.dp_budget;
    opts.dp_width_budget = a.width_budget;
    opts.bb_node_limit = a.bb_budget;
    opts.allow_unknown = a.allow_unknown;
    const bool spanning = a.problem == "dmlob";

    auto results = run_ordered(graphs.size(), a.jobs, [&](std::size_t i) {
        return spanning ? solve_dmlob(graphs[i], a.k, opts) : solve_dmlot(graphs[i], a.k, opts);
    });
    Sink sink(a.out, out);
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (c.verbose) {
            err << (inputs[i].empty() ? "<stdin>" : inputs[i]) << ": n=" << graphs[i].order()
                << " method=" << to_string(results[i].method) << '\n';
        }
        sink.get() << to_json(results[i]).dump() << '\n';
    }
    return ok;
}

// -- decompose --------------------------------------------------------------------

struct DecomposeArgs {
    std::string input;
    int k = 0;
    int root = 0;  // 1-based, 0: automatic
    std::string out;
    std::string dot;
};

int do_decompose(const DecomposeArgs& a, const Common& c, std::istream& in, std::ostream& out, std::ostream& err) {
    const Digraph d = read_digraph(a.input, in, err, c.verbose);
    if (a.root > d.order()) fail(usage, "usage", "--root " + std::to_string(a.root) + " is not a vertex");
    std::optional<Vertex> root;
    if (a.root > 0) root = a.root - 1;
    if (root && reachable_set(d, *root).size() != static_cast<std::size_t>(d.order())) {
        fail(input, "input", "not every vertex is reachable from root " + std::to_string(a.root));
    }
    try {
        auto outcome = decompose(d, a.k, root);
        if (c.verbose) {
            err << "decompose: " << (outcome.is_witness() ? "witness" : "decomposition") << " after "
                << to_string(outcome.trace().back()) << '\n';
        }
        Sink sink(a.out, out);
        sink.get() << to_json(outcome).dump() << '\n';
        if (!a.dot.empty()) {
            Sink dot(a.dot, out);
            if (outcome.is_witness()) {
                write_dot(dot.get(), d, outcome.tree());
            } else {
                write_dot(dot.get(), d, OutTree{0, {}, d.order()});
                if (c.verbose) err << "decompose: no witness, DOT shows the digraph only\n";
            }
        }
    } catch (const NoOutBranchingError& e) {
        fail(input, "input", e.what());
    }
    return ok;
}

// -- oracle -----------------------------------------------------------------------

struct OracleArgs {
    std::string input;
    int budget = brute_force_max_order;
    std::string out;
};

int do_oracle(const OracleArgs& a, const Common& c, std::istream& in, std::ostream& out, std::ostream& err) {
    const Digraph d = read_digraph(a.input, in, err, c.verbose);
    const int limit = std::min(a.budget, brute_force_max_order);
    if (d.order() > limit) {
        fail(input, "budget", "digraph has " + std::to_string(d.order()) + " vertices, oracle budget is " +
                                  std::to_string(limit));
    }
    auto spanning = brute_force_out_branching(d);
    auto any = brute_force_out_tree(d);
    Json j{{"type", "oracle"},
           {"n", d.order()},
           {"spanning", spanning.value},
           {"subtree", any.value},
           {"inLSufficient", in_L_sufficient(d)},
           {"inL", spanning.value == 0 || spanning.value == any.value},
           {"spanningWitness", spanning.witness ? to_json(*spanning.witness) : Json()},
           {"subtreeWitness", any.witness ? to_json(*any.witness) : Json()}};
    Sink sink(a.out, out);
    sink.get() << j.dump() << '\n';
    return ok;
}

// -- gen --------------------------------------------------------------------------

struct GenArgs {
    std::string family;
    int n = 0;
    int d = 0;
    std::string parts;
    int extra = 0;
    bool oriented = false;
    std::uint64_t seed = 0;
    std::string out;
};

std::vector<int> parse_parts(const std::string& text) {
    std::vector<int> parts;
    std::stringstream s(text);
    for (std::string item; std::getline(s, item, ',');) {
        try {
            std::size_t used = 0;
            int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            parts.push_back(v);
        } catch (const std::exception&) {
            fail(usage, "usage", "--parts expects comma-separated integers, got '" + text + "'");
        }
    }
    return parts;
}

GenSpec make_spec(const std::string& family, int n, int d, const std::string& parts, int extra, bool oriented,
                  std::uint64_t seed) {
    GenSpec spec;
    try {
        spec.family = family_from_string(family);
    } catch (const GenerationError& e) {
        fail(usage, "usage", e.what());
    }
    spec.n = n;
    spec.d = d;
    spec.extra = extra;
    spec.oriented = oriented;
    spec.seed = seed;
    if (!parts.empty()) spec.parts = parse_parts(parts);
    return spec;
}

int do_gen(const GenArgs& a, std::ostream& out) {
    GenSpec spec = make_spec(a.family, a.n, a.d, a.parts, a.extra, a.oriented, a.seed);
    Digraph d;
    try {
        d = gen(spec);
    } catch (const GenerationError& e) {
        fail(usage, "usage", e.what());
    }
    Sink sink(a.out, out);
    write_digraph(sink.get(), d);
    return ok;
}

// -- check-bounds -----------------------------------------------------------------

struct BoundsArgs {
    std::vector<std::string> families;
    std::string sizes;
    int d = 0;
    std::string parts;
    int extra = 0;
    bool oriented = false;
    std::uint64_t seed_from = 1;
    int seeds = 1;
    int oracle_budget = brute_force_max_order;
    std::string out;
    int jobs = 1;
};

// "8" or "4..9".
std::pair<int, int> parse_range(const std::string& text) {
    auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            int v = std::stoi(text);
            return {v, v};
        }
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::exception&) {
        fail(usage, "usage", "--n expects N or A..B, got '" + text + "'");
    }
}

int do_check_bounds(const BoundsArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
    std::vector<GenSpec> specs;
    auto [lo, hi] = a.sizes.empty() ? std::pair{0, 0} : parse_range(a.sizes);
    for (const auto& family : a.families) {
        for (int n = lo; n <= hi; ++n) {
            for (int s = 0; s < a.seeds; ++s) {
                specs.push_back(make_spec(family, n, a.d, a.parts, a.extra, a.oriented,
                                          a.seed_from + static_cast<std::uint64_t>(s)));
            }
        }
    }
    // Instances are independent; split them into contiguous chunks so the
    // concatenated reports keep family order.
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(a.jobs, specs.size()));
    std::vector<BoundCheckSummary> parts;
    try {
        parts = run_ordered(chunks, a.jobs, [&](std::size_t i) {
            std::size_t from = specs.size() * i / chunks, to = specs.size() * (i + 1) / chunks;
            return check_bounds({specs.begin() + from, specs.begin() + to}, a.oracle_budget);
        });
    } catch (const GenerationError& e) {
        fail(usage, "usage", e.what());
    }
    BoundCheckSummary total;
    for (auto& p : parts) {
        total.reports.insert(total.reports.end(), p.reports.begin(), p.reports.end());
        total.checked += p.checked;
        total.skipped += p.skipped;
        total.violations += p.violations;
        total.vacuous += p.vacuous;
    }
    Sink sink(a.out, out);
    write_bounds_csv(sink.get(), total.reports);
    if (c.verbose || !total.ok()) {
        err << "check-bounds: " << total.checked << " checked, " << total.skipped << " skipped, " << total.vacuous
            << " vacuous, " << total.violations << " violations\n";
    }
    if (!total.ok()) {
        fail(invariant, "bound-violation", std::to_string(total.violations) + " bound violation(s)");
    }
    return ok;
}

// -- validate ---------------------------------------------------------------------

struct ValidateArgs {
    std::string input;
    std::string against;
    std::string out;
};

Json validate_tree(const Digraph& d, const Json& j, std::optional<int> k, bool need_spanning) {
    auto report = validate_out_tree(d, out_tree_from_json(j, d.order()));
    Json r = to_json(report);
    if (report.valid && j.contains("leaves") && j.at("leaves") != report.leaf_count) {
        r["valid"] = false;
        r["issues"].push_back(Json{{"kind", "leaf-count"},
                                   {"detail", "claimed " + j.at("leaves").dump() + " leaves, found " +
                                                  std::to_string(report.leaf_count)}});
    }
    if (report.valid && k && report.leaf_count < *k) {
        r["valid"] = false;
        r["issues"].push_back(Json{{"kind", "too-few-leaves"},
                                   {"detail", std::to_string(report.leaf_count) + " < k = " + std::to_string(*k)}});
    }
    if (report.valid && need_spanning && !report.spanning) {
        r["valid"] = false;
        r["issues"].push_back(Json{{"kind", "not-spanning"}, {"detail", "out-branching expected"}});
    }
    return r;
}

Json validate_decomposition(const Digraph& d, const Json& j, std::optional<int> k) {
    auto pd = path_decomposition_from_json(j);
    for (const auto& bag : pd.bags) {
        for (Vertex v : bag) {
            if (v < 0 || v >= d.order()) throw FormatError("bag vertex " + std::to_string(v + 1) + " out of range");
        }
    }
    auto report = validate_path_decomposition(underlying_undirected(d), pd);
    Json issues = Json::array();
    for (const auto& s : report.issues) issues.push_back(s);
    bool valid = report.valid;
    if (j.contains("width") && j.at("width") != pd.width()) {
        valid = false;
        issues.push_back("claimed width " + j.at("width").dump() + ", found " + std::to_string(pd.width()));
    }
    if (k && pd.width() > *k * *k * *k) {
        valid = false;
        issues.push_back("width " + std::to_string(pd.width()) + " exceeds k^3");
    }
    return Json{{"type", "path-decomposition"}, {"valid", valid}, {"width", pd.width()}, {"issues", issues}};
}

Json validate_artifact(const Digraph& d, const Json& j) {
    if (!j.is_object()) throw FormatError("artifact must be a JSON object");
    if (j.contains("problem")) {
        // Solve result.
        const bool spanning = j.at("problem") == "dmlob";
        const int k = j.at("k").get<int>();
        Json r{{"type", "solve-result"}, {"valid", true}};
        if (j.at("answer") == true) {
            if (j.at("witness").is_null()) {
                r["valid"] = false;
                r["issues"] = Json::array({"answer true without a witness"});
                return r;
            }
            Json w = validate_tree(d, j.at("witness"), k, spanning);
            r["valid"] = w.at("valid");
            r["witness"] = std::move(w);
        } else if (!j.at("witness").is_null()) {
            Json w = validate_tree(d, j.at("witness"), std::nullopt, spanning);
            r["valid"] = w.at("valid");
            r["witness"] = std::move(w);
        }
        return r;
    }
    const std::string type = j.value("type", "");
    std::optional<int> k;
    if (j.contains("k")) k = j.at("k").get<int>();
    if (type == "out-tree") return validate_tree(d, j, k, false);
    if (type == "path-decomposition") return validate_decomposition(d, j, k);
    if (type == "oracle") {
        Json r{{"type", "oracle"}, {"valid", true}};
        if (!j.at("spanningWitness").is_null()) {
            r["spanningWitness"] = validate_tree(d, j.at("spanningWitness"), std::nullopt, true);
            if (r["spanningWitness"]["valid"] != true) r["valid"] = false;
        }
        if (!j.at("subtreeWitness").is_null()) {
            r["subtreeWitness"] = validate_tree(d, j.at("subtreeWitness"), std::nullopt, false);
            if (r["subtreeWitness"]["valid"] != true) r["valid"] = false;
        }
        return r;
    }
    throw FormatError("unknown artifact type '" + type + "'");
}

int do_validate(const ValidateArgs& a, const Common& c, std::istream& in, std::ostream& out, std::ostream& err) {
    if (a.against.empty() || a.against == "-") fail(usage, "usage", "--against needs a digraph file");
    const Digraph d = read_digraph(a.against, in, err, c.verbose);
    const std::string text = slurp(a.input, in);
    Json report;
    try {
        report = validate_artifact(d, Json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        fail(input, "format", e.what());
    } catch (const FormatError& e) {
        fail(input, "format", e.what());
    }
    Sink sink(a.out, out);
    sink.get() << report.dump() << '\n';
    if (report.at("valid") != true) fail(input, "invalid-artifact", "artifact does not validate");
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Directed max-leaf out-branching and out-tree tools", "dmleaf"};
    app.require_subcommand(1);
    Common common;
    app.add_flag("-v,--verbose", common.verbose, "Progress on stderr");

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Decide whether some out-branching/out-tree has >= k leaves");
    s->add_option("inputs", solve.inputs, "Digraph files (default stdin)");
    s->add_option("--problem", solve.problem, "dmlob (out-branching) or dmlot (out-tree)")
        ->check(CLI::IsMember({"dmlob", "dmlot"}));
    s->add_option("-k,--k", solve.k, "Leaf target")->required()->check(CLI::PositiveNumber);
    s->add_option("-o,--out", solve.out, "Output file");
    s->add_option("--dp-budget", solve.dp_budget, "DP table budget (states)");
    s->add_option("--width-budget", solve.width_budget, "Largest decomposition width handed to the DP");
    s->add_option("--bb-budget", solve.bb_budget, "Branch-and-bound node budget (with --allow-unknown)");
    s->add_flag("--allow-unknown", solve.allow_unknown, "Stop at the node budget and answer null");
    s->add_option("-j,--jobs", solve.jobs, "Threads across input files")->check(CLI::PositiveNumber);

    DecomposeArgs dec;
    auto* de = app.add_subcommand("decompose", "Witness with >= k leaves or path decomposition of width <= k^3");
    de->add_option("input", dec.input, "Digraph file (default stdin)");
    de->add_option("-k,--k", dec.k, "Leaf target")->required()->check(CLI::Range(2, 1 << 20));
    de->add_option("--root", dec.root, "Root of the out-branching (1-based)")->check(CLI::PositiveNumber);
    de->add_option("-o,--out", dec.out, "Output file");
    de->add_option("--dot", dec.dot, "Write the witness as DOT to this file");

    OracleArgs orc;
    auto* o = app.add_subcommand("oracle", "Exact optimum values by exhaustive search");
    o->add_option("input", orc.input, "Digraph file (default stdin)");
    o->add_option("--budget", orc.budget, "Largest order to attempt")->check(CLI::Range(0, brute_force_max_order));
    o->add_option("-o,--out", orc.out, "Output file");

    GenArgs g;
    auto* ge = app.add_subcommand("gen", "Generate a digraph from a seeded family");
    ge->add_option("--family", g.family, "Family tag")->required();
    ge->add_option("-n,--n", g.n, "Order");
    ge->add_option("-d,--d", g.d, "Minimum in-degree (min-in-degree-random)");
    ge->add_option("--parts", g.parts, "Part sizes a,b,c (multipartite-tournament)");
    ge->add_option("--extra", g.extra, "Extra arcs (strong-random)");
    ge->add_flag("--oriented", g.oriented, "No 2-cycles (min-in-degree-random)");
    ge->add_option("--seed", g.seed, "Seed");
    ge->add_option("-o,--out", g.out, "Output file");

    BoundsArgs b;
    auto* cb = app.add_subcommand("check-bounds", "Measure leaf lower bounds on generated instances (CSV)");
    cb->add_option("--family", b.families, "Family tag (repeatable)")->required();
    cb->add_option("-n,--n", b.sizes, "Order N or range A..B");
    cb->add_option("-d,--d", b.d, "Minimum in-degree (min-in-degree-random)");
    cb->add_option("--parts", b.parts, "Part sizes a,b,c (multipartite-tournament)");
    cb->add_option("--extra", b.extra, "Extra arcs (strong-random)");
    cb->add_flag("--oriented", b.oriented, "No 2-cycles (min-in-degree-random)");
    cb->add_option("--seed", b.seed_from, "First seed");
    cb->add_option("--seeds", b.seeds, "Seeds per family and order")->check(CLI::PositiveNumber);
    cb->add_option("--oracle-budget", b.oracle_budget, "Largest order measured exactly")
        ->check(CLI::Range(0, brute_force_max_order));
    cb->add_option("-o,--out", b.out, "Output file");
    cb->add_option("-j,--jobs", b.jobs, "Threads")->check(CLI::PositiveNumber);

    ValidateArgs v;
    auto* va = app.add_subcommand("validate", "Check a witness, decomposition or result against a digraph");
    va->add_option("input", v.input, "Artifact JSON (default stdin)");
    va->add_option("--against", v.against, "Digraph file")->required();
    va->add_option("-o,--out", v.out, "Output file");

    auto error_line = [&](const std::string& kind, const std::string& message) {
        err << Json{{"error", kind}, {"message", message}}.dump() << '\n';
    };

    std::vector<std::string> argv_store{"dmleaf"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        error_line("usage", e.what());
        return usage;
    }

    try {
        if (s->parsed()) return do_solve(solve, common, in, out, err);
        if (de->parsed()) return do_decompose(dec, common, in, out, err);
        if (o->parsed()) return do_oracle(orc, common, in, out, err);
        if (ge->parsed()) return do_gen(g, out);
        if (cb->parsed()) return do_check_bounds(b, common, out, err);
        if (va->parsed()) return do_validate(v, common, in, out, err);
    } catch (const Failure& f) {
        error_line(f.kind, f.message);
        return f.code;
    } catch (const InvariantError& e) {
        error_line("invariant", e.what());
        return invariant;
    } catch (const std::exception& e) {
        // Contract breaches inside the library are bugs here, not bad input.
        error_line("internal", e.what());
        return invariant;
    }
    error_line("usage", "no subcommand");
    return usage;
}

}  // namespace dmleaf::cli
