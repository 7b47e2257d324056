#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "phylotoric/phylotoric.hpp"

// Command-line front end.  One subcommand per question; every run writes a
// single JSON document (or a flat text rendering of the same document) to the
// chosen sink.  Exit codes: 0 verified / reported, 1 a check was falsified
// (the document carries the evidence), 2 bad input or a resource overrun.

namespace phylotoric::cli {

namespace detail {

// Limit defaults are overridable by environment, then by flags.
inline std::int64_t env_limit(const char* name, std::int64_t fallback) {
    const char* raw = std::getenv(name);
    if (raw == nullptr) return fallback;
    std::string text(raw);
    std::size_t pos = 0;
    long long value = 0;
    try {
        value = std::stoll(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || value <= 0)
        throw std::invalid_argument(std::string(name) + ": expected a positive integer, got '" +
                                    text + "'");
    return value;
}

inline std::vector<Integer> parse_integer_list(const std::string& text, const char* what) {
    std::vector<Integer> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t stop = text.find(',', start);
        if (stop == std::string::npos) stop = text.size();
        std::string token = text.substr(start, stop - start);
        std::size_t pos = 0;
        long long value = 0;
        try {
            value = std::stoll(token, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (token.empty() || pos != token.size())
            throw std::invalid_argument(std::string(what) + ": bad integer token '" + token + "'");
        out.emplace_back(value);
        start = stop + 1;
    }
    return out;
}

inline std::vector<std::int64_t> parse_index_list(const std::string& text, const char* what) {
    std::vector<std::int64_t> out;
    for (const Integer& v : parse_integer_list(text, what))
        out.push_back(static_cast<std::int64_t>(v));
    return out;
}

inline std::vector<Tree> parse_trees(const std::vector<std::string>& texts) {
    std::vector<Tree> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) out.push_back(Tree::parse(text));
    return out;
}

inline nlohmann::json tree_texts(const std::vector<Tree>& trees) {
    nlohmann::json out = nlohmann::json::array();
    for (const Tree& t : trees) out.push_back(t.text());
    return out;
}

// A finite lattice index renders as a number (or decimal string), the
// infinite one as the string "infinite".
inline nlohmann::json index_to_json(const std::optional<Integer>& index) {
    if (!index) return "infinite";
    return to_json(*index);
}

inline nlohmann::json verdict_doc(const char* check, nlohmann::json inputs,
                                  nlohmann::json verdict) {
    return {{"check", check}, {"inputs", std::move(inputs)}, {"verdict", std::move(verdict)}};
}

inline bool scalar_rows(const nlohmann::json& value) {
    if (!value.is_array() || value.empty()) return false;
    for (const nlohmann::json& row : value) {
        if (!row.is_array()) return false;
        for (const nlohmann::json& cell : row)
            if (cell.is_structured()) return false;
    }
    return true;
}

inline void render_value(std::ostream& os, const nlohmann::json& value) {
    if (value.is_string())
        os << value.get<std::string>();
    else
        os << value.dump();
}

// Flat "key: value" rendering of the same document the JSON mode emits;
// matrices get one row per line.
inline void render_text(std::ostream& os, const nlohmann::json& doc, int indent = 0) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [key, value] : doc.items()) {
        if (value.is_object()) {
            os << pad << key << ":\n";
            render_text(os, value, indent + 2);
        } else if (scalar_rows(value)) {
            os << pad << key << ":\n";
            for (const nlohmann::json& row : value) os << pad << "  " << row.dump() << "\n";
        } else {
            os << pad << key << ": ";
            render_value(os, value);
            os << "\n";
        }
    }
}

// The two face families the library can certify, swept exhaustively: the
// lift comparison for single-edge-value faces, and functional support for
// the minimal face of every network pair.
struct FacesOutcome {
    bool ok = true;
    nlohmann::json witness;
};

inline FacesOutcome faces_sweep(const Tree& t, const AbelianGroup& g, const Limits& limits) {
    for (int e = 0; e < t.edge_count(); ++e)
        for (std::int64_t i = 0; i < g.order(); ++i) {
            GroupElement value = g.element_at(i);
            FaceType1Report r = face_type1(t, g, e, value, limits);
            if (r.lift_matches && !*r.lift_matches)
                return {false,
                        {{"edge", e}, {"element", value.residues}, {"kind", "edge-value-lift"}}};
        }

    std::vector<Network> nets;
    for (auto& [s, n] : socket_network_bijection(t, g)) nets.push_back(std::move(n));
    for (std::size_t i = 0; i < nets.size(); ++i)
        for (std::size_t j = i + 1; j < nets.size(); ++j) {
            MinimalFaceReport m = minimal_face(t, g, nets[i], nets[j], limits);
            if (!is_face(t, g, m.members, limits))
                return {false,
                        {{"kind", "minimal-face"},
                         {"minimal_face", to_json(m.members)},
                         {"pair", nlohmann::json::array({to_json(nets[i]), to_json(nets[j])})}}};
        }
    return {true, {}};
}

}  // namespace detail

// Parses the argument list (program name excluded), runs the requested
// subcommand, and writes one document to `out` or to --output.  Diagnostics
// go to `err`.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact toric data of group-based models on trees"};
    app.name("phylotoric");
    app.require_subcommand(1);

    std::string format = "json";
    std::string output_path;
    std::int64_t max_sockets = 0;
    std::int64_t max_fiber = 0;
    std::int64_t jobs = 1;
    bool no_timing = false;
    try {
        max_sockets = detail::env_limit("PHYLOTORIC_MAX_SOCKETS", Limits{}.max_sockets);
        max_fiber = detail::env_limit("PHYLOTORIC_MAX_FIBER", Limits{}.max_fiber_multisets);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    }

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--output", output_path, "write the document to this file");
        sub->add_option("--max-sockets", max_sockets, "socket budget")
            ->check(CLI::PositiveNumber);
        sub->add_option("--max-fiber", max_fiber, "fiber multiset budget")
            ->check(CLI::PositiveNumber);
        sub->add_option("--jobs", jobs, "upper bound on worker threads")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--no-timing", no_timing, "omit elapsed_ms for byte-stable output");
    };

    std::string tree_text, group_text, mode_text = "scheme";
    std::string coarse_text, fine_text, target_text, support_text;
    std::vector<std::string> source_texts, tree_texts;
    std::int64_t leaves = 0, degree = 0, move_degree = 2, test_degree = 3;

    CLI::App* polytope_cmd = app.add_subcommand("polytope", "vertex matrix of a model");
    polytope_cmd->add_option("--tree", tree_text, "tree text")->required();
    polytope_cmd->add_option("--group", group_text, "comma-separated factor orders")->required();
    add_common(polytope_cmd);

    CLI::App* kernel_cmd = app.add_subcommand("kernel", "relation lattice of a model");
    kernel_cmd->add_option("--tree", tree_text, "tree text")->required();
    kernel_cmd->add_option("--group", group_text, "comma-separated factor orders")->required();
    add_common(kernel_cmd);

    CLI::App* dims_cmd = app.add_subcommand("dims", "affine and projective ranks");
    dims_cmd->add_option("--tree", tree_text, "tree text")->required();
    dims_cmd->add_option("--group", group_text, "comma-separated factor orders")->required();
    add_common(dims_cmd);

    CLI::App* fiber_cmd = app.add_subcommand("fiber", "monomials sharing an exponent image");
    fiber_cmd->add_option("--tree", tree_text, "tree text")->required();
    fiber_cmd->add_option("--group", group_text, "comma-separated factor orders")->required();
    fiber_cmd->add_option("--degree", degree, "number of networks per monomial")->required();
    fiber_cmd->add_option("--target", target_text, "comma-separated exponent vector")->required();
    add_common(fiber_cmd);

    CLI::App* card_cmd = app.add_subcommand("fiber-cardinality",
                                            "generic fiber cardinality of the monomial map");
    card_cmd->add_option("--tree", tree_text, "tree text")->required();
    card_cmd->add_option("--group", group_text, "comma-separated factor orders")->required();
    add_common(card_cmd);

    CLI::App* verify_cmd = app.add_subcommand("verify", "checks with a true/false verdict");
    verify_cmd->require_subcommand(1);

    CLI::App* main_cmd =
        verify_cmd->add_subcommand("main", "claw relations recovered from source trees");
    main_cmd->add_option("--leaves", leaves, "leaf count")->required();
    main_cmd->add_option("--group", group_text, "comma-separated factor orders")->required();
    main_cmd->add_option("--mode", mode_text, "scheme (lattice) or set (saturation) equality")
        ->check(CLI::IsMember({"scheme", "set"}));
    main_cmd->add_option("--sources", source_texts,
                         "source trees (default: every tree with an inner edge)");
    add_common(main_cmd);

    CLI::App* exactseq_cmd =
        verify_cmd->add_subcommand("exactseq", "socket-level image equals the parity kernel");
    exactseq_cmd->add_option("--leaves", leaves, "leaf count")->required();
    add_common(exactseq_cmd);

    CLI::App* kii_cmd = verify_cmd->add_subcommand(
        "kernel-in-image", "binary relation triples reach the whole kernel");
    kii_cmd->add_option("--tree", tree_text, "tree text")->required();
    add_common(kii_cmd);

    CLI::App* index_cmd =
        verify_cmd->add_subcommand("index", "socket-level and edge-level image indices agree");
    index_cmd->add_option("--tree", tree_text, "tree text")->required();
    add_common(index_cmd);

    CLI::App* inclusion_cmd = verify_cmd->add_subcommand(
        "inclusion", "relations of a contraction hold on the finer tree");
    inclusion_cmd->add_option("--coarse", coarse_text, "contracted tree")->required();
    inclusion_cmd->add_option("--fine", fine_text, "refining tree")->required();
    inclusion_cmd->add_option("--group", group_text, "comma-separated factor orders")->required();
    add_common(inclusion_cmd);

    CLI::App* generation_cmd = verify_cmd->add_subcommand(
        "generation", "source relations connect the target's bounded-degree fibers");
    generation_cmd->add_option("--target", target_text, "target tree")->required();
    generation_cmd->add_option("--group", group_text, "comma-separated factor orders")->required();
    generation_cmd->add_option("--sources", source_texts, "source trees")->required();
    generation_cmd->add_option("--move-degree", move_degree, "largest move degree");
    generation_cmd->add_option("--test-degree", test_degree, "largest fiber degree tested");
    add_common(generation_cmd);

    CLI::App* faces_cmd =
        verify_cmd->add_subcommand("faces", "exhaustive face consistency sweep");
    faces_cmd->add_option("--tree", tree_text, "tree text")->required();
    faces_cmd->add_option("--group", group_text, "comma-separated factor orders")->required();
    add_common(faces_cmd);

    CLI::App* orbit_cmd = verify_cmd->add_subcommand(
        "orbit", "component count of a shared face across tree models");
    orbit_cmd->add_option("--support", support_text, "comma-separated socket indices")
        ->required();
    orbit_cmd->add_option("--group", group_text, "comma-separated factor orders")->required();
    orbit_cmd->add_option("--trees", tree_texts, "tree texts")->required();
    add_common(orbit_cmd);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    int exit_code = 0;
    nlohmann::json doc;
    auto started = std::chrono::steady_clock::now();
    try {
        Limits limits;
        limits.max_sockets = max_sockets;
        limits.max_fiber_multisets = max_fiber;

        if (polytope_cmd->parsed()) {
            doc = to_json(build_polytope(Tree::parse(tree_text), AbelianGroup::parse(group_text),
                                         limits));
        } else if (kernel_cmd->parsed()) {
            doc = to_json(
                kernel_lattice(Tree::parse(tree_text), AbelianGroup::parse(group_text), limits));
        } else if (dims_cmd->parsed()) {
            Tree t = Tree::parse(tree_text);
            AbelianGroup g = AbelianGroup::parse(group_text);
            DimensionReport r = dimension_report(t, g, limits);
            doc = to_json(r);
            doc["group"] = g.text();
            doc["tree"] = t.text();
            exit_code = r.consistent ? 0 : 1;
        } else if (fiber_cmd->parsed()) {
            FiberSpec spec{Tree::parse(tree_text), AbelianGroup::parse(group_text), degree,
                           detail::parse_integer_list(target_text, "--target")};
            std::vector<std::vector<Network>> fiber = enumerate_fiber(spec, limits);
            nlohmann::json multisets = nlohmann::json::array();
            for (const std::vector<Network>& m : fiber) multisets.push_back(to_json(m));
            doc = {{"degree", spec.degree},
                   {"group", spec.group.text()},
                   {"multisets", std::move(multisets)},
                   {"target", to_json(spec.target)},
                   {"tree", spec.tree.text()}};
        } else if (card_cmd->parsed()) {
            Tree t = Tree::parse(tree_text);
            AbelianGroup g = AbelianGroup::parse(group_text);
            doc = {{"cardinality", to_json(fiber_cardinality(t, g, limits))},
                   {"group", g.text()},
                   {"tree", t.text()}};
        } else if (main_cmd->parsed()) {
            AbelianGroup g = AbelianGroup::parse(group_text);
            std::vector<Tree> sources = detail::parse_trees(source_texts);
            if (sources.empty())
                for (Tree& t : enumerate_topologies(static_cast<int>(leaves)))
                    if (t.edge_count() > t.leaf_count()) sources.push_back(std::move(t));
            EqualityMode mode = mode_text == "set" ? EqualityMode::set : EqualityMode::scheme;
            MainTheoremReport r =
                check_main_theorem(static_cast<int>(leaves), g, sources, mode, limits);
            doc = detail::verdict_doc("main",
                                      {{"group", g.text()},
                                       {"leaves", leaves},
                                       {"mode", mode_text},
                                       {"sources", detail::tree_texts(sources)}},
                                      r.verified);
            if (r.witness) doc["witness"] = to_json(*r.witness);
            exit_code = r.verified ? 0 : 1;
        } else if (exactseq_cmd->parsed()) {
            ExactSequenceReport r = check_exact_sequence(static_cast<int>(leaves));
            doc = detail::verdict_doc("exactseq", {{"leaves", leaves}}, r.exact);
            doc["indices"] = {{"image_index", detail::index_to_json(r.image_index)}};
            exit_code = r.exact ? 0 : 1;
        } else if (kii_cmd->parsed()) {
            Tree t = Tree::parse(tree_text);
            bool ok = check_kernel_in_image(t, limits);
            doc = detail::verdict_doc("kernel-in-image", {{"tree", t.text()}}, ok);
            exit_code = ok ? 0 : 1;
        } else if (index_cmd->parsed()) {
            Tree t = Tree::parse(tree_text);
            IndexEqualityReport r = check_index_equality(t, limits);
            doc = detail::verdict_doc("index", {{"tree", t.text()}}, r.equal);
            doc["indices"] = {{"edge_level", detail::index_to_json(r.edge_level)},
                              {"socket_level", detail::index_to_json(r.socket_level)}};
            exit_code = r.equal ? 0 : 1;
        } else if (inclusion_cmd->parsed()) {
            Tree coarse = Tree::parse(coarse_text);
            Tree fine = Tree::parse(fine_text);
            AbelianGroup g = AbelianGroup::parse(group_text);
            bool ok = check_inclusion(coarse, fine, g, limits);
            doc = detail::verdict_doc(
                "inclusion",
                {{"coarse", coarse.text()}, {"fine", fine.text()}, {"group", g.text()}}, ok);
            exit_code = ok ? 0 : 1;
        } else if (generation_cmd->parsed()) {
            Tree target = Tree::parse(target_text);
            AbelianGroup g = AbelianGroup::parse(group_text);
            std::vector<Tree> sources = detail::parse_trees(source_texts);
            GenerationReport r =
                check_generation(target, g, sources, move_degree, test_degree, limits);
            doc = detail::verdict_doc("generation",
                                      {{"group", g.text()},
                                       {"move_degree", move_degree},
                                       {"sources", detail::tree_texts(sources)},
                                       {"target", target.text()},
                                       {"test_degree", test_degree}},
                                      r.generated);
            if (r.witness) doc["witness"] = to_json(*r.witness);
            exit_code = r.generated ? 0 : 1;
        } else if (faces_cmd->parsed()) {
            Tree t = Tree::parse(tree_text);
            AbelianGroup g = AbelianGroup::parse(group_text);
            detail::FacesOutcome outcome = detail::faces_sweep(t, g, limits);
            doc = detail::verdict_doc("faces", {{"group", g.text()}, {"tree", t.text()}},
                                      outcome.ok);
            if (!outcome.ok) doc["witness"] = std::move(outcome.witness);
            exit_code = outcome.ok ? 0 : 1;
        } else if (orbit_cmd->parsed()) {
            AbelianGroup g = AbelianGroup::parse(group_text);
            std::vector<Tree> trees = detail::parse_trees(tree_texts);
            OrbitSpec spec{detail::parse_index_list(support_text, "--support")};
            OrbitReport r = orbit_component_count(spec, g, trees, limits);
            nlohmann::json inputs = {{"group", g.text()},
                                     {"support", spec.support},
                                     {"trees", detail::tree_texts(trees)}};
            if (r.empty) {
                doc = detail::verdict_doc("orbit", std::move(inputs), "EMPTY");
            } else {
                doc = detail::verdict_doc("orbit", std::move(inputs), r.component_count == 1);
                doc["indices"] = {{"component_count", to_json(r.component_count)}};
                exit_code = r.component_count == 1 ? 0 : 1;
            }
        }
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    }

    if (!no_timing && doc.contains("check")) {
        auto elapsed = std::chrono::steady_clock::now() - started;
        doc["elapsed_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    }

    std::ofstream file;
    if (!output_path.empty()) {
        file.open(output_path);
        if (!file) {
            err << "error: cannot open '" << output_path << "' for writing\n";
            return 2;
        }
    }
    std::ostream& sink = output_path.empty() ? out : file;
    if (format == "text")
        detail::render_text(sink, doc);
    else
        sink << doc.dump(2) << "\n";
    return exit_code;
}

}  // namespace phylotoric::cli
