#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "phylotoric/abelian_group.hpp"
#include "phylotoric/int_matrix.hpp"
#include "phylotoric/integers.hpp"
#include "phylotoric/lattice.hpp"
#include "phylotoric/model.hpp"
#include "phylotoric/verify.hpp"

// JSON forms of the library's value types.  nlohmann's default object keeps
// keys sorted, so a document serialized twice from equal data is
// byte-identical — the CLI's determinism contract rests on that.

namespace phylotoric {

// Exact integers stay exact: a JSON number while the value fits 64 bits, a
// decimal string beyond that.
inline nlohmann::json to_json(const Integer& v) {
    static const Integer lo = Integer(std::numeric_limits<std::int64_t>::min());
    static const Integer hi = Integer(std::numeric_limits<std::int64_t>::max());
    if (v >= lo && v <= hi) return nlohmann::json(static_cast<std::int64_t>(v));
    return nlohmann::json(v.str());
}

inline nlohmann::json to_json(const std::vector<Integer>& row) {
    nlohmann::json out = nlohmann::json::array();
    for (const Integer& v : row) out.push_back(to_json(v));
    return out;
}

inline nlohmann::json to_json(const IntMatrix& m) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

inline nlohmann::json to_json(const Sublattice& l) {
    return {{"ambient", l.ambient()}, {"basis", to_json(l.basis())}};
}

// A network is an array over edges (canonical edge order) of residue tuples.
inline nlohmann::json to_json(const Network& n) {
    nlohmann::json out = nlohmann::json::array();
    for (const GroupElement& e : n.at) out.push_back(e.residues);
    return out;
}

inline nlohmann::json to_json(const std::vector<Network>& ns) {
    nlohmann::json out = nlohmann::json::array();
    for (const Network& n : ns) out.push_back(to_json(n));
    return out;
}

inline nlohmann::json to_json(const ModelPolytope& p) {
    return {{"group", p.group().text()},
            {"tree", p.tree().text()},
            {"vertices", to_json(p.vertices())}};
}

inline nlohmann::json to_json(const KernelReport& r) {
    return {{"group", r.group.text()},
            {"kernel", to_json(r.kernel)},
            {"rank", r.rank},
            {"saturation_index", to_json(r.saturation_index)},
            {"tree", r.tree.text()}};
}

inline nlohmann::json to_json(const DimensionReport& r) {
    nlohmann::json out = {{"affine_rank", r.affine_rank},
                          {"consistent", r.consistent},
                          {"edge_count", r.edge_count},
                          {"projective_rank", r.projective_rank}};
    if (r.expected_affine) out["expected_affine"] = *r.expected_affine;
    if (r.expected_projective) out["expected_projective"] = *r.expected_projective;
    return out;
}

inline nlohmann::json to_json(const GenerationWitness& w) {
    nlohmann::json members = nlohmann::json::array();
    for (const std::vector<Network>& m : w.members) members.push_back(to_json(m));
    return {{"component", w.component},
            {"degree", w.degree},
            {"members", std::move(members)},
            {"target", to_json(w.target)}};
}

}  // namespace phylotoric
