#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phylotoric/abelian_group.hpp"
#include "phylotoric/int_matrix.hpp"
#include "phylotoric/lattice.hpp"
#include "phylotoric/tree.hpp"

namespace phylotoric {

// Guard against accidentally huge socket spaces; |G|^(l-1) grows fast, and
// the multiset counts walked by fiber enumeration grow faster still.
struct Limits {
    std::int64_t max_sockets = 1024;
    std::int64_t max_fiber_multisets = 1 << 20;
};

class resource_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Group element per leaf index, summing to the neutral element.
struct Socket {
    std::vector<GroupElement> at;

    friend bool operator==(const Socket&, const Socket&) = default;
    friend auto operator<=>(const Socket&, const Socket&) = default;
};

// Group element per canonical edge index; around every inner vertex the
// element on the parent edge equals the sum over the child edges, and the
// root's child edges sum to the neutral element.
struct Network {
    std::vector<GroupElement> at;

    friend bool operator==(const Network&, const Network&) = default;
    friend auto operator<=>(const Network&, const Network&) = default;
};

inline Integer socket_count(const AbelianGroup& g, int leaf_count) {
    Integer n = 1;
    for (int i = 0; i + 1 < leaf_count; ++i) n *= g.order();
    return n;
}

inline bool is_socket(const AbelianGroup& g, const Socket& s) {
    if (s.at.size() < 2) return false;
    GroupElement sum = g.neutral();
    for (const GroupElement& e : s.at) {
        if (!g.valid(e)) return false;
        sum = g.combine(sum, e);
    }
    return sum == g.neutral();
}

// Rank in the enumeration order: lexicographic over the first l-1 entries
// (the last entry carries no information).
inline std::int64_t socket_index(const AbelianGroup& g, const Socket& s) {
    if (!is_socket(g, s)) throw std::domain_error("socket_index: not a socket");
    std::int64_t idx = 0;
    for (std::size_t i = 0; i + 1 < s.at.size(); ++i)
        idx = idx * g.order() + g.index_of(s.at[i]);
    return idx;
}

// All |G|^(l-1) sockets, first socket all-neutral, order lexicographic over
// the first l-1 leaf assignments.
inline std::vector<Socket> enumerate_sockets(const AbelianGroup& g, int leaf_count) {
    if (leaf_count < 2) throw std::domain_error("enumerate_sockets: need at least 2 leaves");
    Integer total = socket_count(g, leaf_count);
    if (total > Integer(std::numeric_limits<std::int64_t>::max()))
        throw std::overflow_error("enumerate_sockets: socket count exceeds 2^63");
    std::int64_t n = static_cast<std::int64_t>(total);
    std::vector<Socket> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t idx = 0; idx < n; ++idx) {
        Socket s;
        s.at.assign(leaf_count, g.neutral());
        std::int64_t rest = idx;
        GroupElement sum = g.neutral();
        for (int i = leaf_count - 2; i >= 0; --i) {
            s.at[i] = g.element_at(rest % g.order());
            rest /= g.order();
            sum = g.combine(sum, s.at[i]);
        }
        s.at[leaf_count - 1] = g.negate(sum);
        out.push_back(std::move(s));
    }
    return out;
}

inline bool is_network(const Tree& t, const AbelianGroup& g, const Network& n) {
    if (static_cast<int>(n.at.size()) != t.edge_count()) return false;
    for (const GroupElement& e : n.at)
        if (!g.valid(e)) return false;
    for (int v = 0; v < t.vertex_count(); ++v) {
        if (t.is_leaf_vertex(v)) continue;
        GroupElement sum = g.neutral();
        for (int c : t.children(v)) sum = g.combine(sum, n.at[t.parent_edge(c)]);
        GroupElement incoming = v == 0 ? g.neutral() : n.at[t.parent_edge(v)];
        if (sum != incoming) return false;
    }
    return true;
}

// Restriction to pendant edges, in leaf-index order.
inline Socket socket_of_network(const Tree& t, const AbelianGroup& g, const Network& n) {
    if (!is_network(t, g, n)) throw std::domain_error("socket_of_network: not a network");
    Socket s;
    s.at.assign(t.leaf_count(), g.neutral());
    for (int e = 0; e < t.edge_count(); ++e)
        if (t.pendant(e)) s.at[t.pendant_leaf_index(e)] = n.at[e];
    return s;
}

// The unique network restricting to the socket: the element on each edge is
// the socket sum over the leaves below it, accumulated bottom-up.
inline Network network_of_socket(const Tree& t, const AbelianGroup& g, const Socket& s) {
    if (static_cast<int>(s.at.size()) != t.leaf_count())
        throw std::domain_error("network_of_socket: socket length does not match leaf count");
    if (!is_socket(g, s)) throw std::domain_error("network_of_socket: not a socket");
    Network n;
    n.at.assign(t.edge_count(), g.neutral());
    std::vector<GroupElement> below(t.vertex_count(), g.neutral());
    for (int v = t.vertex_count() - 1; v >= 1; --v) {
        if (t.is_leaf_vertex(v)) below[v] = s.at[t.leaf_index_of_vertex(v)];
        int p = t.edge_parent(t.parent_edge(v));
        below[p] = g.combine(below[p], below[v]);
        n.at[t.parent_edge(v)] = below[v];
    }
    return n;
}

// One (socket, network) pair per socket, in socket enumeration order.
inline std::vector<std::pair<Socket, Network>> socket_network_bijection(const Tree& t,
                                                                        const AbelianGroup& g) {
    std::vector<std::pair<Socket, Network>> out;
    for (Socket& s : enumerate_sockets(g, t.leaf_count())) {
        Network n = network_of_socket(t, g, s);
        out.emplace_back(std::move(s), std::move(n));
    }
    return out;
}

// 0/1 vector in edge-major, element-minor coordinates: 1 exactly at (e, n(e)).
inline std::vector<Integer> vertex_of_network(const Tree& t, const AbelianGroup& g,
                                              const Network& n) {
    if (!is_network(t, g, n)) throw std::domain_error("vertex_of_network: not a network");
    std::vector<Integer> v(static_cast<std::size_t>(t.edge_count()) * g.order());
    for (int e = 0; e < t.edge_count(); ++e)
        v[static_cast<std::size_t>(e) * g.order() + g.index_of(n.at[e])] = 1;
    return v;
}

/**
 * The lattice polytope of a model: one 0/1 vertex row per network, rows in
 * socket enumeration order.  Carries the row-span sublattice and its degree-0
 * part (differences against the first vertex; every vertex has degree one in
 * each edge block, so the differences span exactly the degree-0 members of
 * the row span).
 */
class ModelPolytope {
public:
    ModelPolytope(Tree tree, AbelianGroup group, IntMatrix vertex_rows)
        : tree_(std::move(tree)),
          group_(std::move(group)),
          vertices_(std::move(vertex_rows)),
          vertex_span_(vertices_),
          degree_zero_span_(difference_rows(vertices_)) {}

    const Tree& tree() const { return tree_; }
    const AbelianGroup& group() const { return group_; }
    const IntMatrix& vertices() const { return vertices_; }
    const Sublattice& vertex_span() const { return vertex_span_; }
    const Sublattice& degree_zero_span() const { return degree_zero_span_; }

private:
    static IntMatrix difference_rows(const IntMatrix& v) {
        IntMatrix d(v.rows() == 0 ? 0 : v.rows() - 1, v.cols());
        for (std::size_t i = 1; i < v.rows(); ++i)
            for (std::size_t j = 0; j < v.cols(); ++j) d(i - 1, j) = v(i, j) - v(0, j);
        return d;
    }

    Tree tree_;
    AbelianGroup group_;
    IntMatrix vertices_;
    Sublattice vertex_span_;
    Sublattice degree_zero_span_;
};

inline ModelPolytope build_polytope(const Tree& t, const AbelianGroup& g,
                                    const Limits& limits = {}) {
    Integer total = socket_count(g, t.leaf_count());
    if (total > Integer(limits.max_sockets))
        throw resource_limit_error("build_polytope: " + total.str() +
                                   " sockets exceed the limit of " +
                                   std::to_string(limits.max_sockets));
    IntMatrix rows(0, static_cast<std::size_t>(t.edge_count()) * g.order());
    for (const auto& [s, n] : socket_network_bijection(t, g))
        rows.append_row(vertex_of_network(t, g, n));
    return ModelPolytope(t, g, std::move(rows));
}

// The degree functions as a matrix: column e sums the coordinates of edge
// block e, so the left kernel is the all-degrees-zero sublattice of M_E.
inline IntMatrix degree_matrix(const Tree& t, const AbelianGroup& g) {
    IntMatrix d(static_cast<std::size_t>(t.edge_count()) * g.order(), t.edge_count());
    for (int e = 0; e < t.edge_count(); ++e)
        for (std::int64_t i = 0; i < g.order(); ++i)
            d(static_cast<std::size_t>(e) * g.order() + i, e) = 1;
    return d;
}

// Basis map of M_S^{G1} -> M_S^{G2} induced by composing sockets with a group
// morphism: the basis vector of socket s goes to the basis vector of m∘s.
inline IntMatrix socket_pushforward_matrix(const GroupMorphism& m, int leaf_count) {
    const AbelianGroup& g1 = m.domain();
    const AbelianGroup& g2 = m.codomain();
    Integer r = socket_count(g1, leaf_count), c = socket_count(g2, leaf_count);
    if (r > Integer(1) << 20 || c > Integer(1) << 20)
        throw resource_limit_error("socket_pushforward_matrix: socket space too large");
    IntMatrix out(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    for (const Socket& s : enumerate_sockets(g1, leaf_count)) {
        Socket image;
        image.at.reserve(s.at.size());
        for (const GroupElement& e : s.at) image.at.push_back(m.apply(e));
        out(socket_index(g1, s), socket_index(g2, image)) = 1;
    }
    return out;
}

// Basis map of M_E^{G1} -> M_E^{G2} sending h_{(e,g)} to h_{(e,m(g))}.
inline IntMatrix edge_pushforward_matrix(const GroupMorphism& m, int edge_count) {
    const AbelianGroup& g1 = m.domain();
    const AbelianGroup& g2 = m.codomain();
    IntMatrix out(static_cast<std::size_t>(edge_count) * g1.order(),
                  static_cast<std::size_t>(edge_count) * g2.order());
    for (int e = 0; e < edge_count; ++e)
        for (std::int64_t i = 0; i < g1.order(); ++i)
            out(static_cast<std::size_t>(e) * g1.order() + i,
                static_cast<std::size_t>(e) * g2.order() +
                    g2.index_of(m.apply(g1.element_at(i)))) = 1;
    return out;
}

/**
 * Coordinate-forgetting projection M_E^{T2} -> M_E^{T1} for a contraction T1
 * of T2.  Edges of T1 are identified with edges of T2 carrying the same set
 * of leaves below; coordinates of the remaining edges are dropped.  The
 * projection is checked to map the vertex vector of every socket's network on
 * T2 to the vertex vector of the same socket's network on T1.
 */
inline IntMatrix edge_projection_matrix(const Tree& t1, const Tree& t2, const AbelianGroup& g) {
    if (!leq(t1, t2))
        throw std::domain_error(
            "edge_projection_matrix: first tree is not a contraction of the second");
    std::vector<int> image(t1.edge_count(), -1);
    for (int e1 = 0; e1 < t1.edge_count(); ++e1)
        for (int e2 = 0; e2 < t2.edge_count(); ++e2)
            if (t2.below_mask(e2) == t1.below_mask(e1)) image[e1] = e2;
    IntMatrix pi(static_cast<std::size_t>(t2.edge_count()) * g.order(),
                 static_cast<std::size_t>(t1.edge_count()) * g.order());
    for (int e1 = 0; e1 < t1.edge_count(); ++e1) {
        if (image[e1] < 0)
            throw std::logic_error("edge_projection_matrix: missing edge image");
        for (std::int64_t i = 0; i < g.order(); ++i)
            pi(static_cast<std::size_t>(image[e1]) * g.order() + i,
               static_cast<std::size_t>(e1) * g.order() + i) = 1;
    }
    // Networks of one socket agree edge-wise across the identification, which
    // makes the projection carry vertices onto vertices in socket order.
    for (const auto& [s, n2] : socket_network_bijection(t2, g)) {
        Network n1 = network_of_socket(t1, g, s);
        for (int e1 = 0; e1 < t1.edge_count(); ++e1)
            if (n1.at[e1] != n2.at[image[e1]])
                throw std::logic_error("edge_projection_matrix: vertex images disagree");
    }
    return pi;
}

// The monomial parametrization: the socket-s coordinate is the product over
// edges of the parameter at (e, n(e)), n the network of s.  Exact rationals;
// zero parameters are allowed.
inline std::vector<Rational> evaluate_psi(const Tree& t, const AbelianGroup& g,
                                          const std::vector<std::vector<Rational>>& params) {
    if (static_cast<int>(params.size()) != t.edge_count())
        throw std::domain_error("evaluate_psi: need one parameter row per edge");
    for (const auto& row : params)
        if (static_cast<std::int64_t>(row.size()) != g.order())
            throw std::domain_error("evaluate_psi: need one parameter per group element");
    std::vector<Rational> out;
    for (const auto& [s, n] : socket_network_bijection(t, g)) {
        Rational coord = 1;
        for (int e = 0; e < t.edge_count(); ++e)
            coord *= params[e][static_cast<std::size_t>(g.index_of(n.at[e]))];
        out.push_back(coord);
    }
    return out;
}

}  // namespace phylotoric
