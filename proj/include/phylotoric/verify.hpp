#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phylotoric/abelian_group.hpp"
#include "phylotoric/int_matrix.hpp"
#include "phylotoric/lattice.hpp"
#include "phylotoric/model.hpp"
#include "phylotoric/rational_lp.hpp"
#include "phylotoric/tree.hpp"

namespace phylotoric {

namespace detail {

// Socket-space guard for operations that enumerate networks without going
// through build_polytope.
inline void require_socket_budget(const AbelianGroup& g, int leaf_count, const Limits& limits) {
    Integer count = socket_count(g, leaf_count);
    if (count > limits.max_sockets)
        throw resource_limit_error("socket space of size " + count.str() +
                                   " exceeds the limit of " +
                                   std::to_string(limits.max_sockets));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Kernel lattices of vertex matrices.

struct KernelReport {
    Tree tree;
    AbelianGroup group;
    Sublattice kernel;  // relations among vertex rows, ambient = #sockets
    std::int64_t rank;
    Integer saturation_index;
};

inline KernelReport kernel_lattice(const Tree& t, const AbelianGroup& g,
                                   const Limits& limits = {}) {
    ModelPolytope p = build_polytope(t, g, limits);
    Sublattice k = kernel_of(p.vertices());
    Sublattice sat = saturate(k);
    Integer index = *index_in(k, sat);
    std::int64_t rank = static_cast<std::int64_t>(k.rank());
    return KernelReport{t, g, std::move(k), rank, std::move(index)};
}

// A coarser tree inherits every relation of a finer one.
inline bool check_inclusion(const Tree& t1, const Tree& t2, const AbelianGroup& g,
                            const Limits& limits = {}) {
    if (!leq(t1, t2))
        throw std::domain_error("check_inclusion: first tree is not a contraction of the second");
    Sublattice coarse = kernel_lattice(t1, g, limits).kernel;
    Sublattice fine = kernel_lattice(t2, g, limits).kernel;
    return contains(coarse, fine);
}

// ---------------------------------------------------------------------------
// Claw kernels as sums of refined-tree kernels.

enum class EqualityMode { set, scheme };

struct MainTheoremReport {
    bool verified;
    EqualityMode mode;
    Sublattice claw_kernel;
    Sublattice source_sum;
    // A claw relation missing from the source sum, present exactly on failure.
    std::optional<std::vector<Integer>> witness;
};

inline MainTheoremReport check_main_theorem(int leaf_count, const AbelianGroup& g,
                                            const std::vector<Tree>& sources, EqualityMode mode,
                                            const Limits& limits = {}) {
    if (sources.empty()) throw std::domain_error("check_main_theorem: no source trees");
    Tree claw = Tree::claw(leaf_count);
    for (const Tree& s : sources) {
        if (s.leaf_count() != leaf_count)
            throw std::domain_error("check_main_theorem: source leaf count mismatch");
        if (!leq(claw, s))
            throw std::domain_error("check_main_theorem: source does not share the claw's leaves");
    }

    Sublattice claw_kernel = kernel_lattice(claw, g, limits).kernel;
    std::vector<Sublattice> kernels;
    for (const Tree& s : sources) kernels.push_back(kernel_lattice(s, g, limits).kernel);
    Sublattice sum = lattice_sum(kernels);

    Sublattice goal = mode == EqualityMode::set ? saturate(claw_kernel) : claw_kernel;
    Sublattice reach = mode == EqualityMode::set ? saturate(sum) : sum;
    std::optional<std::vector<Integer>> witness;
    if (goal != reach) {
        for (std::size_t i = 0; i < goal.basis().rows(); ++i)
            if (!contains(reach, goal.basis().row(i))) {
                witness = goal.basis().row(i);
                break;
            }
    }
    return MainTheoremReport{!witness.has_value(), mode, std::move(claw_kernel), std::move(sum),
                             std::move(witness)};
}

// ---------------------------------------------------------------------------
// The three index-two projections of the four-element exponent-2 group, at
// the level of socket lattices: f stacks their degree-zero pushforwards.

namespace detail {

// Difference rows spanning the image of f inside Z^(3m), m = 2^(l-1).
inline Sublattice kimura_socket_image(int leaf_count) {
    AbelianGroup four = AbelianGroup::parse("2,2");
    AbelianGroup two = AbelianGroup::parse("2");
    auto projections = kimura_projections();
    auto source_sockets = enumerate_sockets(four, leaf_count);
    std::size_t m = static_cast<std::size_t>(socket_count(two, leaf_count).convert_to<std::int64_t>());

    IntMatrix rows(source_sockets.size(), 3 * m);
    for (std::size_t i = 0; i < source_sockets.size(); ++i)
        for (std::size_t t = 0; t < 3; ++t) {
            Socket image;
            for (const GroupElement& x : source_sockets[i].at)
                image.at.push_back(projections[t].apply(x));
            rows(i, t * m + static_cast<std::size_t>(socket_index(two, image))) += 1;
            rows(i, t * m) -= 1;
        }
    return hnf(rows);
}

// Triples of degree-zero socket vectors: each block of m coordinates sums to 0.
inline Sublattice socket_degree_zero_cubed(std::size_t m) {
    IntMatrix d(3 * m, 3);
    for (std::size_t t = 0; t < 3; ++t)
        for (std::size_t s = 0; s < m; ++s) d(t * m + s, t) = 1;
    return kernel_of(d);
}

// Integer vectors whose mod-2 pushforward along "socket -> its leaf tuple"
// vanishes, intersected with the degree-zero triples.
inline Sublattice kimura_xor_kernel(int leaf_count, const Sublattice& degree_zero) {
    AbelianGroup two = AbelianGroup::parse("2");
    auto sockets = enumerate_sockets(two, leaf_count);
    std::size_t m = sockets.size();
    std::size_t l = static_cast<std::size_t>(leaf_count);

    IntMatrix stacked(3 * m + l, l);
    for (std::size_t t = 0; t < 3; ++t)
        for (std::size_t s = 0; s < m; ++s)
            for (std::size_t j = 0; j < l; ++j)
                stacked(t * m + s, j) = sockets[s].at[j].residues[0];
    for (std::size_t j = 0; j < l; ++j) stacked(3 * m + j, j) = 2;

    Sublattice parity = kernel_of(stacked);
    const IntMatrix& lifted = parity.basis();
    IntMatrix projected(lifted.rows(), 3 * m);
    for (std::size_t i = 0; i < lifted.rows(); ++i)
        for (std::size_t j = 0; j < 3 * m; ++j) projected(i, j) = lifted(i, j);
    return intersect(hnf(projected), degree_zero);
}

}  // namespace detail

struct ExactSequenceReport {
    bool complex;  // image contained in the kernel
    bool exact;    // image equal to the kernel
    std::optional<Integer> image_index;  // of the image in the degree-zero triples
};

inline ExactSequenceReport check_exact_sequence(int leaf_count) {
    if (leaf_count < 3 || leaf_count > 6)
        throw std::domain_error("check_exact_sequence: leaf count outside [3,6]");
    std::size_t m = std::size_t{1} << (leaf_count - 1);
    Sublattice image = detail::kimura_socket_image(leaf_count);
    Sublattice degree_zero = detail::socket_degree_zero_cubed(m);
    Sublattice kernel = detail::kimura_xor_kernel(leaf_count, degree_zero);
    return ExactSequenceReport{contains(kernel, image), image == kernel,
                               index_in(image, degree_zero)};
}

// Every relation of the binary model on T, copied into each of the three
// blocks, lies in the image of f.
inline bool check_kernel_in_image(const Tree& t, const Limits& limits = {}) {
    if (t.leaf_count() > 6)
        throw std::domain_error("check_kernel_in_image: more than 6 leaves");
    AbelianGroup two = AbelianGroup::parse("2");
    ModelPolytope p = build_polytope(t, two, limits);
    Sublattice kernel = kernel_of(p.vertices());
    const IntMatrix& basis = kernel.basis();
    std::size_t m = p.vertices().rows();

    IntMatrix embedded(3 * basis.rows(), 3 * m);
    for (std::size_t t3 = 0; t3 < 3; ++t3)
        for (std::size_t i = 0; i < basis.rows(); ++i)
            for (std::size_t j = 0; j < m; ++j)
                embedded(t3 * basis.rows() + i, t3 * m + j) = basis(i, j);
    return contains(detail::kimura_socket_image(t.leaf_count()), hnf(embedded));
}

struct IndexEqualityReport {
    std::optional<Integer> socket_level;  // image of f in the degree-zero triples
    std::optional<Integer> edge_level;    // pushed-forward model in the binary triple
    bool equal;
};

inline IndexEqualityReport check_index_equality(const Tree& t, const Limits& limits = {}) {
    if (t.leaf_count() > 5)
        throw std::domain_error("check_index_equality: more than 5 leaves");
    int l = t.leaf_count();
    std::size_t m = std::size_t{1} << (l - 1);
    std::optional<Integer> socket_level =
        index_in(detail::kimura_socket_image(l), detail::socket_degree_zero_cubed(m));

    AbelianGroup four = AbelianGroup::parse("2,2");
    AbelianGroup two = AbelianGroup::parse("2");
    auto projections = kimura_projections();
    std::size_t e_count = static_cast<std::size_t>(t.edge_count());

    // (e,g) -> sum over the three blocks of (e, f_t(g)), edge-major layout.
    IntMatrix push(4 * e_count, 6 * e_count);
    for (std::size_t e = 0; e < e_count; ++e)
        for (std::int64_t gi = 0; gi < four.order(); ++gi) {
            GroupElement g = four.element_at(gi);
            for (std::size_t t3 = 0; t3 < 3; ++t3) {
                std::size_t col = t3 * 2 * e_count + e * 2 +
                                  static_cast<std::size_t>(two.index_of(projections[t3].apply(g)));
                push(e * 4 + static_cast<std::size_t>(gi), col) += 1;
            }
        }

    ModelPolytope kimura = build_polytope(t, four, limits);
    const IntMatrix& vertices = kimura.vertices();
    IntMatrix differences(vertices.rows(), vertices.cols());
    for (std::size_t i = 0; i < vertices.rows(); ++i)
        for (std::size_t j = 0; j < vertices.cols(); ++j)
            differences(i, j) = vertices(i, j) - vertices(0, j);
    Sublattice pushed = hnf(differences * push);

    ModelPolytope pair_model = build_polytope(t, two, limits);
    const IntMatrix& binary = pair_model.degree_zero_span().basis();
    IntMatrix triple(3 * binary.rows(), 6 * e_count);
    for (std::size_t t3 = 0; t3 < 3; ++t3)
        for (std::size_t i = 0; i < binary.rows(); ++i)
            for (std::size_t j = 0; j < binary.cols(); ++j)
                triple(t3 * binary.rows() + i, t3 * 2 * e_count + j) = binary(i, j);
    std::optional<Integer> edge_level = index_in(pushed, hnf(triple));

    bool equal = socket_level.has_value() && edge_level.has_value() &&
                 *socket_level == *edge_level;
    return IndexEqualityReport{std::move(socket_level), std::move(edge_level), equal};
}

// ---------------------------------------------------------------------------
// Rank bookkeeping.

struct DimensionReport {
    std::int64_t edge_count;
    std::int64_t affine_rank;
    std::int64_t projective_rank;
    std::optional<std::int64_t> expected_affine;
    std::optional<std::int64_t> expected_projective;
    bool consistent;  // matches the expectations, where known
};

inline DimensionReport dimension_report(const Tree& t, const AbelianGroup& g,
                                        const Limits& limits = {}) {
    ModelPolytope p = build_polytope(t, g, limits);
    DimensionReport r{t.edge_count(), static_cast<std::int64_t>(p.vertex_span().rank()),
                      static_cast<std::int64_t>(p.degree_zero_span().rank()), std::nullopt,
                      std::nullopt, true};
    if (g.orders() == std::vector<int>{2, 2}) {
        r.expected_affine = 3 * r.edge_count + 1;
        r.expected_projective = 3 * r.edge_count;
    } else if (g.orders() == std::vector<int>{2}) {
        r.expected_affine = r.edge_count + 1;
        r.expected_projective = r.edge_count;
    }
    r.consistent = (!r.expected_affine || r.affine_rank == *r.expected_affine) &&
                   (!r.expected_projective || r.projective_rank == *r.expected_projective);
    return r;
}

// Generic fiber size of the dense-torus parametrization: the index of the
// vertex-difference lattice in its saturation.
inline Integer fiber_cardinality(const Tree& t, const AbelianGroup& g,
                                 const Limits& limits = {}) {
    ModelPolytope p = build_polytope(t, g, limits);
    const Sublattice& span = p.degree_zero_span();
    return *index_in(span, saturate(span));
}

// ---------------------------------------------------------------------------
// Fibers of the monomial map and binomial generation.

struct FiberSpec {
    Tree tree;
    AbelianGroup group;
    std::int64_t degree;
    std::vector<Integer> target;  // edge-major, element-minor; deg_e = degree
};

namespace detail {

inline Integer multiset_count(std::size_t items, std::int64_t degree) {
    Integer count = 1;
    for (std::int64_t i = 1; i <= degree; ++i) {
        count *= Integer(static_cast<std::int64_t>(items) + degree - i);
        count /= i;
    }
    return count;
}

inline void require_multiset_budget(std::size_t items, std::int64_t degree,
                                    const Limits& limits) {
    Integer count = multiset_count(items, degree);
    if (count > limits.max_fiber_multisets)
        throw resource_limit_error("fiber enumeration over " + count.str() +
                                   " multisets exceeds the limit of " +
                                   std::to_string(limits.max_fiber_multisets));
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

inline std::vector<std::vector<Network>> enumerate_fiber(const FiberSpec& spec,
                                                         const Limits& limits = {}) {
    if (spec.degree < 1) throw std::domain_error("enumerate_fiber: degree must be positive");
    const Tree& t = spec.tree;
    const AbelianGroup& g = spec.group;
    std::size_t width = static_cast<std::size_t>(t.edge_count()) *
                        static_cast<std::size_t>(g.order());
    if (spec.target.size() != width)
        throw std::domain_error("enumerate_fiber: target vector has wrong length");
    for (int e = 0; e < t.edge_count(); ++e) {
        Integer block = 0;
        for (std::int64_t i = 0; i < g.order(); ++i)
            block += spec.target[static_cast<std::size_t>(e) * g.order() + i];
        if (block != spec.degree)
            throw std::domain_error("enumerate_fiber: target degree mismatch on an edge block");
    }

    detail::require_socket_budget(g, t.leaf_count(), limits);
    auto pairs = socket_network_bijection(t, g);
    detail::require_multiset_budget(pairs.size(), spec.degree, limits);
    std::vector<std::vector<Integer>> rows;
    std::vector<Network> networks;
    for (auto& pair : pairs) {
        rows.push_back(vertex_of_network(t, g, pair.second));
        networks.push_back(std::move(pair.second));
    }

    std::vector<std::vector<Network>> fiber;
    std::vector<Integer> residual = spec.target;
    std::vector<std::size_t> chosen;
    auto walk = [&](auto&& self, std::size_t from, std::int64_t remaining) -> void {
        if (remaining == 0) {
            bool settled = std::all_of(residual.begin(), residual.end(),
                                       [](const Integer& x) { return x == 0; });
            if (!settled) return;
            std::vector<Network> member;
            for (std::size_t i : chosen) member.push_back(networks[i]);
            fiber.push_back(std::move(member));
            return;
        }
        for (std::size_t i = from; i < networks.size(); ++i) {
            bool fits = true;
            for (std::size_t j = 0; j < width && fits; ++j)
                if (rows[i][j] > residual[j]) fits = false;
            if (!fits) continue;
            for (std::size_t j = 0; j < width; ++j) residual[j] -= rows[i][j];
            chosen.push_back(i);
            self(self, i, remaining - 1);
            chosen.pop_back();
            for (std::size_t j = 0; j < width; ++j) residual[j] += rows[i][j];
        }
    };
    walk(walk, 0, spec.degree);
    return fiber;
}

// A binomial relation valid on at least one source tree, shipped as the two
// equal-image multisets of target-tree networks.
struct Move {
    std::vector<Network> positive;
    std::vector<Network> negative;
    std::string source;  // text of the tree whose model carries the relation
};

namespace detail {

// Index multisets are kept sorted; moves and fibers all walk them that way.
inline std::vector<std::vector<int>> multisets_of_degree(int items, std::int64_t degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    auto walk = [&](auto&& self, int from, std::int64_t remaining) -> void {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (int i = from; i < items; ++i) {
            current.push_back(i);
            self(self, i, remaining - 1);
            current.pop_back();
        }
    };
    walk(walk, 0, degree);
    return out;
}

inline std::vector<Integer> row_sum(const IntMatrix& rows, const std::vector<int>& multiset) {
    std::vector<Integer> sum(rows.cols());
    for (int i : multiset)
        for (std::size_t j = 0; j < rows.cols(); ++j)
            sum[j] += rows(static_cast<std::size_t>(i), j);
    return sum;
}

inline bool sub_multiset(const std::vector<int>& part, const std::vector<int>& whole) {
    std::size_t w = 0;
    for (int x : part) {
        while (w < whole.size() && whole[w] < x) ++w;
        if (w == whole.size() || whole[w] != x) return false;
        ++w;
    }
    return true;
}

inline std::vector<int> replace_part(const std::vector<int>& whole, const std::vector<int>& out,
                                     const std::vector<int>& in) {
    std::vector<int> rest;
    std::size_t o = 0;
    for (int x : whole) {
        if (o < out.size() && out[o] == x) {
            ++o;
            continue;
        }
        rest.push_back(x);
    }
    rest.insert(rest.end(), in.begin(), in.end());
    std::sort(rest.begin(), rest.end());
    return rest;
}

}  // namespace detail

// All spanning binomial moves of degree up to move_degree whose two sides
// have equal images on some source tree.  Source relations project to target
// relations, so every move preserves target fibers.
inline std::vector<Move> build_moves(const Tree& target, const AbelianGroup& g,
                                     const std::vector<Tree>& sources, std::int64_t move_degree,
                                     const Limits& limits = {}) {
    if (sources.empty()) throw std::domain_error("build_moves: no source trees");
    for (const Tree& s : sources)
        if (!leq(target, s))
            throw std::domain_error("build_moves: target is not a contraction of every source");

    detail::require_socket_budget(g, target.leaf_count(), limits);
    auto pairs = socket_network_bijection(target, g);
    std::vector<Network> networks;
    for (auto& pair : pairs) networks.push_back(std::move(pair.second));
    int count = static_cast<int>(networks.size());

    std::vector<Move> moves;
    for (const Tree& source : sources) {
        ModelPolytope source_model = build_polytope(source, g, limits);
        const IntMatrix& rows = source_model.vertices();
        for (std::int64_t d = 2; d <= move_degree; ++d) {
            detail::require_multiset_budget(networks.size(), d, limits);
            std::map<std::vector<Integer>, std::vector<int>> groups;
            auto multisets = detail::multisets_of_degree(count, d);
            for (std::size_t i = 0; i < multisets.size(); ++i)
                groups[detail::row_sum(rows, multisets[i])].push_back(static_cast<int>(i));
            for (const auto& [sum, members] : groups)
                for (std::size_t i = 1; i < members.size(); ++i) {
                    Move m;
                    for (int x : multisets[members[0]]) m.positive.push_back(networks[x]);
                    for (int x : multisets[members[i]]) m.negative.push_back(networks[x]);
                    m.source = source.text();
                    moves.push_back(std::move(m));
                }
        }
    }
    return moves;
}

struct GenerationWitness {
    std::int64_t degree;
    std::vector<Integer> target;  // shared image of the fiber's members
    std::vector<std::vector<Network>> members;
    std::vector<int> component;  // parallel to members, labelled by first use
};

struct GenerationReport {
    bool generated;
    std::int64_t move_count;
    std::int64_t fiber_count;  // fibers with at least two members examined
    std::optional<GenerationWitness> witness;
};

inline GenerationReport check_generation(const Tree& target, const AbelianGroup& g,
                                         const std::vector<Tree>& sources,
                                         std::int64_t move_degree, std::int64_t test_degree,
                                         const Limits& limits = {}) {
    if (move_degree < 1 || test_degree < move_degree)
        throw std::domain_error("check_generation: need 1 <= move_degree <= test_degree");
    std::vector<Move> moves = build_moves(target, g, sources, move_degree, limits);

    auto pairs = socket_network_bijection(target, g);
    std::vector<Network> networks;
    for (auto& pair : pairs) networks.push_back(std::move(pair.second));
    int count = static_cast<int>(networks.size());
    ModelPolytope target_model = build_polytope(target, g, limits);
    const IntMatrix& rows = target_model.vertices();

    std::map<Network, int> network_index;
    for (int i = 0; i < count; ++i) network_index.emplace(networks[i], i);
    struct IndexMove {
        std::vector<int> positive, negative;
    };
    std::vector<IndexMove> index_moves;
    for (const Move& m : moves) {
        IndexMove im;
        for (const Network& n : m.positive) im.positive.push_back(network_index.at(n));
        for (const Network& n : m.negative) im.negative.push_back(network_index.at(n));
        std::sort(im.positive.begin(), im.positive.end());
        std::sort(im.negative.begin(), im.negative.end());
        index_moves.push_back(std::move(im));
    }

    GenerationReport report{true, static_cast<std::int64_t>(moves.size()), 0, std::nullopt};
    for (std::int64_t d = 2; d <= test_degree && report.generated; ++d) {
        detail::require_multiset_budget(networks.size(), d, limits);
        auto multisets = detail::multisets_of_degree(count, d);
        // Group fibers in first-seen order: multisets arrive lexicographically,
        // so each fiber is keyed by its lexicographically least member.
        std::map<std::vector<Integer>, int> seen;
        std::vector<std::vector<int>> fibers;
        std::vector<std::vector<Integer>> images;
        for (std::size_t i = 0; i < multisets.size(); ++i) {
            std::vector<Integer> image = detail::row_sum(rows, multisets[i]);
            auto [it, fresh] = seen.emplace(std::move(image), static_cast<int>(fibers.size()));
            if (fresh) {
                fibers.emplace_back();
                images.push_back(it->first);
            }
            fibers[it->second].push_back(static_cast<int>(i));
        }

        for (std::size_t f = 0; f < fibers.size() && report.generated; ++f) {
            const std::vector<int>& members = fibers[f];
            if (members.size() < 2) continue;
            ++report.fiber_count;
            std::map<std::vector<int>, int> local;
            for (std::size_t i = 0; i < members.size(); ++i)
                local.emplace(multisets[members[i]], static_cast<int>(i));
            detail::UnionFind components(static_cast<int>(members.size()));
            for (std::size_t i = 0; i < members.size(); ++i) {
                const std::vector<int>& monomial = multisets[members[i]];
                for (const IndexMove& m : index_moves)
                    for (const auto* side : {&m.positive, &m.negative}) {
                        const auto& other = side == &m.positive ? m.negative : m.positive;
                        if (static_cast<std::int64_t>(side->size()) > d) continue;
                        if (!detail::sub_multiset(*side, monomial)) continue;
                        auto it = local.find(detail::replace_part(monomial, *side, other));
                        if (it == local.end())
                            throw std::logic_error("check_generation: a move left its fiber");
                        components.unite(static_cast<int>(i), it->second);
                    }
            }

            std::vector<int> label(members.size(), -1);
            int next = 0;
            for (std::size_t i = 0; i < members.size(); ++i) {
                int root = components.find(static_cast<int>(i));
                if (label[root] == -1) label[root] = next++;
                label[i] = label[root];
            }
            if (next > 1) {
                GenerationWitness w;
                w.degree = d;
                w.target = images[f];
                for (std::size_t i = 0; i < members.size(); ++i) {
                    std::vector<Network> monomial;
                    for (int x : multisets[members[i]]) monomial.push_back(networks[x]);
                    w.members.push_back(std::move(monomial));
                    w.component.push_back(label[i]);
                }
                report.witness = std::move(w);
                report.generated = false;
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Faces and orbit components.

struct FaceType1Report {
    std::vector<Network> members;  // networks with the prescribed edge value
    // Claw with >= 4 leaves only: whether the face-restricted relation lattice
    // matches the one of the two-inner-vertex tree carrying the same face.
    std::optional<bool> lift_matches;
};

inline FaceType1Report face_type1(const Tree& t, const AbelianGroup& g, int edge,
                                  const GroupElement& value, const Limits& limits = {}) {
    if (edge < 0 || edge >= t.edge_count())
        throw std::domain_error("face_type1: edge index out of range");
    g.require(value);

    detail::require_socket_budget(g, t.leaf_count(), limits);
    auto pairs = socket_network_bijection(t, g);
    FaceType1Report report;
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (pairs[i].second.at[static_cast<std::size_t>(edge)] == value) {
            report.members.push_back(pairs[i].second);
            support.push_back(i);
        }

    bool claw = t.edge_count() == t.leaf_count();
    if (!claw || t.leaf_count() < 4) return report;

    // Reattach the face's leaf next to the smallest other leaf, behind one
    // inner edge; the face condition reads identically on both trees.
    std::vector<int> labels = t.leaf_labels();
    int pinned = labels[static_cast<std::size_t>(t.pendant_leaf_index(edge))];
    std::string text = "((" + std::to_string(pinned) + ",";
    bool first = true;
    std::string rest;
    for (int label : labels) {
        if (label == pinned) continue;
        if (first) {
            text += std::to_string(label) + ")";
            first = false;
        } else {
            rest += "," + std::to_string(label);
        }
    }
    Tree lifted = Tree::parse(text + rest + ")");

    ModelPolytope claw_model = build_polytope(t, g, limits);
    ModelPolytope lifted_model = build_polytope(lifted, g, limits);
    report.lift_matches = kernel_of(claw_model.vertices().rows_subset(support)) ==
                          kernel_of(lifted_model.vertices().rows_subset(support));
    return report;
}

struct MinimalFaceReport {
    std::vector<Network> members;
    bool diagonal;  // more members than the defining pair
};

inline MinimalFaceReport minimal_face(const Tree& t, const AbelianGroup& g, const Network& n1,
                                      const Network& n2, const Limits& limits = {}) {
    if (!is_network(t, g, n1) || !is_network(t, g, n2))
        throw std::domain_error("minimal_face: input is not a network of the model");
    detail::require_socket_budget(g, t.leaf_count(), limits);
    MinimalFaceReport report{{}, false};
    for (const auto& [s, n] : socket_network_bijection(t, g)) {
        bool inside = true;
        for (std::size_t e = 0; e < n.at.size() && inside; ++e)
            inside = n.at[e] == n1.at[e] || n.at[e] == n2.at[e];
        if (inside) report.members.push_back(n);
    }
    report.diagonal = report.members.size() > 2;
    return report;
}

// Whether some rational functional attains its maximum over the vertex set
// exactly on the given networks; decided by exact feasibility of the support
// conditions with a unit margin.
inline bool is_face(const Tree& t, const AbelianGroup& g, const std::vector<Network>& subset,
                    const Limits& limits = {}) {
    if (subset.empty()) throw std::domain_error("is_face: empty subset");
    detail::require_socket_budget(g, t.leaf_count(), limits);
    auto pairs = socket_network_bijection(t, g);
    std::map<Network, std::size_t> index;
    for (std::size_t i = 0; i < pairs.size(); ++i) index.emplace(pairs[i].second, i);
    std::vector<bool> on(pairs.size(), false);
    for (const Network& n : subset) {
        auto it = index.find(n);
        if (it == index.end())
            throw std::domain_error("is_face: subset member is not a network of the model");
        on[it->second] = true;
    }

    ModelPolytope model = build_polytope(t, g, limits);
    const IntMatrix& rows = model.vertices();
    std::size_t width = rows.cols();
    std::size_t off_count = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (!on[i]) ++off_count;

    // Variables: functional and level split into signed parts, then one
    // surplus per strict row.  On-rows pin phi.v = c; off-rows force
    // phi.v <= c - 1, encoded as c - phi.v - surplus = 1.
    std::size_t columns = 2 * width + 2 + off_count;
    std::vector<std::vector<Rational>> system;
    std::vector<Rational> rhs;
    std::size_t surplus = 2 * width + 2;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::vector<Rational> row(columns);
        int sign = on[i] ? 1 : -1;
        for (std::size_t j = 0; j < width; ++j) {
            row[2 * j] = sign * rows(i, j);
            row[2 * j + 1] = -sign * rows(i, j);
        }
        row[2 * width] = -sign;
        row[2 * width + 1] = sign;
        if (on[i]) {
            rhs.emplace_back(0);
        } else {
            row[surplus++] = -1;
            rhs.emplace_back(1);
        }
        system.push_back(std::move(row));
    }
    return rational_feasible(std::move(system), std::move(rhs));
}

// Socket coordinates allowed to be nonzero; the complement is pinned to 0.
struct OrbitSpec {
    std::vector<std::int64_t> support;
};

struct OrbitReport {
    bool empty;  // the support misses the polytope of some tree
    Integer component_count;
    std::optional<Sublattice> kernel_sum;  // restricted kernels, summed
    std::optional<Sublattice> saturation;
};

inline OrbitReport orbit_component_count(const OrbitSpec& spec, const AbelianGroup& g,
                                         const std::vector<Tree>& trees,
                                         const Limits& limits = {}) {
    if (spec.support.empty()) throw std::domain_error("orbit_component_count: empty support");
    if (trees.empty()) throw std::domain_error("orbit_component_count: no trees");
    for (const Tree& t : trees)
        if (t.leaf_labels() != trees.front().leaf_labels())
            throw std::domain_error("orbit_component_count: trees disagree on leaves");

    Integer sockets = socket_count(g, trees.front().leaf_count());
    std::vector<std::size_t> support;
    for (std::int64_t i : spec.support) {
        if (i < 0 || Integer(i) >= sockets)
            throw std::domain_error("orbit_component_count: support index out of range");
        support.push_back(static_cast<std::size_t>(i));
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    detail::require_socket_budget(g, trees.front().leaf_count(), limits);
    std::vector<Sublattice> restricted;
    for (const Tree& t : trees) {
        auto pairs = socket_network_bijection(t, g);
        std::vector<Network> face;
        for (std::size_t i : support) face.push_back(pairs[i].second);
        if (!is_face(t, g, face, limits))
            return OrbitReport{true, 0, std::nullopt, std::nullopt};
        restricted.push_back(
            kernel_of(build_polytope(t, g, limits).vertices().rows_subset(support)));
    }

    Sublattice sum = lattice_sum(restricted);
    Sublattice sat = saturate(sum);
    Integer count = *index_in(sum, sat);
    return OrbitReport{false, std::move(count), std::move(sum), std::move(sat)};
}

}  // namespace phylotoric
