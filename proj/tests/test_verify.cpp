#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "phylotoric/rational_lp.hpp"
#include "phylotoric/verify.hpp"

using phylotoric::AbelianGroup;
using phylotoric::build_polytope;
using phylotoric::EqualityMode;
using phylotoric::FiberSpec;
using phylotoric::GroupElement;
using phylotoric::Integer;
using phylotoric::IntMatrix;
using phylotoric::Limits;
using phylotoric::Network;
using phylotoric::Rational;
using phylotoric::Socket;
using phylotoric::Sublattice;
using phylotoric::Tree;

namespace {

Network binary_network(std::initializer_list<int> bits) {
    Network n;
    for (int b : bits) n.at.push_back(GroupElement{{b}});
    return n;
}

std::vector<Integer> row_total(const IntMatrix& rows, std::vector<std::size_t> picks) {
    std::vector<Integer> out(rows.cols());
    for (std::size_t i : picks)
        for (std::size_t j = 0; j < rows.cols(); ++j) out[j] += rows(i, j);
    return out;
}

}  // namespace

TEST_CASE("exact rational feasibility") {
    using Row = std::vector<Rational>;
    // x = 3 with x >= 0.
    CHECK(phylotoric::rational_feasible({Row{1}}, {Rational(3)}));
    // x = -1 with x >= 0 is impossible.
    CHECK_FALSE(phylotoric::rational_feasible({Row{1}}, {Rational(-1)}));
    // x + y = 1, x - y = 1 has the corner solution (1, 0).
    CHECK(phylotoric::rational_feasible({Row{1, 1}, Row{1, -1}},
                                        {Rational(1), Rational(1)}));
    // x + y = 1, x + y = 2 is contradictory.
    CHECK_FALSE(phylotoric::rational_feasible({Row{1, 1}, Row{1, 1}},
                                              {Rational(1), Rational(2)}));
    // Degenerate zero row with zero right side.
    CHECK(phylotoric::rational_feasible({Row{0, 0}}, {Rational(0)}));
    CHECK_FALSE(phylotoric::rational_feasible({Row{0, 0}}, {Rational(5)}));
    CHECK(phylotoric::rational_feasible({}, {}));
    CHECK_THROWS_AS(phylotoric::rational_feasible({Row{1}}, {}), std::invalid_argument);
}

TEST_CASE("kernel lattice fixtures") {
    auto r1 = phylotoric::kernel_lattice(Tree::claw(3), AbelianGroup::parse("2"));
    CHECK(r1.rank == 0);
    CHECK(r1.saturation_index == 1);

    auto r2 = phylotoric::kernel_lattice(Tree::claw(3), AbelianGroup::parse("2,2"));
    CHECK(r2.rank == 6);

    auto r3 = phylotoric::kernel_lattice(Tree::claw(4), AbelianGroup::parse("2"));
    CHECK(r3.rank == 3);
}

TEST_CASE("kernel vectors annihilate the vertex matrix and sum to zero") {
    for (const char* gt : {"2", "3", "2,2"}) {
        AbelianGroup g = AbelianGroup::parse(gt);
        for (int l : {3, 4}) {
            for (const Tree& t : phylotoric::enumerate_topologies(l)) {
                auto report = phylotoric::kernel_lattice(t, g);
                IntMatrix vertices = build_polytope(t, g).vertices();
                const IntMatrix& basis = report.kernel.basis();
                REQUIRE(static_cast<std::int64_t>(basis.rows()) == report.rank);
                if (basis.rows() == 0) continue;
                IntMatrix product = basis * vertices;
                for (std::size_t i = 0; i < product.rows(); ++i)
                    CHECK(product.row_is_zero(i));
                for (std::size_t i = 0; i < basis.rows(); ++i) {
                    Integer total = 0;
                    for (std::size_t j = 0; j < basis.cols(); ++j) total += basis(i, j);
                    CHECK(total == 0);
                }
            }
        }
    }
}

TEST_CASE("relation inclusion along contractions") {
    Tree claw4 = Tree::claw(4);
    Tree quartet = Tree::parse("((1,2),3,4)");
    CHECK(phylotoric::check_inclusion(claw4, quartet, AbelianGroup::parse("2")));
    CHECK(phylotoric::check_inclusion(claw4, quartet, AbelianGroup::parse("2,2")));
    CHECK(phylotoric::check_inclusion(quartet, quartet, AbelianGroup::parse("3")));
    CHECK_THROWS_AS(phylotoric::check_inclusion(quartet, claw4, AbelianGroup::parse("2")),
                    std::domain_error);

    AbelianGroup four = AbelianGroup::parse("2,2");
    auto all = phylotoric::enumerate_topologies(4);
    for (const Tree& t1 : all)
        for (const Tree& t2 : all) {
            if (!phylotoric::leq(t1, t2)) continue;
            CHECK(phylotoric::check_inclusion(t1, t2, four));
        }
}

TEST_CASE("claw kernel decomposition over refined trees") {
    AbelianGroup four = AbelianGroup::parse("2,2");
    std::vector<Tree> all_sources;
    for (const Tree& t : phylotoric::enumerate_topologies(4))
        if (t.edge_count() > 4) all_sources.push_back(t);
    REQUIRE(all_sources.size() == 3);

    auto scheme = phylotoric::check_main_theorem(4, four, all_sources, EqualityMode::scheme);
    CHECK(scheme.verified);
    CHECK_FALSE(scheme.witness.has_value());
    auto set = phylotoric::check_main_theorem(4, four, all_sources, EqualityMode::set);
    CHECK(set.verified);

    // The two quartets grouping {1,2} resp. {1,3} already suffice binarily.
    std::vector<Tree> pair = {Tree::parse("((1,2),3,4)"), Tree::parse("((1,3),2,4)")};
    CHECK(phylotoric::check_main_theorem(4, AbelianGroup::parse("2"), pair,
                                         EqualityMode::scheme)
              .verified);

    // One source alone misses relations; the witness is a genuine claw
    // relation outside the partial sum.
    auto partial = phylotoric::check_main_theorem(4, four, {all_sources[0]},
                                                  EqualityMode::scheme);
    CHECK_FALSE(partial.verified);
    REQUIRE(partial.witness.has_value());
    CHECK(phylotoric::contains(partial.claw_kernel, *partial.witness));
    CHECK_FALSE(phylotoric::contains(partial.source_sum, *partial.witness));

    // Adding sources only grows the summed lattice.
    auto two_sources = phylotoric::check_main_theorem(4, four, {all_sources[0], all_sources[1]},
                                                      EqualityMode::scheme);
    CHECK(phylotoric::contains(two_sources.source_sum, partial.source_sum));
    CHECK(phylotoric::contains(scheme.source_sum, two_sources.source_sum));

    CHECK_THROWS_AS(phylotoric::check_main_theorem(4, four, {}, EqualityMode::scheme),
                    std::domain_error);
    CHECK_THROWS_AS(
        phylotoric::check_main_theorem(5, four, all_sources, EqualityMode::scheme),
        std::domain_error);

    // The claw itself is admitted as a source; at three leaves it is the only
    // topology, and comparing its kernel against itself holds vacuously.
    auto vacuous = phylotoric::check_main_theorem(3, AbelianGroup::parse("2"), {Tree::claw(3)},
                                                  EqualityMode::scheme);
    CHECK(vacuous.verified);
    CHECK(vacuous.claw_kernel.rank() == 0);
}

TEST_CASE("projection triple is exact at the middle term") {
    for (int l : {3, 4, 5}) {
        auto report = phylotoric::check_exact_sequence(l);
        CHECK(report.complex);
        CHECK(report.exact);
        REQUIRE(report.image_index.has_value());
        CHECK(*report.image_index == Integer(1) << (l - 1));
    }
    CHECK_THROWS_AS(phylotoric::check_exact_sequence(2), std::domain_error);
    CHECK_THROWS_AS(phylotoric::check_exact_sequence(7), std::domain_error);
}

TEST_CASE("image and parity kernel agree under an independent solver") {
    for (int l : {3, 4}) {
        std::size_t m = std::size_t{1} << (l - 1);
        Sublattice image = phylotoric::detail::kimura_socket_image(l);
        Sublattice kernel = phylotoric::detail::kimura_xor_kernel(
            l, phylotoric::detail::socket_degree_zero_cubed(m));
        CHECK(oracles::bareiss_rank(image.basis()) == oracles::bareiss_rank(kernel.basis()));
        for (std::size_t i = 0; i < image.basis().rows(); ++i)
            CHECK(oracles::lattice_member(kernel.basis(), image.basis().row(i)));
        for (std::size_t i = 0; i < kernel.basis().rows(); ++i)
            CHECK(oracles::lattice_member(image.basis(), kernel.basis().row(i)));
    }
}

TEST_CASE("binary kernels embed into the projection image") {
    CHECK(phylotoric::check_kernel_in_image(Tree::claw(3)));
    CHECK(phylotoric::check_kernel_in_image(Tree::claw(4)));
    CHECK(phylotoric::check_kernel_in_image(Tree::parse("((1,2),3,4)")));
    for (const Tree& t : phylotoric::enumerate_topologies(4))
        CHECK(phylotoric::check_kernel_in_image(t));
    CHECK_THROWS_AS(phylotoric::check_kernel_in_image(Tree::claw(7)), std::domain_error);
}

TEST_CASE("socket-level and edge-level indices coincide") {
    auto r3 = phylotoric::check_index_equality(Tree::claw(3));
    REQUIRE(r3.socket_level.has_value());
    REQUIRE(r3.edge_level.has_value());
    CHECK(*r3.socket_level == 4);
    CHECK(*r3.edge_level == 4);
    CHECK(r3.equal);

    auto r4 = phylotoric::check_index_equality(Tree::claw(4));
    CHECK(*r4.socket_level == 8);
    CHECK(r4.equal);

    CHECK(phylotoric::check_index_equality(Tree::parse("((1,2),3,4)")).equal);
    CHECK_THROWS_AS(phylotoric::check_index_equality(Tree::claw(6)), std::domain_error);
}

TEST_CASE("rank bookkeeping matches the closed forms") {
    auto r1 = phylotoric::dimension_report(Tree::claw(3), AbelianGroup::parse("2,2"));
    CHECK(r1.affine_rank == 10);
    CHECK(r1.projective_rank == 9);
    CHECK(r1.consistent);

    auto r2 = phylotoric::dimension_report(Tree::claw(5), AbelianGroup::parse("2,2"));
    CHECK(r2.affine_rank == 16);
    CHECK(r2.consistent);

    auto r3 = phylotoric::dimension_report(Tree::claw(3), AbelianGroup::parse("2"));
    CHECK(r3.affine_rank == 4);
    CHECK(r3.projective_rank == 3);
    CHECK(r3.consistent);

    // No closed form is claimed beyond the two groups above; the report then
    // simply carries the computed ranks.
    auto r4 = phylotoric::dimension_report(Tree::claw(3), AbelianGroup::parse("3"));
    CHECK(r4.consistent);
    CHECK_FALSE(r4.expected_affine.has_value());
    CHECK(r4.affine_rank ==
          oracles::bareiss_rank(build_polytope(Tree::claw(3), AbelianGroup::parse("3")).vertices()));

    for (const char* gt : {"2", "2,2"}) {
        AbelianGroup g = AbelianGroup::parse(gt);
        for (int l : {4, 5})
            for (const Tree& t : phylotoric::enumerate_topologies(l))
                CHECK(phylotoric::dimension_report(t, g).consistent);
    }
}

TEST_CASE("generic fiber sizes of the dense-torus parametrization") {
    CHECK(phylotoric::fiber_cardinality(Tree::parse("(1,2)"), AbelianGroup::parse("2")) == 1);
    CHECK(phylotoric::fiber_cardinality(Tree::claw(3), AbelianGroup::parse("2")) == 2);
    CHECK(phylotoric::fiber_cardinality(Tree::claw(3), AbelianGroup::parse("2,2")) == 4);
    CHECK(phylotoric::fiber_cardinality(Tree::claw(4), AbelianGroup::parse("2")) == 2);

    // Cross-check the saturation index against a determinant-based oracle on
    // every model whose maximal-minor count stays small.
    for (const char* gt : {"2", "3", "2,2"}) {
        AbelianGroup g = AbelianGroup::parse(gt);
        for (const Tree& t : phylotoric::enumerate_topologies(3))
            CHECK(phylotoric::fiber_cardinality(t, g) ==
                  oracles::saturation_index_from_minors(
                      build_polytope(t, g).degree_zero_span().basis()));
    }
    for (const char* gt : {"2", "3"}) {
        AbelianGroup g = AbelianGroup::parse(gt);
        for (const Tree& t : phylotoric::enumerate_topologies(4))
            CHECK(phylotoric::fiber_cardinality(t, g) ==
                  oracles::saturation_index_from_minors(
                      build_polytope(t, g).degree_zero_span().basis()));
    }
    CHECK(phylotoric::fiber_cardinality(Tree::claw(4), AbelianGroup::parse("2,2")) ==
          oracles::saturation_index_from_minors(
              build_polytope(Tree::claw(4), AbelianGroup::parse("2,2"))
                  .degree_zero_span()
                  .basis()));
}

TEST_CASE("degree-two fiber of the opposite corners") {
    Tree t = Tree::claw(4);
    AbelianGroup g = AbelianGroup::parse("2");
    IntMatrix rows = build_polytope(t, g).vertices();

    FiberSpec spec{t, g, 2, row_total(rows, {0, 7})};
    auto fiber = phylotoric::enumerate_fiber(spec);
    REQUIRE(fiber.size() == 4);
    CHECK(fiber[0] == std::vector<Network>{binary_network({0, 0, 0, 0}),
                                           binary_network({1, 1, 1, 1})});
    CHECK(fiber[1] == std::vector<Network>{binary_network({0, 0, 1, 1}),
                                           binary_network({1, 1, 0, 0})});
    CHECK(fiber[2] == std::vector<Network>{binary_network({0, 1, 0, 1}),
                                           binary_network({1, 0, 1, 0})});
    CHECK(fiber[3] == std::vector<Network>{binary_network({0, 1, 1, 0}),
                                           binary_network({1, 0, 0, 1})});
}

TEST_CASE("degree-one fibers are the vertices themselves") {
    Tree t = Tree::parse("((1,2),3,4)");
    AbelianGroup g = AbelianGroup::parse("2");
    auto pairs = phylotoric::socket_network_bijection(t, g);
    IntMatrix rows = build_polytope(t, g).vertices();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        FiberSpec spec{t, g, 1, row_total(rows, {i})};
        auto fiber = phylotoric::enumerate_fiber(spec);
        REQUIRE(fiber.size() == 1);
        CHECK(fiber[0] == std::vector<Network>{pairs[i].second});
    }
}

TEST_CASE("unreachable targets give empty fibers") {
    Tree t = Tree::claw(3);
    AbelianGroup g = AbelianGroup::parse("2");
    // Needs two copies of the non-socket (0,0,1).
    std::vector<Integer> target = {Integer(2), Integer(0), Integer(2),
                                   Integer(0), Integer(0), Integer(2)};
    CHECK(phylotoric::enumerate_fiber(FiberSpec{t, g, 2, target}).empty());

    std::vector<Integer> lopsided = {Integer(1), Integer(0), Integer(2),
                                     Integer(0), Integer(0), Integer(2)};
    CHECK_THROWS_AS(phylotoric::enumerate_fiber(FiberSpec{t, g, 2, lopsided}),
                    std::domain_error);
    CHECK_THROWS_AS(phylotoric::enumerate_fiber(FiberSpec{t, g, 0, target}),
                    std::domain_error);

    Limits tiny;
    tiny.max_fiber_multisets = 3;
    std::vector<Integer> reachable = row_total(build_polytope(t, g).vertices(), {0, 1});
    CHECK_THROWS_AS(phylotoric::enumerate_fiber(FiberSpec{t, g, 2, reachable}, tiny),
                    phylotoric::resource_limit_error);
}

TEST_CASE("translating a fiber by a network lands on a fiber") {
    Tree t = Tree::claw(4);
    AbelianGroup g = AbelianGroup::parse("2");
    IntMatrix rows = build_polytope(t, g).vertices();
    auto pairs = phylotoric::socket_network_bijection(t, g);

    FiberSpec spec{t, g, 2, row_total(rows, {0, 7})};
    auto fiber = phylotoric::enumerate_fiber(spec);
    Network shift = binary_network({0, 0, 1, 1});

    // Shift every member pointwise and recompute the shared image.
    std::vector<std::vector<Network>> moved;
    for (const auto& member : fiber) {
        std::vector<Network> shifted;
        for (const Network& n : member) {
            Network out;
            for (std::size_t e = 0; e < n.at.size(); ++e)
                out.at.push_back(g.combine(n.at[e], shift.at[e]));
            shifted.push_back(out);
        }
        std::sort(shifted.begin(), shifted.end());
        moved.push_back(shifted);
    }
    std::sort(moved.begin(), moved.end());

    std::vector<std::size_t> image_picks;
    for (const Network& n : moved[0])
        image_picks.push_back(static_cast<std::size_t>(
            phylotoric::socket_index(g, phylotoric::socket_of_network(t, g, n))));
    auto image_fiber =
        phylotoric::enumerate_fiber(FiberSpec{t, g, 2, row_total(rows, image_picks)});
    std::sort(image_fiber.begin(), image_fiber.end());
    CHECK(moved == image_fiber);
}

TEST_CASE("moves carry relations from source trees to the target") {
    Tree target = Tree::claw(4);
    AbelianGroup g = AbelianGroup::parse("2");
    std::vector<Tree> sources = {Tree::parse("((1,2),3,4)"), Tree::parse("((1,3),2,4)")};
    auto moves = phylotoric::build_moves(target, g, sources, 2);
    CHECK(!moves.empty());
    IntMatrix rows = build_polytope(target, g).vertices();
    for (const auto& move : moves) {
        REQUIRE(move.positive.size() == move.negative.size());
        std::vector<Integer> lhs(rows.cols()), rhs(rows.cols());
        for (const Network& n : move.positive) {
            auto v = phylotoric::vertex_of_network(target, g, n);
            for (std::size_t j = 0; j < v.size(); ++j) lhs[j] += v[j];
        }
        for (const Network& n : move.negative) {
            auto v = phylotoric::vertex_of_network(target, g, n);
            for (std::size_t j = 0; j < v.size(); ++j) rhs[j] += v[j];
        }
        CHECK(lhs == rhs);
        CHECK((move.source == sources[0].text() || move.source == sources[1].text()));
    }
}

TEST_CASE("two quartets generate the four-leaf binary fibers") {
    Tree target = Tree::claw(4);
    AbelianGroup g = AbelianGroup::parse("2");
    std::vector<Tree> sources = {Tree::parse("((1,2),3,4)"), Tree::parse("((1,3),2,4)")};
    auto report = phylotoric::check_generation(target, g, sources, 2, 3);
    CHECK(report.generated);
    CHECK_FALSE(report.witness.has_value());
    CHECK(report.move_count > 0);

    // The model generates itself tautologically.
    auto self = phylotoric::check_generation(Tree::parse("((1,2),3,4)"), g,
                                             {Tree::parse("((1,2),3,4)")}, 2, 2);
    CHECK(self.generated);

    CHECK_THROWS_AS(phylotoric::check_generation(target, g, sources, 3, 2), std::domain_error);
    CHECK_THROWS_AS(
        phylotoric::check_generation(Tree::parse("((1,2),3,4)"), g, {Tree::claw(4)}, 2, 2),
        std::domain_error);
}

TEST_CASE("two five-leaf trees miss a degree-two fiber") {
    Tree target = Tree::claw(5);
    AbelianGroup g = AbelianGroup::parse("2");
    std::vector<Tree> sources = {Tree::parse("((1,2),3,4,5)"), Tree::parse("((4,5),1,2,3)")};
    auto report = phylotoric::check_generation(target, g, sources, 2, 2);
    CHECK_FALSE(report.generated);
    REQUIRE(report.witness.has_value());
    const auto& w = *report.witness;
    CHECK(w.degree == 2);

    IntMatrix rows = build_polytope(target, g).vertices();
    CHECK(w.target == row_total(rows, {0, 13}));
    CHECK(w.target == row_total(rows, {5, 8}));

    REQUIRE(w.members.size() == 4);
    CHECK(w.members[0] == std::vector<Network>{binary_network({0, 0, 0, 0, 0}),
                                               binary_network({1, 1, 0, 1, 1})});
    CHECK(w.members[1] == std::vector<Network>{binary_network({0, 0, 0, 1, 1}),
                                               binary_network({1, 1, 0, 0, 0})});
    CHECK(w.members[2] == std::vector<Network>{binary_network({0, 1, 0, 0, 1}),
                                               binary_network({1, 0, 0, 1, 0})});
    CHECK(w.members[3] == std::vector<Network>{binary_network({0, 1, 0, 1, 0}),
                                               binary_network({1, 0, 0, 0, 1})});
    CHECK(w.component == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("first-kind faces and their lifted relation lattices") {
    Tree k13 = Tree::claw(3);
    AbelianGroup two = AbelianGroup::parse("2");
    auto small = phylotoric::face_type1(k13, two, 0, GroupElement{{0}});
    REQUIRE(small.members.size() == 2);
    CHECK(small.members[0] == binary_network({0, 0, 0}));
    CHECK(small.members[1] == binary_network({0, 1, 1}));
    CHECK_FALSE(small.lift_matches.has_value());

    Tree k14 = Tree::claw(4);
    for (int e = 0; e < 4; ++e)
        for (int v = 0; v < 2; ++v) {
            auto face = phylotoric::face_type1(k14, two, e, GroupElement{{v}});
            CHECK(face.members.size() == 4);
            REQUIRE(face.lift_matches.has_value());
            CHECK(*face.lift_matches);
        }

    AbelianGroup four = AbelianGroup::parse("2,2");
    auto kimura_face = phylotoric::face_type1(k14, four, 1, GroupElement{{0, 0}});
    CHECK(kimura_face.members.size() == 16);
    REQUIRE(kimura_face.lift_matches.has_value());
    CHECK(*kimura_face.lift_matches);

    auto quartet_face = phylotoric::face_type1(Tree::parse("((1,2),3,4)"), two, 1,
                                               GroupElement{{1}});
    CHECK_FALSE(quartet_face.lift_matches.has_value());
    for (const Network& n : quartet_face.members) CHECK(n.at[1] == GroupElement{{1}});

    CHECK_THROWS_AS(phylotoric::face_type1(k13, two, 3, GroupElement{{0}}), std::domain_error);
    CHECK_THROWS_AS(phylotoric::face_type1(k13, two, 0, GroupElement{{2}}),
                    std::invalid_argument);
}

TEST_CASE("minimal faces of vertex pairs") {
    Tree t = Tree::claw(4);
    AbelianGroup g = AbelianGroup::parse("2");
    Network zero = binary_network({0, 0, 0, 0});
    Network ones = binary_network({1, 1, 1, 1});

    auto wide = phylotoric::minimal_face(t, g, zero, ones);
    CHECK(wide.members.size() == 8);
    CHECK(wide.diagonal);

    auto point = phylotoric::minimal_face(t, g, zero, zero);
    CHECK(point.members == std::vector<Network>{zero});
    CHECK_FALSE(point.diagonal);

    CHECK_THROWS_AS(phylotoric::minimal_face(t, g, zero, binary_network({1, 0, 0, 0})),
                    std::domain_error);

    // Swap closure: replacing a member by its mirror stays in the face and
    // preserves the two-vertex image sum.
    for (const char* tree_text : {"(1,2,3,4)", "((1,2),3,4)"}) {
        Tree tree = Tree::parse(tree_text);
        auto pairs = phylotoric::socket_network_bijection(tree, g);
        for (const auto& [s1, n1] : pairs)
            for (const auto& [s2, n2] : pairs) {
                auto face = phylotoric::minimal_face(tree, g, n1, n2);
                std::set<Network> members(face.members.begin(), face.members.end());
                for (const Network& n : face.members) {
                    Network mirror;
                    for (std::size_t e = 0; e < n.at.size(); ++e)
                        mirror.at.push_back(n.at[e] == n1.at[e] ? n2.at[e] : n1.at[e]);
                    CHECK(members.count(mirror) == 1);
                    auto a = phylotoric::vertex_of_network(tree, g, n);
                    auto b = phylotoric::vertex_of_network(tree, g, mirror);
                    auto c = phylotoric::vertex_of_network(tree, g, n1);
                    auto d = phylotoric::vertex_of_network(tree, g, n2);
                    for (std::size_t j = 0; j < a.size(); ++j)
                        CHECK(a[j] + b[j] == c[j] + d[j]);
                }
            }
    }
}

TEST_CASE("support recognition for vertex subsets") {
    Tree t = Tree::claw(4);
    AbelianGroup g = AbelianGroup::parse("2");
    Network zero = binary_network({0, 0, 0, 0});
    Network ones = binary_network({1, 1, 1, 1});

    auto face = phylotoric::face_type1(t, g, 0, GroupElement{{1}});
    CHECK(phylotoric::is_face(t, g, face.members));
    CHECK_FALSE(phylotoric::is_face(t, g, {zero, ones}));
    CHECK(phylotoric::is_face(t, g, {zero}));

    std::vector<Network> everything;
    for (const auto& [s, n] : phylotoric::socket_network_bijection(t, g))
        everything.push_back(n);
    CHECK(phylotoric::is_face(t, g, everything));

    CHECK_THROWS_AS(phylotoric::is_face(t, g, {}), std::domain_error);
    CHECK_THROWS_AS(phylotoric::is_face(t, g, {binary_network({1, 0, 0, 0})}),
                    std::domain_error);
}

TEST_CASE("minimal faces are supported by functionals") {
    AbelianGroup two = AbelianGroup::parse("2");
    for (const char* tree_text : {"(1,2,3,4)", "((1,2),3,4)"}) {
        Tree tree = Tree::parse(tree_text);
        auto pairs = phylotoric::socket_network_bijection(tree, two);
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t j = i; j < pairs.size(); ++j) {
                auto face =
                    phylotoric::minimal_face(tree, two, pairs[i].second, pairs[j].second);
                CHECK(phylotoric::is_face(tree, two, face.members));
            }
    }

    // Medium model exhaustively, the largest one spot-checked by fixed seed.
    Tree k13 = Tree::claw(3);
    AbelianGroup four = AbelianGroup::parse("2,2");
    auto k13_pairs = phylotoric::socket_network_bijection(k13, four);
    for (std::size_t i = 0; i < k13_pairs.size(); ++i)
        for (std::size_t j = i; j < k13_pairs.size(); ++j) {
            auto face = phylotoric::minimal_face(k13, four, k13_pairs[i].second,
                                                 k13_pairs[j].second);
            CHECK(phylotoric::is_face(k13, four, face.members));
        }

    Tree t = Tree::claw(4);
    auto pairs = phylotoric::socket_network_bijection(t, four);
    std::mt19937 rng(987123);
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    for (int trial = 0; trial < 6; ++trial) {
        auto face = phylotoric::minimal_face(t, four, pairs[pick(rng)].second,
                                             pairs[pick(rng)].second);
        CHECK(phylotoric::is_face(t, four, face.members));
    }
}

TEST_CASE("component counts over socket supports") {
    AbelianGroup four = AbelianGroup::parse("2,2");
    std::vector<Tree> sources;
    for (const Tree& t : phylotoric::enumerate_topologies(4))
        if (t.edge_count() > 4) sources.push_back(t);

    // Full support over the refined trees recovers an irreducible stratum
    // whose relation lattice is the claw kernel.
    phylotoric::OrbitSpec full;
    for (std::int64_t i = 0; i < 64; ++i) full.support.push_back(i);
    auto report = phylotoric::orbit_component_count(full, four, sources);
    CHECK_FALSE(report.empty);
    CHECK(report.component_count == 1);
    REQUIRE(report.kernel_sum.has_value());
    CHECK(*report.kernel_sum == phylotoric::kernel_lattice(Tree::claw(4), four).kernel);

    // A single tree restricted to one of its coordinate faces.
    AbelianGroup two = AbelianGroup::parse("2");
    Tree k14 = Tree::claw(4);
    phylotoric::OrbitSpec face_support;
    auto pairs = phylotoric::socket_network_bijection(k14, two);
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (pairs[i].second.at[0] == GroupElement{{0}})
            face_support.support.push_back(static_cast<std::int64_t>(i));
    auto single = phylotoric::orbit_component_count(face_support, two, {k14});
    CHECK_FALSE(single.empty);
    CHECK(single.component_count == 1);

    // The two opposite corners do not span a face: the stratum is empty.
    phylotoric::OrbitSpec corners;
    corners.support = {0, 7};
    auto missing = phylotoric::orbit_component_count(corners, two, {k14});
    CHECK(missing.empty);
    CHECK_FALSE(missing.kernel_sum.has_value());

    CHECK_THROWS_AS(phylotoric::orbit_component_count(phylotoric::OrbitSpec{}, two, {k14}),
                    std::domain_error);
    phylotoric::OrbitSpec bad;
    bad.support = {200};
    CHECK_THROWS_AS(phylotoric::orbit_component_count(bad, two, {k14}), std::domain_error);
    phylotoric::OrbitSpec fine;
    fine.support = {0, 1};
    CHECK_THROWS_AS(
        phylotoric::orbit_component_count(fine, two, {k14, Tree::parse("(1,2,3,5)")}),
        std::domain_error);
}
