#include <doctest.h>

#include "corners/complex.hpp"
#include "oracles.hpp"

using namespace corners;
using namespace testutil;

namespace {

bool has_violation(const std::vector<Violation>& report, const std::string& invariant) {
    for (const auto& v : report)
        if (v.invariant == invariant) return true;
    return false;
}

std::map<int, int> counts_by_codim(const CornerComplex& c) {
    std::map<int, int> counts;
    for (const auto& f : c.faces) counts[f.codim]++;
    return counts;
}

} // namespace

TEST_CASE("interval complex is the smallest valid complex") {
    const CornerComplex c = interval_complex();
    CHECK(validate(c).empty());
    CHECK(depth(c) == 1);
}

TEST_CASE("adjacency must increase codimension") {
    CornerComplex c = interval_complex();
    c.adjacency.insert({1, 2}); // both endpoints have codim 1
    const auto report = validate(c);
    CHECK(!report.empty());
    CHECK(has_violation(report, "adjacency codim-increasing"));
}

TEST_CASE("validate flags missing transitivity") {
    CornerComplex c = one_gon_complex();
    c.adjacency.erase({0, 2});
    CHECK(has_violation(validate(c), "adjacency transitive"));
}

TEST_CASE("validate ties structure group degree to the codimension") {
    CornerComplex bad = interval_complex();
    bad.faces[1].structure_group = PermutationGroup::generated_by({}, 2);
    CHECK(has_violation(validate(bad), "structure group degree"));
}

TEST_CASE("from_polytope rejects non-simple input naming the vertex") {
    // Vertex 0 on three facets in dimension 2.
    Incidence inc = {{true, true, true}, {true, false, false}};
    CHECK_THROWS_WITH_AS(from_polytope(inc, 2),
                         doctest::Contains("vertex 0"), std::invalid_argument);
}

TEST_CASE("interval from its incidence matrix") {
    const CornerComplex c = from_polytope(interval_incidence(), 1);
    CHECK(validate(c).empty());
    auto counts = counts_by_codim(c);
    CHECK(counts[0] == 1);
    CHECK(counts[1] == 2);
    CHECK(depth(c) == 1);
}

TEST_CASE("cube lattice matches the brute-force facet oracle") {
    const CornerComplex c = from_polytope(cube_incidence(), 3);
    CHECK(validate(c).empty());
    const OracleLattice oracle = oracle_lattice(cube_incidence());
    auto counts = counts_by_codim(c);
    CHECK(counts[1] == oracle.count_by_codim.at(1));
    CHECK(counts[2] == oracle.count_by_codim.at(2));
    CHECK(counts[3] == oracle.count_by_codim.at(3));
    CHECK(counts[1] == 6);
    CHECK(counts[2] == 12);
    CHECK(counts[3] == 8);
    CHECK(depth(c) == 3);
    CHECK(c.adjacency.size() == oracle.adjacency.size());
}

TEST_CASE("tetrahedron lattice matches the oracle") {
    const CornerComplex c = from_polytope(tetrahedron_incidence(), 3);
    CHECK(validate(c).empty());
    const OracleLattice oracle = oracle_lattice(tetrahedron_incidence());
    auto counts = counts_by_codim(c);
    CHECK(counts[1] == 4);
    CHECK(counts[2] == oracle.count_by_codim.at(2));
    CHECK(counts[2] == 6);
    CHECK(counts[3] == 4);
}

TEST_CASE("round trip: lattice -> incidence -> lattice") {
    for (const Incidence& inc :
         {interval_incidence(), square_incidence(), cube_incidence(), tetrahedron_incidence()}) {
        int n = 0; // simple polytopes put every vertex on exactly n facets
        for (bool b : inc[0]) n += b ? 1 : 0;
        const CornerComplex c = from_polytope(inc, n);
        const CornerComplex back = from_polytope(incidence_of_lattice(c), n);
        CHECK(back.face_count() == c.face_count());
        CHECK(back.adjacency.size() == c.adjacency.size());
        std::set<std::string> labels_a, labels_b;
        for (const auto& f : c.faces) labels_a.insert(f.label);
        for (const auto& f : back.faces) labels_b.insert(f.label);
        CHECK(labels_a == labels_b);
    }
}

TEST_CASE("closed face of a square edge is an interval") {
    const CornerComplex square = from_polytope(square_incidence(), 2);
    const FaceId edge = square.faces_of_codim(1).front();
    const ClosedFace cf = closed_face(square, edge);
    CHECK(cf.complex.ambient_dim == 1);
    CHECK(cf.complex.face_count() == 3);
    CHECK(depth(cf.complex) == 1);
    CHECK(validate(cf.complex).empty());
}

TEST_CASE("closed face of a cube facet is a square") {
    const CornerComplex cube = from_polytope(cube_incidence(), 3);
    const FaceId facet = cube.faces_of_codim(1).front();
    const ClosedFace cf = closed_face(cube, facet);
    auto counts = counts_by_codim(cf.complex);
    CHECK(counts[0] == 1);
    CHECK(counts[1] == 4);
    CHECK(counts[2] == 4);
    CHECK(validate(cf.complex).empty());

    // Restriction of the oracle to the facet: supersets of the facet subset.
    const OracleLattice oracle = oracle_lattice(cube_incidence());
    int edges = 0, vertices = 0;
    for (const auto& s : oracle.faces) {
        if (std::find(s.begin(), s.end(), 0) == s.end()) continue;
        if (s.size() == 2) ++edges;
        if (s.size() == 3) ++vertices;
    }
    CHECK(counts[1] == edges);
    CHECK(counts[2] == vertices);
}

TEST_CASE("closed face of the 1-gon edge covers the corner twice") {
    const CornerComplex gon = one_gon_complex();
    CHECK(validate(gon).empty());
    const ClosedFace cf = closed_face(gon, 1);
    CHECK(cf.complex.ambient_dim == 1);
    CHECK(cf.complex.face_count() == 3);
    CHECK(depth(cf.complex) == 1);
    // Both endpoints cover the single corner, one sheet each.
    CHECK(cf.target_in_parent[1] == 2);
    CHECK(cf.target_in_parent[2] == 2);
    CHECK(cf.sheets_to_parent[1] + cf.sheets_to_parent[2] == 2);
    // The two endpoints are not adjacent to each other.
    CHECK(!cf.complex.adjacent(1, 2));
    CHECK(!cf.complex.adjacent(2, 1));
}

TEST_CASE("interior has no closed face") {
    CHECK_THROWS_AS(closed_face(interval_complex(), 0), std::invalid_argument);
}

TEST_CASE("depth drops by the codimension inside closed faces") {
    for (const Incidence& inc : {cube_incidence(), tetrahedron_incidence()}) {
        const CornerComplex c = from_polytope(inc, 3);
        for (const auto& f : c.faces) {
            if (f.codim == 0) continue;
            CHECK(depth(closed_face(c, f.id).complex) == depth(c) - f.codim);
        }
    }
}

TEST_CASE("smooth closed manifold has depth zero") {
    CornerComplex c;
    c.ambient_dim = 2;
    c.faces = {{0, 0, 2, PermutationGroup::trivial(0), "sphere"}};
    CHECK(validate(c).empty());
    CHECK(depth(c) == 0);
}

TEST_CASE("trivializing cover of polytope faces is the identity covering") {
    const CornerComplex cube = from_polytope(cube_incidence(), 3);
    const FaceId edge = cube.faces_of_codim(2).front();
    const TrivializingCover cover = trivializing_cover(cube, edge);
    CHECK(cover.sheets == 1);
    CHECK(cover.deck_group.is_trivial());
    CHECK(cover.lifted.face_count() == closed_face(cube, edge).complex.face_count());
}

TEST_CASE("trivializing cover of a codim-2 face with a swap monodromy") {
    CornerComplex c;
    c.ambient_dim = 2;
    c.faces = {{0, 0, 2, PermutationGroup::trivial(0), "interior"},
               {1, 1, 1, PermutationGroup::trivial(1), "edge"},
               {2, 2, 0,
                PermutationGroup::generated_by({Permutation::transposition(2, 0, 1)}, 2),
                "corner"}};
    c.adjacency = {{0, 1}, {0, 2}, {1, 2}};
    c.coverings.push_back({1, 1, 2, 1, {}, {0}});
    CHECK(validate(c).empty());

    const TrivializingCover cover = trivializing_cover(c, 2);
    CHECK(cover.sheets == 2);
    CHECK(cover.deck_group.order() == 2);
    CHECK(cover.connected);

    // Two commuting swap generators generate the same order-2 group.
    CornerComplex c2 = c;
    c2.faces[2].structure_group = PermutationGroup::generated_by(
        {Permutation::transposition(2, 0, 1), Permutation::transposition(2, 0, 1)}, 2);
    const TrivializingCover cover2 = trivializing_cover(c2, 2);
    CHECK(cover2.sheets == 2);
    CHECK(cover2.deck_group.order() == 2);
}

TEST_CASE("hasse edges of polytope lattices carry covering records") {
    const CornerComplex cube = from_polytope(cube_incidence(), 3);
    for (const auto& [j, r] : hasse_edges(cube)) {
        bool covered = false;
        for (const auto& cov : cube.coverings)
            if (cov.parent == j && cov.target == r) covered = true;
        CHECK(covered);
    }
}

TEST_CASE("adjacency is a strict partial order on valid complexes") {
    const CornerComplex cube = from_polytope(cube_incidence(), 3);
    for (const auto& [a, b] : cube.adjacency) {
        CHECK(a != b);
        CHECK(!cube.adjacent(b, a));
        for (const auto& [b2, c] : cube.adjacency)
            if (b2 == b) CHECK(cube.adjacent(a, c));
    }
}

TEST_CASE("structure groups are stored as generated groups") {
    const auto group = PermutationGroup::generated_by(
        {Permutation::transposition(3, 0, 1), Permutation::transposition(3, 1, 2)}, 3);
    CHECK(group.order() == 6); // the full symmetric group on 3 letters
    CHECK(group.transitive());
    const auto redundant = PermutationGroup::generated_by(
        {Permutation::transposition(2, 0, 1), Permutation::transposition(2, 0, 1)}, 2);
    CHECK(redundant.order() == 2);
}
