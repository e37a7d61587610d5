#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "qlpoly/error.hpp"
#include "qlpoly/logic.hpp"
#include "qlpoly/polytope.hpp"
#include "oracles.hpp"

using namespace qlpoly;
using namespace oracle;

namespace {

IntegerVector ints(std::initializer_list<long> xs) {
    IntegerVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace

TEST_CASE("simplex from the three automaton states") {
    VRep v{3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const auto h = double_description(v);
    CHECK(h.equalities == std::vector<IntegerVector>{ints({-1, 1, 1, 1})});
    CHECK(h.inequalities ==
          std::vector<IntegerVector>{ints({0, 0, 0, 1}), ints({0, 0, 1, 0}), ints({0, 1, 0, 0})});
    CHECK(to_text(h, {"a1", "a2", "a3"}) ==
          "-1 +1*P[a1] +1*P[a2] +1*P[a3] = 0\n+1*P[a3] >= 0\n+1*P[a2] >= 0\n+1*P[a1] >= 0\n");
}

TEST_CASE("unit square") {
    VRep v{2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    const auto h = double_description(v);
    CHECK(h.equalities.empty());
    CHECK(h.inequalities.size() == 4);
    CHECK(certify(v, h).ok());
}

TEST_CASE("degenerate inputs") {
    VRep point{3, {{1, 2, 3}}};
    const auto h = double_description(point);
    CHECK(h.equalities.size() == 3);
    CHECK(h.inequalities.empty());
    CHECK(certify(point, h).ok());
    CHECK(membership(h, {1, 2, 3}));
    CHECK_FALSE(membership(h, {1, 2, 4}));

    VRep segment{2, {{0, 0}, {2, 2}}};
    const auto s = double_description(segment);
    CHECK(s.equalities.size() == 1);
    CHECK(s.inequalities.size() == 2);

    CHECK_THROWS_AS(double_description(VRep{2, {}}), DomainError);
    CHECK_THROWS_AS(double_description(VRep{2, {{0, 0}, {1}}}), DomainError);
}

TEST_CASE("double description matches the brute-force facet oracle") {
    for (unsigned seed = 1; seed <= 60; ++seed) {
        std::mt19937 rng(seed);
        const std::size_t dim = 2 + seed % 3;
        const auto v = seed % 2 ? random_01(rng, dim, 3 + seed % 6) : random_rational(rng, dim, 3 + seed % 7);
        CAPTURE(seed);
        const auto h = double_description(v);
        CHECK(h == brute_force_hull(v));
        CHECK(h == double_description(v, {AdjacencyTest::Algebraic}));
        CHECK(certify(v, h).ok());
    }
}

TEST_CASE("vertex recovery for small dimensions") {
    for (unsigned seed = 100; seed < 140; ++seed) {
        std::mt19937 rng(seed);
        const std::size_t dim = 2 + seed % 3;
        CAPTURE(seed);
        const auto v = random_01(rng, dim, 2 + seed % 8);
        const auto h = double_description(v);
        // 0/1 points are always extreme, so recovery must be exact.
        CHECK(recover_vertices(h) == std::set<RationalVector>(v.vertices.begin(), v.vertices.end()));

        const auto w = random_rational(rng, dim, 4 + seed % 5);
        const auto hw = double_description(w);
        const auto got = recover_vertices(hw);
        for (const auto& x : got) CHECK(std::find(w.vertices.begin(), w.vertices.end(), x) != w.vertices.end());
        for (const auto& x : w.vertices) CHECK(membership(hw, x));
        CHECK(double_description(VRep{dim, {got.begin(), got.end()}}) == hw);
    }
}

TEST_CASE("canonical form is unique") {
    VRep v{3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const auto h = double_description(v);
    HRep scaled = h;
    for (auto& row : scaled.inequalities) {
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = 3 * row[i] + 6 * h.equalities[0][i];
    }
    for (auto& c : scaled.equalities[0]) c *= -4;
    std::reverse(scaled.inequalities.begin(), scaled.inequalities.end());
    scaled.inequalities.push_back(ints({5, 0, 0, 0}));
    CHECK(canonicalize(scaled) == h);
    CHECK(canonicalize(h) == h);
}

TEST_CASE("CH facets of the four-event classical polytope") {
    const std::vector<std::string> events = {"A1", "A2", "B1", "B2"};
    const auto terms = parse_terms("A1;A2;B1;B2;A1&B1;A1&B2;A2&B1;A2&B2", events);
    const auto v = classical_polytope(4, terms);
    REQUIRE(v.vertices.size() == 16);
    const auto h = double_description(v);
    CHECK(h.equalities.empty());
    CHECK(certify(v, h).ok());
    auto has = [&](const IntegerVector& r) {
        return std::find(h.inequalities.begin(), h.inequalities.end(), r) != h.inequalities.end();
    };
    CHECK(has(ints({0, 1, 0, 0, 1, -1, -1, 1, -1})));
    CHECK(has(ints({1, -1, 0, 0, -1, 1, 1, -1, 1})));
    CHECK(h == double_description(v, {AdjacencyTest::Algebraic}));
}

TEST_CASE("ks14 hull against the golden file") {
    const auto logic = builtin("ks14").logic;
    const auto v = build_vertices(enumerate_states(logic), TermList::singletons(13));
    const auto h = double_description(v);
    CHECK(certify(v, h).ok());
    CHECK(affine_hull_dim(v) == 6);
    CHECK(h.equalities.size() == 7);
    std::ifstream in(QLPOLY_GOLDEN_DIR "/ks14_hrep.txt");
    REQUIRE(in);
    std::stringstream golden;
    golden << in.rdbuf();
    CHECK(to_text(h, logic.atoms) == golden.str());
    CHECK(h == double_description(v, {AdjacencyTest::Algebraic}));
}

TEST_CASE("reference ks14 relations") {
    const auto logic = builtin("ks14").logic;
    const auto v = build_vertices(enumerate_states(logic), TermList::singletons(13));
    auto row = [](long c, std::initializer_list<std::pair<int, long>> t) {
        IntegerVector r(14, 0);
        r[0] = c;
        for (auto [i, k] : t) r[i] = k;
        return r;
    };
    const std::vector<IntegerVector> eqs = {
        row(-1, {{1, 1}, {2, 1}, {3, 1}}),
        row(-1, {{4, 1}, {10, 1}, {13, 1}}),
        row(-1, {{1, 1}, {2, 1}, {4, -1}, {6, 1}, {7, 1}}),
        row(-1, {{1, 1}, {2, 1}, {4, -1}, {6, 1}, {8, -1}, {10, 1}, {11, 1}}),
        row(0, {{1, 1}, {2, 1}, {4, -1}, {5, -1}}),
        row(0, {{1, -1}, {2, -1}, {4, 1}, {6, -1}, {8, 1}, {9, 1}}),
        row(0, {{2, -1}, {4, 1}, {6, -1}, {8, 1}, {10, -1}, {12, 1}}),
    };
    for (const auto& e : eqs) CHECK(check_relation(v, e, RelationKind::Equality));
    // The alternating sum is zero on every vertex, never one.
    CHECK_FALSE(check_relation(v, row(-1, {{2, -1}, {4, 1}, {6, -1}, {8, 1}, {10, -1}, {12, 1}}),
                               RelationKind::Equality));

    RationalMatrix contexts;
    for (const auto& b : logic.blocks) {
        RationalVector r(14, 0);
        r[0] = -1;
        for (auto a : b) r[a + 1] = 1;
        CHECK(check_relation(v, r, RelationKind::Equality));
        contexts.push_back(r);
    }
    const auto h = double_description(v);
    RationalMatrix hull;
    for (const auto& e : h.equalities) hull.push_back(to_rational(e));
    CHECK(rank(contexts) == rank(hull));
    RationalMatrix both = contexts;
    both.insert(both.end(), hull.begin(), hull.end());
    CHECK(rank(both) == rank(hull));
    RationalMatrix listed;
    for (const auto& e : eqs) listed.push_back(to_rational(e));
    both = listed;
    both.insert(both.end(), hull.begin(), hull.end());
    CHECK(rank(both) == rank(hull));
}

TEST_CASE("check_relation dimension and kinds") {
    VRep v{2, {{0, 0}, {1, 0}}};
    CHECK(check_relation(v, ints({0, 0, 1}), RelationKind::Equality));
    CHECK(check_relation(v, ints({1, -1, 0}), RelationKind::Inequality));
    CHECK_FALSE(check_relation(v, ints({0, -1, 0}), RelationKind::Inequality));
    CHECK_THROWS_AS(check_relation(v, ints({0, 1}), RelationKind::Equality), DomainError);
}

TEST_CASE("certificates reject wrong hulls") {
    VRep v{2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    HRep loose{2, {}, {ints({0, 1, 0}), ints({0, 0, 1}), ints({2, -1, 0}), ints({2, 0, -1})}};
    CHECK_FALSE(certify(v, loose).tight);
    HRep wrong{2, {}, {ints({0, 1, -1})}};
    CHECK_FALSE(certify(v, wrong).sound);
    HRep missing{2, {}, {}};
    VRep flat{2, {{0, 0}, {1, 1}}};
    CHECK_FALSE(certify(flat, missing).equalities_complete);
}

TEST_CASE("text and JSON formats") {
    VRep v{3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const auto h = double_description(v);
    const std::vector<std::string> names = {"a1", "a2", "a3"};
    const auto parsed = parse_relations("# simplex\n\n" + to_text(h, names), names);
    REQUIRE(parsed.size() == 4);
    CHECK(parsed[0].kind == RelationKind::Equality);
    CHECK(parsed[0].row == h.equalities[0]);
    CHECK(parsed[1].row == h.inequalities[0]);
    CHECK_THROWS_AS(parse_relations("+1*P[zz] >= 0", names), ParseError);
    CHECK_THROWS_AS(parse_relations("+1*P[a1] <= 0", names), ParseError);

    const auto nv = parse_vrep(to_json(VRep{2, {{Rational(1, 2), 0}, {0, 1}}}));
    CHECK(nv.vrep.dim == 2);
    CHECK(nv.vrep.vertices[0][0] == Rational(1, 2));
    CHECK(nv.names == default_names(2));
    CHECK(parse_vrep(R"({"dim":1,"vertices":[["3"]],"terms":["q"]})").names == std::vector<std::string>{"q"});
    CHECK_THROWS_AS(parse_vrep(R"({"dim":1,"vertices":[["1/0"]]})"), ParseError);
    CHECK_THROWS_AS(parse_vrep(R"({"dim":1,"vertices":[["1"],["1"]]})"), ParseError);
    CHECK_THROWS_AS(parse_vrep(R"({"dim":2,"vertices":[["1"]]})"), ParseError);
    CHECK(to_json(h, names).find("\"equalities\"") != std::string::npos);
}

TEST_CASE("terms") {
    const std::vector<std::string> names = {"a1", "a2", "a13"};
    const auto t = parse_terms("a1;a2;a13&a1", names);
    REQUIRE(t.size() == 3);
    CHECK(t.terms[2] == Term{0, 2});
    CHECK(term_names(t, names)[2] == "a1&a13");
    CHECK_THROWS_AS(parse_terms("a1;b", names), ParseError);
    CHECK_THROWS_AS((TermList{{{0}, {0}}}.validate(3)), DomainError);
    CHECK_THROWS_AS((TermList{{{7}}}.validate(3)), DomainError);
}

TEST_CASE("rationals") {
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK(to_string(parse_rational("4/2")) == "2");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
    CHECK(primitive(RationalVector{Rational(1, 2), Rational(-1, 3)}) == ints({3, -2}));
}
