#include "doctest.h"

#include "cellkit/coxeter.hpp"
#include "cellkit/errors.hpp"

#include <algorithm>
#include <set>
#include <vector>

using namespace cellkit;

namespace {

// Independent Bruhat oracle: reflexive-transitive closure of covers,
// where y covers x when y = x * t for a transposition t and
// l(y) = l(x) + 1.
std::vector<std::vector<bool>> bruhat_by_covers(const SymmetricGroup& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    std::vector<Element> refl;
    for (int i = 1; i <= g.rank(); ++i)
        for (int j = i + 1; j <= g.rank(); ++j) {
            std::vector<int> perm(g.rank());
            for (int k = 0; k < g.rank(); ++k)
                perm[k] = k + 1;
            std::swap(perm[i - 1], perm[j - 1]);
            refl.push_back(g.from_one_line(perm));
        }
    for (ElementId id = 0; id < n; ++id)
        leq[id][id] = true;
    for (ElementId id = 0; id < n; ++id) {
        Element x = g.element(id);
        for (Element t : refl) {
            Element y = g.multiply(x, t);
            if (g.length(y) == g.length(x) + 1)
                leq[id][y.id] = true;
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (leq[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (leq[k][j])
                        leq[i][j] = true;
    return leq;
}

} // namespace

TEST_SUITE("coxeter") {

TEST_CASE("construction and sizes") {
    CHECK(SymmetricGroup(2).size() == 2);
    CHECK(SymmetricGroup(3).size() == 6);
    CHECK(SymmetricGroup(4).size() == 24);
    CHECK_THROWS_AS(SymmetricGroup(0), user_error);
    CHECK_THROWS_AS(SymmetricGroup(8), user_error);
}

TEST_CASE("one-line forms and multiplication in S3") {
    SymmetricGroup g(3);
    CHECK(g.one_line(g.identity()) == std::vector<int>{1, 2, 3});
    CHECK(g.one_line(g.simple(1)) == std::vector<int>{2, 1, 3});
    CHECK(g.one_line(g.simple(2)) == std::vector<int>{1, 3, 2});
    CHECK(g.one_line(g.longest()) == std::vector<int>{3, 2, 1});

    // Composition convention: (x*y)(i) = x(y(i)).
    Element s1s2 = g.multiply(g.simple(1), g.simple(2));
    Element s2s1 = g.multiply(g.simple(2), g.simple(1));
    CHECK(g.one_line(s1s2) == std::vector<int>{2, 3, 1});
    CHECK(g.one_line(s2s1) == std::vector<int>{3, 1, 2});
    CHECK(g.inverse(s1s2) == s2s1);
    CHECK(g.multiply(s1s2, s2s1) == g.identity());
    CHECK(g.from_one_line({3, 1, 2}) == s2s1);
    CHECK_THROWS_AS(g.from_one_line({1, 2}), user_error);
    CHECK_THROWS_AS(g.from_one_line({1, 1, 3}), user_error);
}

TEST_CASE("lengths and descents") {
    SymmetricGroup g(3);
    Element s2s1 = g.from_one_line({3, 1, 2});
    CHECK(g.length(g.identity()) == 0);
    CHECK(g.length(s2s1) == 2);
    CHECK(g.length(g.longest()) == 3);

    CHECK(g.has_right_descent(s2s1, 1));
    CHECK_FALSE(g.has_right_descent(s2s1, 2));
    CHECK(g.has_left_descent(s2s1, 2));
    CHECK_FALSE(g.has_left_descent(s2s1, 1));
    CHECK(g.first_left_descent(s2s1) == 2);
    CHECK(g.first_left_descent(g.identity()) == 0);

    // Generator actions: right multiplication swaps positions, left
    // multiplication swaps values.
    CHECK(g.one_line(g.multiply_simple_right(s2s1, 1)) == std::vector<int>{1, 3, 2});
    CHECK(g.one_line(g.multiply_simple_left(1, s2s1)) == std::vector<int>{3, 2, 1});
}

TEST_CASE("canonical words") {
    SymmetricGroup g(3);
    CHECK(g.canonical_word(g.identity()).empty());
    CHECK(g.canonical_word(g.simple(1)) == Word{1});
    CHECK(g.canonical_word(g.longest()) == Word{1, 2, 1});
    CHECK(g.canonical_word(g.from_one_line({3, 1, 2})) == Word{2, 1});
    CHECK(g.canonical_word(g.from_one_line({2, 3, 1})) == Word{1, 2});

    SymmetricGroup g4(4);
    for (Element x : g4.elements_by_length()) {
        const Word& w = g4.canonical_word(x);
        CHECK(static_cast<int>(w.size()) == g4.length(x)); // reduced
        CHECK(g4.from_word(w) == x);                       // round trip
    }
    CHECK_THROWS_AS(g.from_word(Word{3}), user_error);
}

TEST_CASE("element enumeration order") {
    SymmetricGroup g(4);
    const auto& order = g.elements_by_length();
    REQUIRE(order.size() == 24);
    CHECK(order.front() == g.identity());
    CHECK(order.back() == g.longest());
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        int la = g.length(order[k]);
        int lb = g.length(order[k + 1]);
        CHECK(la <= lb);
        if (la == lb)
            CHECK(g.canonical_word(order[k]) < g.canonical_word(order[k + 1]));
    }
    for (std::size_t k = 0; k < order.size(); ++k)
        CHECK(g.order_index(order[k]) == k);
}

TEST_CASE("bruhat order against the covering oracle") {
    for (int rank = 2; rank <= 4; ++rank) {
        SymmetricGroup g(rank);
        auto oracle = bruhat_by_covers(g);
        for (ElementId a = 0; a < g.size(); ++a)
            for (ElementId b = 0; b < g.size(); ++b)
                CHECK(g.bruhat_leq(g.element(a), g.element(b)) == oracle[a][b]);
    }
}

TEST_CASE("bruhat spot checks in S3") {
    SymmetricGroup g(3);
    Element s1 = g.simple(1), s2 = g.simple(2);
    Element s1s2 = g.from_one_line({2, 3, 1});
    CHECK(g.bruhat_leq(g.identity(), s1s2));
    CHECK(g.bruhat_leq(s1, s1s2));
    CHECK(g.bruhat_leq(s2, s1s2));
    CHECK_FALSE(g.bruhat_leq(s1, s2));
    CHECK_FALSE(g.bruhat_leq(s2, s1));
    CHECK(g.bruhat_leq(s1s2, g.longest()));
    CHECK_FALSE(g.bruhat_leq(g.longest(), s1s2));
}

TEST_CASE("involutions") {
    CHECK(SymmetricGroup(2).involutions().size() == 2);
    CHECK(SymmetricGroup(3).involutions().size() == 4);
    CHECK(SymmetricGroup(4).involutions().size() == 10);
    CHECK(SymmetricGroup(5).involutions().size() == 26);

    SymmetricGroup g(4);
    for (Element x : g.involutions())
        CHECK(g.inverse(x) == x);
    std::vector<Element> all_invs = g.involutions();
    std::set<Element> invs(all_invs.begin(), all_invs.end());
    for (Element x : g.elements_by_length())
        CHECK(invs.count(x) == (g.multiply(x, x) == g.identity() ? 1u : 0u));
}

TEST_CASE("diagram conjugation") {
    SymmetricGroup g3(3);
    CHECK(g3.diagram_conjugate(g3.simple(1)) == g3.simple(2));
    CHECK(g3.diagram_conjugate(g3.longest()) == g3.longest());

    SymmetricGroup g6(6);
    // s1 s2 s1 s5 conjugates to s5 s4 s5 s1 = s1 s4 s5 s4.
    Element a = g6.from_word({1, 2, 1, 5});
    Element b = g6.from_word({1, 4, 5, 4});
    CHECK(g6.diagram_conjugate(a) == b);
    SymmetricGroup g4(4);
    for (Element x : g4.elements_by_length()) {
        CHECK(g4.diagram_conjugate(g4.diagram_conjugate(x)) == x);
        CHECK(g4.length(g4.diagram_conjugate(x)) == g4.length(x));
    }
}

TEST_CASE("rsk shapes") {
    SymmetricGroup g(3);
    CHECK(g.rsk_shape(g.identity()) == std::vector<int>{3});
    CHECK(g.rsk_shape(g.longest()) == std::vector<int>{1, 1, 1});
    CHECK(g.rsk_shape(g.from_one_line({3, 1, 2})) == std::vector<int>{2, 1});
    CHECK(g.rsk_shape(g.from_one_line({2, 3, 1})) == std::vector<int>{2, 1});

    SymmetricGroup g5(5);
    CHECK(g5.rsk_shape(g5.from_word({1, 4})) == std::vector<int>{3, 2});
    // Shape is a partition of n and is shared by x and its inverse.
    for (Element x : g5.elements_by_length()) {
        auto shape = g5.rsk_shape(x);
        int total = 0;
        for (std::size_t i = 0; i < shape.size(); ++i) {
            total += shape[i];
            if (i + 1 < shape.size())
                CHECK(shape[i] >= shape[i + 1]);
        }
        CHECK(total == 5);
        CHECK(g5.rsk_shape(g5.inverse(x)) == shape);
    }
}

TEST_CASE("parabolic subgroups") {
    SymmetricGroup g(4);
    auto p12 = g.parabolic({1, 2});
    CHECK(p12.members.size() == 6);
    CHECK(g.one_line(p12.longest) == std::vector<int>{3, 2, 1, 4});
    auto p13 = g.parabolic({1, 3});
    CHECK(p13.members.size() == 4);
    CHECK(g.one_line(p13.longest) == std::vector<int>{2, 1, 4, 3});
    CHECK(g.parabolic({}).members.size() == 1);

    CHECK_THROWS_AS(g.parabolic({1, 1}), user_error);
    CHECK_THROWS_AS(g.parabolic({0}), user_error);
    CHECK_THROWS_AS(g.parabolic({4}), user_error);

    CHECK(g.in_parabolic(g.from_word({1, 2, 1}), {1, 2}));
    CHECK_FALSE(g.in_parabolic(g.simple(3), {1, 2}));
    for (Element x : p12.members)
        CHECK(g.in_parabolic(x, {1, 2}));
}

TEST_CASE("parabolic lift") {
    SymmetricGroup g6(6);
    std::vector<int> I{1, 2, 3, 4};
    Element x = g6.from_word({1, 4});
    Element lift = g6.parabolic_lift(x, I);
    CHECK(g6.one_line(lift) == std::vector<int>{6, 2, 1, 3, 5, 4});
    CHECK_THROWS_AS(g6.parabolic_lift(g6.simple(5), I), user_error);

    // Length identity l(lift) = l(w0) - l(w0_I) + l(x), over all of W_I.
    SymmetricGroup g4(4);
    auto par = g4.parabolic({2, 3});
    for (Element y : par.members) {
        Element l = g4.parabolic_lift(y, {2, 3});
        CHECK(g4.length(l) == 6 - 3 + g4.length(y));
        CHECK(l == g4.multiply(g4.multiply(y, par.longest), g4.longest()));
    }
}

TEST_CASE("word text form") {
    CHECK(SymmetricGroup::parse_word("").empty());
    CHECK(SymmetricGroup::parse_word("1,2,1") == Word{1, 2, 1});
    CHECK(SymmetricGroup::word_str({1, 2, 1}) == "1,2,1");
    CHECK(SymmetricGroup::word_str({}).empty());
    CHECK_THROWS_AS(SymmetricGroup::parse_word("0"), parse_error);
    CHECK_THROWS_AS(SymmetricGroup::parse_word("a"), parse_error);
    CHECK_THROWS_AS(SymmetricGroup::parse_word("1,,2"), parse_error);
    CHECK_THROWS_AS(SymmetricGroup::parse_word("1 2"), parse_error);
}

} // TEST_SUITE
