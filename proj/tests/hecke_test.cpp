#include "doctest.h"

#include "cellkit/errors.hpp"
#include "cellkit/hecke.hpp"

#include <filesystem>
#include <fstream>
#include <string>

using namespace cellkit;

namespace {

Laurent L(const char* text) { return Laurent::parse(text); }

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

} // namespace

TEST_SUITE("hecke") {

TEST_CASE("standard basis arithmetic") {
    SymmetricGroup g(2);
    HeckeAlgebra alg(g);
    HeckeElt He = alg.unit();
    HeckeElt Hs = alg.basis_vector(HBasis::standard, g.simple(1));

    // Quadratic relation: H_s H_s = H_e + (v^-1 - v) H_s.
    HeckeElt sq = alg.multiply(Hs, Hs);
    CHECK(sq.coeff(g.identity()) == L("0:1"));
    CHECK(sq.coeff(g.simple(1)) == L("-1:1,1:-1"));

    // Unit, zero, scaling.
    CHECK(alg.multiply(He, Hs) == Hs);
    CHECK(alg.multiply(Hs, He) == Hs);
    CHECK(alg.multiply(alg.zero(), Hs).is_zero());
    HeckeElt scaled = Hs;
    scaled.scale(L("2:1"));
    CHECK(scaled.coeff(g.simple(1)) == L("2:1"));

    // Mixed-basis arithmetic is rejected.
    HeckeElt wrong = alg.basis_vector(HBasis::kl, g.simple(1));
    CHECK_THROWS_AS(Hs + wrong, user_error);
}

TEST_CASE("length-additive products and the braid relation") {
    SymmetricGroup g(3);
    HeckeAlgebra alg(g);
    auto H = [&](Element x) { return alg.basis_vector(HBasis::standard, x); };
    Element s1 = g.simple(1), s2 = g.simple(2);

    CHECK(alg.multiply(H(s1), H(s2)) == H(g.multiply(s1, s2)));
    HeckeElt b1 = alg.multiply(alg.multiply(H(s1), H(s2)), H(s1));
    HeckeElt b2 = alg.multiply(alg.multiply(H(s2), H(s1)), H(s2));
    CHECK(b1 == b2);
    CHECK(b1 == H(g.longest()));

    // Rank mismatch is rejected.
    SymmetricGroup g2(2);
    HeckeAlgebra alg2(g2);
    CHECK_THROWS_AS(H(s1) + alg2.basis_vector(HBasis::standard, g2.simple(1)), user_error);
}

TEST_CASE("bar involution") {
    SymmetricGroup g(3);
    HeckeAlgebra alg(g);
    auto H = [&](Element x) { return alg.basis_vector(HBasis::standard, x); };

    // bar(H_s) = H_s + (v - v^-1) H_e.
    HeckeElt bs = alg.bar(H(g.simple(1)));
    CHECK(bs.coeff(g.simple(1)) == L("0:1"));
    CHECK(bs.coeff(g.identity()) == L("-1:-1,1:1"));

    for (Element x : g.elements_by_length()) {
        HeckeElt a = H(x);
        a.scale(L("2:1")); // v^2 H_x -> bar must give v^-2 bar(H_x)
        CHECK(alg.bar(alg.bar(a)) == a);
    }

    // Ring homomorphism on a sample pair.
    HeckeElt a = H(g.simple(1)) + H(g.from_word({1, 2}));
    HeckeElt b = H(g.simple(2));
    b.scale(L("1:1"));
    CHECK(alg.bar(alg.multiply(a, b)) == alg.multiply(alg.bar(a), alg.bar(b)));
}

TEST_CASE("kl table of S3 is frozen") {
    SymmetricGroup g(3);
    KLTable t = KLTable::compute(g);
    Element e = g.identity(), s1 = g.simple(1), s2 = g.simple(2);
    Element s1s2 = g.from_word({1, 2}), s2s1 = g.from_word({2, 1}), w0 = g.longest();

    // In S3 every KL polynomial is v^(l(y)-l(x)) for x <= y.
    CHECK(t.entry(e, e) == L("0:1"));
    CHECK(t.entry(e, s1) == L("1:1"));
    CHECK(t.entry(e, s1s2) == L("2:1"));
    CHECK(t.entry(s1, s1s2) == L("1:1"));
    CHECK(t.entry(s2, s1s2) == L("1:1"));
    CHECK(t.entry(e, w0) == L("3:1"));
    CHECK(t.entry(s1, w0) == L("2:1"));
    CHECK(t.entry(s1s2, w0) == L("1:1"));
    CHECK(t.entry(s2s1, w0) == L("1:1"));
    CHECK(t.entry(w0, w0) == L("0:1"));
    CHECK(t.entry(s1, s2).is_zero());
    CHECK(t.entry(s1s2, s2s1).is_zero());
    CHECK(t.entry(w0, e).is_zero());

    CHECK(t.mu(e, s1) == 1);
    CHECK(t.mu(s1, s1s2) == 1);
    CHECK(t.mu(e, s1s2) == 0);
    CHECK(t.mu(s1s2, w0) == 1);
    CHECK(t.mu(e, w0) == 0);
}

TEST_CASE("first non-monomial kl polynomial in S4") {
    SymmetricGroup g(4);
    KLTable t = KLTable::compute(g);
    Element joseph = g.from_word({2, 1, 3, 2}); // one-line [3,4,1,2]
    CHECK(g.one_line(joseph) == std::vector<int>{3, 4, 1, 2});
    CHECK(t.entry(g.identity(), joseph) == L("2:1,4:1"));
    CHECK(t.entry(g.simple(2), joseph) == L("1:1,3:1"));
}

TEST_CASE("kl columns satisfy the defining properties") {
    for (int rank = 2; rank <= 4; ++rank) {
        SymmetricGroup g(rank);
        HeckeAlgebra alg(g);
        KLTable t = KLTable::compute(g);
        for (Element y : g.elements_by_length()) {
            HeckeElt col = t.kl_basis(y);
            CHECK(alg.bar(col) == col); // bar-invariance
            CHECK(t.entry(y, y) == L("0:1"));
            for (Element x : g.elements_by_length()) {
                const Laurent& h = t.entry(x, y);
                CHECK(h.is_zero() == !g.bruhat_leq(x, y)); // full interval support
                if (!h.is_zero() && x != y)
                    CHECK(h.min_degree() >= 1);
            }
        }
    }
}

TEST_CASE("kl recursion is descent-independent") {
    SymmetricGroup g(3);
    HeckeAlgebra alg(g);
    KLTable t = KLTable::compute(g);
    for (Element y : g.elements_by_length()) {
        if (y == g.identity())
            continue;
        for (int s = 1; s < g.rank(); ++s) {
            if (!g.has_left_descent(y, s))
                continue;
            Element sy = g.multiply_simple_left(s, y);
            HeckeElt rhs = alg.multiply(t.kl_basis(g.simple(s)), t.kl_basis(sy));
            for (const auto& [zid, h] : t.column(sy)) {
                Element z = g.element(zid);
                if (z == sy)
                    continue;
                Int mu = t.mu(z, sy);
                if (mu != 0 && g.has_left_descent(z, s))
                    rhs.add_scaled(t.kl_basis(z), Laurent::monomial(0, -mu));
            }
            CHECK(rhs == t.kl_basis(y));
        }
    }
}

TEST_CASE("basis conversions round trip") {
    SymmetricGroup g(4);
    HeckeAlgebra alg(g);
    KLTable t = KLTable::compute(g);

    for (Element y : g.elements_by_length()) {
        HeckeElt unit_kl = alg.basis_vector(HBasis::kl, y);
        CHECK(t.to_kl(t.from_kl(unit_kl)) == unit_kl);
        CHECK(t.from_kl(unit_kl) == t.kl_basis(y));
        HeckeElt unit_dual = alg.basis_vector(HBasis::dual_kl, y);
        CHECK(t.to_dual(t.from_dual(unit_dual)) == unit_dual);
        CHECK(t.from_dual(unit_dual) == t.dual_basis(y));
    }

    HeckeElt mixed = alg.basis_vector(HBasis::standard, g.identity(), L("0:-3,1:1"));
    mixed += alg.basis_vector(HBasis::standard, g.simple(1), L("0:7"));
    mixed += alg.basis_vector(HBasis::standard, g.longest(), L("-2:1"));
    CHECK(t.from_kl(t.to_kl(mixed)) == mixed);
    CHECK(t.from_dual(t.to_dual(mixed)) == mixed);
}

TEST_CASE("dual kl basis in S2 is frozen") {
    SymmetricGroup g(2);
    KLTable t = KLTable::compute(g);
    Element e = g.identity(), s = g.simple(1);

    // hat-H_e = H_e - v H_s.
    HeckeElt de = t.dual_basis(e);
    CHECK(de.coeff(e) == L("0:1"));
    CHECK(de.coeff(s) == L("1:-1"));
    CHECK(t.dual_basis(s).coeff(s) == L("0:1"));

    // underline-H_s = v hat-H_e + (1 + v^2) hat-H_s.
    HeckeElt d = t.to_dual(t.kl_basis(s));
    CHECK(d.coeff(e) == L("1:1"));
    CHECK(d.coeff(s) == L("0:1,2:1"));
}

TEST_CASE("kl structure constants in S3") {
    SymmetricGroup g(3);
    KLTable t = KLTable::compute(g);
    Element s1 = g.simple(1), s2 = g.simple(2);
    Element s1s2 = g.from_word({1, 2}), w0 = g.longest();

    HeckeElt p = t.kl_product(s1, s2);
    CHECK(p.basis() == HBasis::kl);
    CHECK(p.terms().size() == 1);
    CHECK(p.coeff(s1s2) == L("0:1"));

    HeckeElt q = t.kl_product(s1s2, s1);
    CHECK(q.terms().size() == 2);
    CHECK(q.coeff(w0) == L("0:1"));
    CHECK(q.coeff(s1) == L("0:1"));

    HeckeElt r = t.kl_product(s1, s1);
    CHECK(r.terms().size() == 1);
    CHECK(r.coeff(s1) == L("-1:1,1:1"));

    HeckeElt top = t.kl_product(w0, w0);
    CHECK(top.terms().size() == 1);
    CHECK(top.coeff(w0) == L("-3:1,-1:2,1:2,3:1")); // product over l(w0)=3 of (v+v^-1)-type factors
}

TEST_CASE("threaded computation matches serial") {
    SymmetricGroup g(4);
    KLTable serial = KLTable::compute(g, {1});
    KLTable parallel = KLTable::compute(g, {4});
    CHECK(serial == parallel);
}

TEST_CASE("save and load round trip") {
    auto dir = fresh_dir("cellkit_hecke_io");
    SymmetricGroup g(3);
    KLTable t = KLTable::compute(g);
    auto file = dir / "table.klcache";
    t.save(file);
    KLTable back = KLTable::load(file, g);
    CHECK(back == t);
    CHECK(back.serialize() == t.serialize());

    // Header shape is part of the contract.
    std::string text = t.serialize();
    CHECK(text.rfind("KLCACHE v1 typeA rank=3 convention=soergel\n", 0) == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("load rejects corrupted tables") {
    auto dir = fresh_dir("cellkit_hecke_bad");
    SymmetricGroup g(3);
    KLTable t = KLTable::compute(g);
    const std::string good = t.serialize();
    auto file = dir / "bad.klcache";
    auto expect_throw = [&](const std::string& text, auto tag) {
        write_text(file, text);
        CHECK_THROWS_AS(KLTable::load(file, g), decltype(tag));
    };

    expect_throw(replace_once(good, "KLCACHE v1", "KLCACHE v2"), parse_error{""});
    expect_throw(replace_once(good, "rank=3", "rank=4"), rank_mismatch_error{""});
    expect_throw(replace_once(good, "1,2,1|1,2,1|0:1\n", ""), invariant_error{""});
    expect_throw(replace_once(good, "|1|1:1", "|1|0:1"), invariant_error{""});
    expect_throw(replace_once(good, "|1|1:1", "|1|"), parse_error{""});
    expect_throw(replace_once(good, "1,2,1|1,2,1|0:1", "2,1,2|2,1,2|0:1"), parse_error{""});
    expect_throw(replace_once(good, "||0:1\n|1|1:1\n", "|1|1:1\n||0:1\n"), parse_error{""});
    expect_throw(replace_once(good, "||0:1\n", "||0:1|x\n"), parse_error{""});
    CHECK_THROWS_AS(KLTable::load(dir / "missing.klcache", g), user_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("disk cache") {
    auto dir = fresh_dir("cellkit_hecke_cache");
    SymmetricGroup g(3);
    CHECK(cache_file_name(3) == "typeA_rank3.klcache");

    bool from_cache = true;
    KLTable first = cached_kl_table(g, dir, {}, &from_cache);
    CHECK_FALSE(from_cache);
    CHECK(std::filesystem::exists(dir / cache_file_name(3)));

    KLTable second = cached_kl_table(g, dir, {}, &from_cache);
    CHECK(from_cache);
    CHECK(first == second);

    // Empty directory path disables caching entirely.
    KLTable uncached = cached_kl_table(g, {}, {}, &from_cache);
    CHECK_FALSE(from_cache);
    CHECK(uncached == first);
    std::filesystem::remove_all(dir);
}

} // TEST_SUITE
