#include <catch2/catch_amalgamated.hpp>

#include "adezeta/polynomial.hpp"

using namespace adezeta;

namespace {

// xorshift generator for reproducible random polynomials
struct Rng {
    uint64_t s = 0x9e3779b97f4a7c15ull;
    uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    int range(int lo, int hi) { return lo + int(next() % uint64_t(hi - lo + 1)); }
};

QPoly random_homogeneous(Rng& rng, int deg, int nterms) {
    QOps q;
    QPoly out;
    for (int t = 0; t < nterms; ++t) {
        int e0 = rng.range(0, deg);
        int e1 = rng.range(0, deg - e0);
        int e2 = rng.range(0, deg - e0 - e1);
        Exp4 e{uint16_t(e0), uint16_t(e1), uint16_t(e2), uint16_t(deg - e0 - e1 - e2)};
        poly_add_term(q, out, e, Rational(rng.range(-5, 5)));
    }
    return out;
}

}  // namespace

TEST_CASE("poly_parse canonical forms") {
    QPoly f = poly_parse("z*x^2 - z*w*y + x^3");
    REQUIRE(f.terms.size() == 3);
    REQUIRE(*f.homogeneous_degree() == 3);
    // implicit multiplication as in the printed tables
    QPoly g = poly_parse("zx^2 - zwy + x^3");
    REQUIRE(g.terms == f.terms);

    QPoly zero = poly_parse("0");
    REQUIRE(zero.is_zero());
    REQUIRE(!zero.homogeneous_degree().has_value());

    REQUIRE_THROWS_AS(poly_parse("w^2 + x"), parse_error);
    REQUIRE_THROWS_AS(poly_parse("w^2 + "), parse_error);
    REQUIRE_THROWS_AS(poly_parse("v^2"), parse_error);
}

TEST_CASE("poly arithmetic basics") {
    QOps q;
    QPoly a = poly_parse("w+x");
    QPoly b = poly_parse("w-x");
    REQUIRE(poly_mul(q, a, b).terms == poly_parse("w^2-x^2").terms);
    REQUIRE(poly_add(q, a, QPoly{}).terms == a.terms);

    // freshman's dream over F_2
    ResidueRing F2(2, 1);
    ROps r{F2};
    RPoly xy = poly_reduce_mod(poly_parse("x+y"), F2);
    RPoly sq = poly_mul(r, xy, xy);
    RPoly expect = poly_reduce_mod(poly_parse("x^2+y^2"), F2);
    REQUIRE(sq.terms.size() == expect.terms.size());
    for (auto& [e, c] : expect.terms) REQUIRE(sq.terms.at(e).v == c.v);
}

TEST_CASE("ring axioms on random inputs") {
    Rng rng;
    QOps q;
    ResidueRing R(5, 4);
    ROps r{R};
    for (int it = 0; it < 50; ++it) {
        QPoly a = random_homogeneous(rng, 3, 3);
        QPoly b = random_homogeneous(rng, 3, 3);
        QPoly c = random_homogeneous(rng, 2, 3);
        // associativity and distributivity over Q
        auto lhs = poly_mul(q, poly_mul(q, a, b), c);
        auto rhs = poly_mul(q, a, poly_mul(q, b, c));
        REQUIRE(lhs.terms == rhs.terms);
        auto d1 = poly_mul(q, poly_add(q, a, b), c);
        auto d2 = poly_add(q, poly_mul(q, a, c), poly_mul(q, b, c));
        REQUIRE(d1.terms == d2.terms);
        // same over the residue ring
        auto ra = poly_reduce_mod(a, R), rb = poly_reduce_mod(b, R),
             rc = poly_reduce_mod(c, R);
        auto m1 = poly_mul(r, poly_mul(r, ra, rb), rc);
        auto m2 = poly_mul(r, ra, poly_mul(r, rb, rc));
        REQUIRE(m1.terms.size() == m2.terms.size());
        for (auto& [e, v] : m1.terms) REQUIRE(m2.terms.at(e).v == v.v);
    }
}

TEST_CASE("poly_reduce_mod and tracked precision") {
    ResidueRing R(5, 2);
    RPoly h = poly_reduce_mod(poly_parse("7x"), R);
    REQUIRE(h.terms.begin()->second.v == 7);
    REQUIRE(h.terms.begin()->second.floor == 2);

    // 1/5 has p in the denominator
    QOps q;
    QPoly bad = poly_scale(q, poly_parse("x"), Rational(1) / 5);
    REQUIRE_THROWS_AS(poly_reduce_mod(bad, R), precision_error);

    // -5 mod 5^5 = 4*5 + 4*5^2 + 4*5^3 + 4*5^4 (all digits above the first
    // are 4; the text that prints this expansion drops the leading 4)
    ResidueRing R5(5, 5);
    uint64_t v = R5.reduce(Int(-5));
    uint64_t expect = 4 * 5 + 4 * 25 + 4 * 125 + 4 * 625;
    REQUIRE(v == expect);
    REQUIRE(v == 5u * 5 * 5 * 5 * 5 - 5);
}

TEST_CASE("tracked residue floors") {
    ResidueRing R(5, 6);
    Rng rng;
    for (int it = 0; it < 100; ++it) {
        TrackedResidue a{rng.next() % R.modulus, rng.range(1, 6)};
        TrackedResidue b{rng.next() % R.modulus, rng.range(1, 6)};
        REQUIRE(tr_mul(R, a, b).floor == std::min(a.floor, b.floor));
        REQUIRE(tr_add(R, a, b).floor == std::min(a.floor, b.floor));
    }
    // dividing 5*a by 5 costs exactly one digit
    TrackedResidue a{35, 6};
    TrackedResidue d = tr_div_int(R, a, Int(5));
    REQUIRE(d.v == 7);
    REQUIRE(d.floor == 5);
    TrackedResidue u{7, 6};
    REQUIRE_THROWS_AS(tr_div_int(R, u, Int(5)), precision_error);
    // division by a unit costs nothing
    TrackedResidue e = tr_div_int(R, a, Int(7));
    REQUIRE(e.floor == 6);
    REQUIRE(R.mul(e.v, 7) == 35);
}

TEST_CASE("graded monomial basis sizes") {
    REQUIRE(monomial_basis(0).size() == 1);
    REQUIRE(monomial_basis(2).size() == 10);
    REQUIRE(monomial_basis(3).size() == 20);
    for (int d = 0; d <= 40; ++d) {
        size_t expect = size_t(d + 3) * (d + 2) * (d + 1) / 6;
        REQUIRE(monomial_basis(d).size() == expect);
    }
    // grevlex: descending, leading monomial of degree 2 is w^2, trailing z^2
    auto m2 = monomial_basis(2);
    REQUIRE(m2.front() == Exp4{2, 0, 0, 0});
    REQUIRE(m2.back() == Exp4{0, 0, 0, 2});
    // grevlex puts x^2 above wy
    REQUIRE(grevlex_greater(Exp4{0, 2, 0, 0}, Exp4{1, 0, 1, 0}));
    // graded lex puts wy above x^2
    REQUIRE(gradedlex_greater(Exp4{1, 0, 1, 0}, Exp4{0, 2, 0, 0}));
}
