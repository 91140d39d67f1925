#include <catch2/catch_amalgamated.hpp>

#include "adezeta/oracle.hpp"

using namespace adezeta;

TEST_CASE("field construction") {
    auto F5 = build_field(5, 1);
    REQUIRE(F5.q == 5);
    REQUIRE(F5.mul(2, 3) == 1);
    REQUIRE(F5.add(4, 3) == 2);

    auto F25 = build_field(5, 2);
    REQUIRE(F25.q == 25);
    // Frobenius x -> x^5 has order 2: x^25 = x for all x
    for (uint64_t x = 0; x < 25; ++x) REQUIRE(F25.pow(x, 25) == x);
    bool nontrivial = false;
    for (uint64_t x = 1; x < 25; ++x)
        if (F25.pow(x, 5) != x) nontrivial = true;
    REQUIRE(nontrivial);

    auto F343 = build_field(7, 3);
    REQUIRE(F343.q == 343);
    for (uint64_t x : {3ull, 19ull, 80ull, 200ull, 342ull})
        REQUIRE(F343.pow(x, 343) == x);
    // multiplicative order of a nonzero element divides q - 1
    for (uint64_t x : {2ull, 5ull, 100ull, 341ull}) {
        uint64_t ord = F343.element_order(x);
        REQUIRE((F343.q - 1) % ord == 0);
        REQUIRE(F343.pow(x, ord) == 1);
    }
}

TEST_CASE("point counts") {
    // hyperplane: q^2 + q + 1
    for (auto& [p, r] : std::vector<std::pair<uint64_t, int>>{{5, 1}, {5, 2}, {7, 1}}) {
        auto F = build_field(p, r);
        Int q = Int(F.q);
        REQUIRE(count_points(poly_parse("w"), F) == q * q + q + 1);
    }
    // the table fixtures over F_5
    auto F5 = build_field(5, 1);
    REQUIRE(count_points(poly_parse("zwx-y^3"), F5) == 31);
    REQUIRE(count_points(poly_parse("zx^2-zwy+x^3"), F5) == 36);
    auto F25 = build_field(5, 2);
    REQUIRE(count_points(poly_parse("zx^2-zwy+x^3"), F25) == 676);
    REQUIRE(count_points(poly_parse("zwx-yw^2-y^3-wy^2"), F25) == 701);
}

TEST_CASE("counts are invariant under linear coordinate changes") {
    auto F5 = build_field(5, 1);
    QPoly f = poly_parse("zx^2-zwy+x^3");
    Int base = count_points(f, F5);
    // three fixed invertible substitutions
    std::vector<std::array<const char*, 4>> subs{
        {"w+x", "x", "y", "z"},
        {"w", "x+2z", "y", "z"},
        {"z", "w", "x", "y"},  // cyclic permutation
    };
    QOps q;
    for (auto& sub : subs) {
        std::array<QPoly, 4> images;
        for (int i = 0; i < 4; ++i) images[size_t(i)] = poly_parse(sub[size_t(i)]);
        QPoly g;
        for (auto& [e, c] : f.terms) {
            QPoly term;
            term.terms.emplace(Exp4{0, 0, 0, 0}, c);
            for (int i = 0; i < 4; ++i)
                for (int k = 0; k < e[i]; ++k) term = poly_mul(q, term, images[size_t(i)]);
            g = poly_add(q, g, term);
        }
        REQUIRE(count_points(g, F5) == base);
    }
}

TEST_CASE("zeta series check") {
    // hyperplane zeta vs counts q^{2r} + q^r + 1
    auto z = assemble_zeta({Int(1)}, 5);
    std::vector<Int> counts;
    for (int r = 1; r <= 3; ++r) {
        Int q = int_pow(Int(5), unsigned(r));
        counts.push_back(q * q + q + 1);
    }
    REQUIRE(zeta_series_check(z, counts));

    // deliberately perturbed p(t) fails
    auto bad = assemble_zeta({Int(1), Int(-5)}, 5);
    REQUIRE(!zeta_series_check(bad, counts));

    // paper row: zx^2-zwy+x^3 with p(t) = 1 - 5t against brute force r=1..3
    auto zr = assemble_zeta({Int(1), Int(-5)}, 5);
    std::vector<Int> brute;
    for (int r = 1; r <= 3; ++r) brute.push_back(count_points(poly_parse("zx^2-zwy+x^3"),
                                                              build_field(5, r)));
    REQUIRE(zeta_series_check(zr, brute));
}
