#include <catch2/catch_amalgamated.hpp>

#include "adezeta/forms.hpp"

using namespace adezeta;

namespace {

struct Rng {
    uint64_t s = 0x2545f4914f6cdd1dull;
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
        poly_add_term(q, out, e, Rational(rng.range(-4, 4)));
    }
    return out;
}

QForm random_form(Rng& rng, int j, int deg) {
    QForm w(j);
    for (auto& c : w.comps) c = random_homogeneous(rng, deg, 3);
    return w;
}

}  // namespace

TEST_CASE("weight") {
    QForm w(2);
    w.comps[size_t(subset_index(2, {0, 1, -1, -1}))] = poly_parse("x^2y");
    REQUIRE(weight(w) == 5);

    QForm top(4);
    top.comps[0] = poly_parse("1");
    REQUIRE(weight(top) == 4);

    QForm zero_form(0);
    zero_form.comps[0] = poly_parse("w");
    REQUIRE(weight(zero_form) == 1);
}

TEST_CASE("koszul wedge basics") {
    QOps q;
    // f = w^2, omega = 1: df ^ 1 = 2w dw
    QForm one(0);
    one.comps[0] = poly_parse("1");
    QForm dw = koszul_wedge(q, poly_parse("w^2"), one);
    REQUIRE(dw.comps[size_t(subset_index(1, {0, -1, -1, -1}))].terms ==
            poly_parse("2w").terms);

    // f = wx, omega = dw: df^omega = x dw^dw + w dx^dw = -w dw^dx
    QForm base(1);
    base.comps[size_t(subset_index(1, {0, -1, -1, -1}))] = poly_parse("1");
    QForm out = koszul_wedge(q, poly_parse("wx"), base);
    REQUIRE(out.comps[size_t(subset_index(2, {0, 1, -1, -1}))].terms ==
            poly_parse("-w").terms);
}

TEST_CASE("de rham basics") {
    QOps q;
    // d(x dw) = dx ^ dw = -dw^dx
    QForm w(1);
    w.comps[size_t(subset_index(1, {0, -1, -1, -1}))] = poly_parse("x");
    QForm dwx = de_rham(q, w);
    REQUIRE(dwx.comps[size_t(subset_index(2, {0, 1, -1, -1}))].terms ==
            poly_parse("-1").terms);

    // d(w dx^dy^dz) = dw^dx^dy^dz
    QForm w3(3);
    w3.comps[size_t(subset_index(3, {1, 2, 3, -1}))] = poly_parse("w");
    REQUIRE(de_rham(q, w3).comps[0].terms == poly_parse("1").terms);
}

TEST_CASE("euler contraction") {
    QOps q;
    QForm dw(1);
    dw.comps[size_t(subset_index(1, {0, -1, -1, -1}))] = poly_parse("1");
    REQUIRE(euler_contraction(q, dw).comps[0].terms == poly_parse("w").terms);

    // iota_E(dw^dx) = w dx - x dw
    QForm dwdx(2);
    dwdx.comps[size_t(subset_index(2, {0, 1, -1, -1}))] = poly_parse("1");
    QForm c = euler_contraction(q, dwdx);
    REQUIRE(c.comps[size_t(subset_index(1, {1, -1, -1, -1}))].terms ==
            poly_parse("w").terms);
    REQUIRE(c.comps[size_t(subset_index(1, {0, -1, -1, -1}))].terms ==
            poly_parse("-x").terms);
}

TEST_CASE("twisted differential") {
    // f = w^3 (N=3), omega = x dw (weight 2)
    QForm w(1);
    w.comps[size_t(subset_index(1, {0, -1, -1, -1}))] = poly_parse("x");
    QForm out = twisted_differential(poly_parse("w^3"), w);
    // f*d(omega) = -w^3 dw^dx; df^omega = 3w^2 dw ^ x dw = 0
    REQUIRE(out.comps[size_t(subset_index(2, {0, 1, -1, -1}))].terms ==
            poly_parse("-w^3").terms);

    // omega with d(omega)=0 and df^omega=0 maps to 0
    QForm closed(1);
    closed.comps[size_t(subset_index(1, {0, -1, -1, -1}))] = poly_parse("w");
    QForm z = twisted_differential(poly_parse("w^3"), closed);
    REQUIRE(z.is_zero());
}

TEST_CASE("differential identities on random forms") {
    Rng rng;
    QOps q;
    int checked = 0;
    for (int it = 0; it < 200; ++it) {
        int N = (it % 2) ? 3 : 4;
        QPoly f = random_homogeneous(rng, N, 4);
        if (f.is_zero()) continue;
        int j = it % 3;
        QForm w = random_form(rng, j, rng.range(1, 3));
        if (w.is_zero()) continue;

        QForm dd = de_rham(q, de_rham(q, w));
        for (auto& c : dd.comps) REQUIRE(c.is_zero());
        QForm kk = koszul_wedge(q, f, koszul_wedge(q, f, w));
        for (auto& c : kk.comps) REQUIRE(c.is_zero());
        if (j >= 2) {
            QForm cc = euler_contraction(q, euler_contraction(q, w));
            for (auto& c : cc.comps) REQUIRE(c.is_zero());
        }
        // (d' + d'')^2 = 0 with d''(v) = -(|v|/N) df^v
        if (j <= 2) {
            int wt = weight(w);
            QForm dpw = de_rham(q, w);
            QForm dppw = scale_form(q, koszul_wedge(q, f, w), Rational(-wt) / N);
            QForm t1 = de_rham(q, dpw);
            QForm t2 = scale_form(q, koszul_wedge(q, f, dpw), Rational(-wt) / N);
            QForm t3 = de_rham(q, dppw);
            QForm t4 =
                scale_form(q, koszul_wedge(q, f, dppw), Rational(-(wt + N)) / N);
            QForm total(j + 2);
            for (size_t i = 0; i < total.comps.size(); ++i)
                total.comps[i] = poly_add(q, poly_add(q, t1.comps[i], t2.comps[i]),
                                          poly_add(q, t3.comps[i], t4.comps[i]));
            for (auto& c : total.comps) REQUIRE(c.is_zero());
            ++checked;
        }
        // weight bookkeeping
        QForm kw = koszul_wedge(q, f, w);
        if (!kw.is_zero()) REQUIRE(weight(kw) == weight(w) + N);
        QForm dw = de_rham(q, w);
        if (!dw.is_zero()) REQUIRE(weight(dw) == weight(w));
    }
    REQUIRE(checked >= 60);
}

TEST_CASE("d_f squares to zero") {
    Rng rng;
    int checked = 0;
    for (int it = 0; it < 60; ++it) {
        QPoly f = random_homogeneous(rng, (it % 2) ? 3 : 4, 4);
        if (f.is_zero()) continue;
        QForm w = random_form(rng, it % 2, rng.range(1, 3));
        if (w.is_zero()) continue;
        QForm one_step = twisted_differential(f, w);
        if (one_step.is_zero()) continue;
        QForm two_step = twisted_differential(f, one_step);
        for (auto& c : two_step.comps) REQUIRE(c.is_zero());
        ++checked;
    }
    REQUIRE(checked >= 20);
}
