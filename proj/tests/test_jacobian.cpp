#include <catch2/catch_amalgamated.hpp>

#include "adezeta/groebner.hpp"

using namespace adezeta;

namespace {

struct Rng {
    uint64_t s = 0x853c49e6748fea9bull;
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
        poly_add_term(q, out, e, Rational(rng.range(-3, 3)));
    }
    return out;
}

// A second, deliberately naive Buchberger engine: FIFO pair queue, no
// criteria, top-reduction-only inner loop. Used to cross-check leading-term
// ideals.
std::vector<QPoly> naive_groebner(std::vector<QPoly> g) {
    QOps q;
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = i + 1; j < g.size(); ++j) pairs.emplace_back(i, j);
    size_t head = 0;
    while (head < pairs.size()) {
        auto [i, j] = pairs[head++];
        const Exp4& li = g[i].terms.begin()->first;
        const Exp4& lj = g[j].terms.begin()->first;
        Exp4 l = exp_lcm(li, lj);
        QPoly mi, mj;
        mi.terms.emplace(exp_sub(l, li), Rational(1) / g[i].terms.begin()->second);
        mj.terms.emplace(exp_sub(l, lj), Rational(1) / g[j].terms.begin()->second);
        QPoly s = poly_sub(q, poly_mul(q, mi, g[i]), poly_mul(q, mj, g[j]));
        QPoly r = q_normal_form(g, std::move(s));
        if (!r.is_zero()) {
            for (size_t k = 0; k < g.size(); ++k) pairs.emplace_back(k, g.size());
            g.push_back(std::move(r));
        }
    }
    return g;
}

std::set<Exp4, GrevlexDesc> minimal_leads(const std::vector<QPoly>& basis) {
    std::set<Exp4, GrevlexDesc> leads;
    for (auto& g : basis)
        if (!g.is_zero()) leads.insert(g.terms.begin()->first);
    std::set<Exp4, GrevlexDesc> out;
    for (auto& a : leads) {
        bool min = true;
        for (auto& b : leads)
            if (!(a == b) && exp_divides(b, a)) min = false;
        if (min) out.insert(a);
    }
    return out;
}

}  // namespace

TEST_CASE("groebner basis of a diagonal quadric") {
    auto ctx = groebner_build(poly_parse("w^2+x^2+y^2+z^2"));
    REQUIRE(ctx.basis.size() == 4);
    std::set<Exp4, GrevlexDesc> leads;
    for (auto& g : ctx.basis) {
        REQUIRE(g.terms.size() == 1);
        leads.insert(g.terms.begin()->first);
    }
    REQUIRE(leads.count(Exp4{1, 0, 0, 0}) == 1);
    REQUIRE(leads.count(Exp4{0, 0, 0, 1}) == 1);
}

TEST_CASE("groebner cross-check against an independent engine") {
    for (auto& fs : {"zwx-y^3", "zx^2-zwy+x^3", "zx^2-zwy+w^2x-wx^2"}) {
        QPoly f = poly_parse(fs);
        QOps q;
        auto ctx = groebner_build(f);
        std::vector<QPoly> gens;
        for (int v = 0; v < 4; ++v)
            if (!poly_partial(q, f, v).is_zero()) gens.push_back(poly_partial(q, f, v));
        auto other = naive_groebner(gens);
        REQUIRE(minimal_leads(ctx.basis) == minimal_leads(other));
    }
}

TEST_CASE("transform records reconstruct each basis element") {
    QOps q;
    for (auto& fs : {"zx^2-zwy+x^3", "w^2y^2-xy^3+xwz^2+w^2x^2"}) {
        auto ctx = groebner_build(poly_parse(fs));
        for (size_t i = 0; i < ctx.basis.size(); ++i) {
            QPoly acc;
            for (int v = 0; v < 4; ++v)
                acc = poly_add(q, acc, poly_mul(q, ctx.transforms[i][v], ctx.partials[v]));
            REQUIRE(acc.terms == ctx.basis[i].terms);
        }
    }
}

TEST_CASE("membership") {
    QPoly f = poly_parse("zx^2-zwy+x^3");
    QOps q;
    auto ctx = groebner_build(f);
    REQUIRE(membership(ctx, ctx.partials[0]));
    REQUIRE(!membership(ctx, poly_parse("wy")));
    REQUIRE(membership(ctx, poly_add(q, poly_mul(q, poly_parse("x"), ctx.partials[1]),
                                     poly_mul(q, poly_parse("y"), ctx.partials[2]))));
}

TEST_CASE("lift_cofactors reconstructs members") {
    QOps q;
    Rng rng;
    QPoly f = poly_parse("zx^2-zwy+w^2x-wx^2");
    auto ctx = groebner_build(f);
    auto one = poly_parse("1");
    {
        auto cof = lift_cofactors(ctx, ctx.partials[0]);
        QPoly acc;
        for (int v = 0; v < 4; ++v)
            acc = poly_add(q, acc, poly_mul(q, cof[v], ctx.partials[v]));
        REQUIRE(acc.terms == ctx.partials[0].terms);
    }
    int done = 0;
    for (int it = 0; it < 250 && done < 200; ++it) {
        QPoly h;
        for (int v = 0; v < 4; ++v)
            h = poly_add(q, h,
                         poly_mul(q, random_homogeneous(rng, 2, 3), ctx.partials[v]));
        if (h.is_zero()) continue;
        auto cof = lift_cofactors(ctx, h);
        QPoly acc;
        for (int v = 0; v < 4; ++v)
            acc = poly_add(q, acc, poly_mul(q, cof[v], ctx.partials[v]));
        REQUIRE(acc.terms == h.terms);
        for (int v = 0; v < 4; ++v)
            if (!cof[v].is_zero())
                REQUIRE(*cof[v].homogeneous_degree() ==
                        *h.homogeneous_degree() - (*f.homogeneous_degree() - 1));
        ++done;
    }
    REQUIRE(done == 200);
    REQUIRE_THROWS_AS(lift_cofactors(ctx, poly_parse("w^2")), groebner_error);
    (void)one;
}

TEST_CASE("equisingularity check") {
    // A4 cubic at p=5: the uv = t^5 situation, must be rejected
    REQUIRE(!equisingularity_check(poly_parse("zwx+w^2y+x^3-y^2x"), 5));
    REQUIRE(equisingularity_check(poly_parse("zwx+w^2y+x^3-y^2x"), 7));
    REQUIRE(equisingularity_check(poly_parse("zx^2-zwy+x^3"), 5));
    REQUIRE(equisingularity_check(poly_parse("w^3+x^3+y^3+z^3"), 7));
}

TEST_CASE("residue normal form agrees with Q and lifts exactly") {
    QOps q;
    Rng rng;
    QPoly f = poly_parse("zx^2-zwy+x^3");
    auto ctx = groebner_build(f);
    ResidueRing R(5, 8);
    ROps r{R};
    auto rgb = ResidueGB::build(ctx, R);
    for (int it = 0; it < 40; ++it) {
        QPoly h;
        for (int v = 0; v < 4; ++v)
            h = poly_add(q, h,
                         poly_mul(q, random_homogeneous(rng, 3, 3), ctx.partials[v]));
        RPoly hr = poly_reduce_mod(h, R);
        REQUIRE(rgb.normal_form(hr).is_zero());
        auto cof = rgb.lift(hr);
        RPoly acc;
        for (int v = 0; v < 4; ++v)
            acc = poly_add(r, acc, poly_mul(r, cof[v], poly_reduce_mod(ctx.partials[v], R)));
        RPoly diff = poly_sub(r, acc, hr);
        REQUIRE(diff.is_zero());
    }
    // non-members keep a nonzero normal form
    RPoly wy = poly_reduce_mod(poly_parse("wy"), R);
    REQUIRE(!rgb.normal_form(wy).is_zero());
}
