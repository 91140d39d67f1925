#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pages.hpp"

// Buchberger machinery for the Jacobian ideal (f_w, f_x, f_y, f_z): reduced
// Groebner basis over Q under the global grevlex order, ideal membership,
// and cofactor lifting. The residue-ring twin performs the same division mod
// p^N; equisingularity makes its leading coefficients p-units.

namespace adezeta {

struct groebner_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool exp_divides(const Exp4& a, const Exp4& b) {  // a | b
    for (int i = 0; i < 4; ++i)
        if (a[i] > b[i]) return false;
    return true;
}
inline Exp4 exp_sub(const Exp4& a, const Exp4& b) {
    return {uint16_t(a[0] - b[0]), uint16_t(a[1] - b[1]), uint16_t(a[2] - b[2]),
            uint16_t(a[3] - b[3])};
}
inline Exp4 exp_lcm(const Exp4& a, const Exp4& b) {
    return {uint16_t(std::max(a[0], b[0])), uint16_t(std::max(a[1], b[1])),
            uint16_t(std::max(a[2], b[2])), uint16_t(std::max(a[3], b[3]))};
}

// Normal form of h against basis; optionally tracks the quotient of each
// basis element.
inline QPoly q_normal_form(const std::vector<QPoly>& basis, QPoly h,
                           std::vector<QPoly>* quotients = nullptr) {
    QOps q;
    if (quotients) quotients->assign(basis.size(), QPoly{});
    QPoly rem;
    while (!h.is_zero()) {
        auto [le, lc] = *h.terms.begin();
        bool reduced = false;
        for (size_t i = 0; i < basis.size(); ++i) {
            const auto& [ge, gc] = *basis[i].terms.begin();
            if (!exp_divides(ge, le)) continue;
            Rational coef = lc / gc;
            Exp4 shift = exp_sub(le, ge);
            QPoly mult;
            mult.terms.emplace(shift, coef);
            if (quotients) (*quotients)[i] = poly_add(q, (*quotients)[i], mult);
            h = poly_sub(q, h, poly_mul(q, mult, basis[i]));
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.terms.emplace(le, lc);
            h.terms.erase(h.terms.begin());
        }
    }
    return rem;
}

struct GroebnerContext {
    QPoly f;
    int N = 0;
    std::array<QPoly, 4> partials;
    std::vector<QPoly> basis;                       // reduced, primitive integer
    std::vector<std::array<QPoly, 4>> transforms;   // basis[i] = sum transforms[i][v]*partials[v]
};

namespace detail {

// Express target as a combination of the 4 partials (homogeneous linear
// solve at one degree).
inline std::optional<std::array<QPoly, 4>> q_express_in_partials(
    const QPoly& f, const QPoly& target) {
    QOps q;
    if (target.is_zero()) return std::array<QPoly, 4>{};
    int N = *f.homogeneous_degree();
    int m = *target.homogeneous_degree();
    int dq = m - (N - 1);
    if (dq < 0) return std::nullopt;
    auto cols = koszul_matrix(f, 3, dq);
    auto mons = monomial_basis(m);
    std::map<Exp4, size_t, GrevlexDesc> idx;
    for (size_t i = 0; i < mons.size(); ++i) idx.emplace(mons[i], i);
    QVec b(mons.size(), Rational(0));
    for (auto& [e, c] : target.terms) b[idx.at(e)] = c;
    // echelon with combination tracking
    size_t nc = cols.size();
    std::vector<std::pair<size_t, std::pair<QVec, QVec>>> basis;
    for (size_t j = 0; j < nc; ++j) {
        QVec v = cols[j];
        QVec combo(nc, Rational(0));
        combo[j] = 1;
        for (auto& [p, vc] : basis) {
            if (v[p] != 0) {
                Rational coef = v[p] / vc.first[p];
                for (size_t i = 0; i < v.size(); ++i)
                    if (vc.first[i] != 0) v[i] -= coef * vc.first[i];
                for (size_t i = 0; i < nc; ++i)
                    if (vc.second[i] != 0) combo[i] -= coef * vc.second[i];
            }
        }
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) {
                basis.emplace_back(i, std::make_pair(std::move(v), std::move(combo)));
                break;
            }
    }
    QVec sol(nc, Rational(0));
    for (auto& [p, vc] : basis) {
        if (b[p] != 0) {
            Rational coef = b[p] / vc.first[p];
            for (size_t i = 0; i < b.size(); ++i)
                if (vc.first[i] != 0) b[i] -= coef * vc.first[i];
            for (size_t i = 0; i < nc; ++i) sol[i] += coef * vc.second[i];
        }
    }
    for (auto& x : b)
        if (x != 0) return std::nullopt;
    // unflatten: column j = (component ci, monomial mi); the Omega^3
    // component with missing variable v carries sign insert_sign(v,I).
    auto src_mons = monomial_basis(dq);
    std::array<QPoly, 4> out;
    QOps qq;
    const auto& sub3 = form_subsets()[3];
    for (size_t j = 0; j < nc; ++j) {
        if (sol[j] == 0) continue;
        size_t ci = j / src_mons.size();
        const auto& I = sub3[ci];
        int vmiss = 0;
        for (int v = 0; v < 4; ++v)
            if (insert_sign(v, I, 3)) vmiss = v;
        int s = insert_sign(vmiss, I, 3);
        poly_add_term(qq, out[vmiss], src_mons[j % src_mons.size()],
                      Rational(s) * sol[j]);
    }
    return out;
}

}  // namespace detail

inline GroebnerContext groebner_build(const QPoly& f) {
    QOps q;
    GroebnerContext ctx;
    ctx.f = f;
    ctx.N = *f.homogeneous_degree();
    for (int v = 0; v < 4; ++v) ctx.partials[v] = poly_partial(q, f, v);

    std::vector<QPoly> g;
    for (int v = 0; v < 4; ++v)
        if (!ctx.partials[v].is_zero()) g.push_back(ctx.partials[v]);

    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = i + 1; j < g.size(); ++j) pairs.emplace_back(i, j);

    while (!pairs.empty()) {
        auto [i, j] = pairs.back();
        pairs.pop_back();
        const Exp4& li = g[i].terms.begin()->first;
        const Exp4& lj = g[j].terms.begin()->first;
        Exp4 l = exp_lcm(li, lj);
        if (l == exp_add(li, lj)) continue;  // product criterion
        // S-polynomial
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
    // reduced basis: drop elements whose lead is divisible by another lead,
    // then fully reduce tails
    std::vector<QPoly> reduced;
    for (size_t i = 0; i < g.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < g.size(); ++j) {
            if (i == j) continue;
            if (exp_divides(g[j].terms.begin()->first, g[i].terms.begin()->first) &&
                !(j > i && g[j].terms.begin()->first == g[i].terms.begin()->first))
                redundant = true;
        }
        if (!redundant) reduced.push_back(g[i]);
    }
    for (size_t i = 0; i < reduced.size(); ++i) {
        std::vector<QPoly> others;
        for (size_t j = 0; j < reduced.size(); ++j)
            if (j != i) others.push_back(reduced[j]);
        reduced[i] = q_normal_form(others, reduced[i]);
    }
    std::sort(reduced.begin(), reduced.end(), [](const QPoly& a, const QPoly& b) {
        return grevlex_greater(b.terms.begin()->first, a.terms.begin()->first);
    });
    // primitive integer scaling
    for (auto& e : reduced) {
        QVec coeffs;
        for (auto& [ex, c] : e.terms) coeffs.push_back(c);
        auto ints = q_primitive(coeffs);
        if (ints[0] < 0)
            for (auto& x : ints) x = -x;
        size_t k = 0;
        QPoly scaled;
        for (auto& [ex, c] : e.terms) scaled.terms.emplace(ex, Rational(ints[k++]));
        e = std::move(scaled);
    }
    ctx.basis = std::move(reduced);
    for (auto& e : ctx.basis) {
        auto t = detail::q_express_in_partials(f, e);
        if (!t) throw groebner_error("Groebner element failed to lift to the partials");
        ctx.transforms.push_back(*t);
    }
    return ctx;
}

inline bool membership(const GroebnerContext& ctx, const QPoly& h) {
    return q_normal_form(ctx.basis, h).is_zero();
}

// h = q_w f_w + q_x f_x + q_y f_y + q_z f_z, exactly.
inline std::array<QPoly, 4> lift_cofactors(const GroebnerContext& ctx, const QPoly& h) {
    QOps q;
    std::vector<QPoly> quot;
    QPoly r = q_normal_form(ctx.basis, h, &quot);
    if (!r.is_zero()) throw groebner_error("lift_cofactors on a non-member");
    std::array<QPoly, 4> out;
    for (size_t i = 0; i < ctx.basis.size(); ++i) {
        if (quot[i].is_zero()) continue;
        for (int v = 0; v < 4; ++v)
            out[v] = poly_add(q, out[v], poly_mul(q, quot[i], ctx.transforms[i][v]));
    }
    return out;
}

// True iff the graded Jacobian quotient dimensions over F_p match those over
// Q for all degrees up to the stable bound (torsion-freeness proxy).
inline bool equisingularity_check(const QPoly& f, uint64_t p, int extra = 2) {
    int N = *f.homogeneous_degree();
    int bound = 3 * (N - 2) + extra;
    for (int m = 0; m <= bound; ++m)
        if (quotient_dim_q(f, m) != quotient_dim_fp(f, m, p)) return false;
    return true;
}

// ---- residue-ring division ------------------------------------------------

// Groebner machinery over the chain ring Z/p^N. Leading coefficients are
// normalized to powers of p; a term reduces against an element whose leading
// monomial divides it and whose lead valuation does not exceed the term's.
// Beyond the usual S-pairs, annihilator pairs p^{N-v} g keep the basis
// saturated, which covers lifts whose mod-p initial ideal differs from the
// rational one. Every element carries exact cofactors over the 4 partials.
struct ResidueGB {
    ResidueRing R;
    std::vector<RPoly> basis;
    std::vector<int> lead_val;
    std::vector<std::array<RPoly, 4>> transforms;

    static ResidueGB build(const GroebnerContext& ctx, const ResidueRing& R) {
        ResidueGB out;
        out.R = R;
        ROps ops{R};
        struct El {
            RPoly g;
            std::array<RPoly, 4> cof;
        };
        std::vector<El> G;
        auto normalize = [&](El e) -> std::optional<El> {
            if (e.g.is_zero()) return std::nullopt;
            limb lc = e.g.terms.begin()->second.v;
            int v = R.valuation(lc);
            limb inv = R.inv(lc / R.ppow(v));
            TrackedResidue s{inv, R.n_work};
            e.g = poly_scale(ops, e.g, s);
            for (auto& c : e.cof) c = poly_scale(ops, c, s);
            return e;
        };
        auto reduce = [&](El e, bool tail) -> El {
            RPoly rem;
            while (!e.g.is_zero()) {
                auto [le, lc] = *e.g.terms.begin();
                int lv = R.valuation(lc.v);
                bool hit = false;
                for (auto& b : G) {
                    const auto& [be, bc] = *b.g.terms.begin();
                    if (!exp_divides(be, le)) continue;
                    int bvv = R.valuation(bc.v);
                    if (bvv > lv) continue;
                    TrackedResidue coef{R.mul(lc.v / R.ppow(bvv), R.inv(bc.v / R.ppow(bvv))),
                                        std::min(lc.floor, bc.floor)};
                    RPoly mult;
                    mult.terms.emplace(exp_sub(le, be), coef);
                    e.g = poly_sub(ops, e.g, poly_mul(ops, mult, b.g));
                    for (int v2 = 0; v2 < 4; ++v2)
                        e.cof[v2] = poly_sub(ops, e.cof[v2],
                                             poly_mul(ops, mult, b.cof[v2]));
                    hit = true;
                    break;
                }
                if (!hit) {
                    if (!tail) break;
                    rem.terms.emplace(le, lc);
                    e.g.terms.erase(e.g.terms.begin());
                }
            }
            if (tail) e.g = std::move(rem);
            return e;
        };
        // seed with the partials
        for (int v = 0; v < 4; ++v) {
            El e;
            e.g = poly_reduce_mod(ctx.partials[v], R);
            e.cof[v].terms.emplace(Exp4{0, 0, 0, 0}, TrackedResidue{1, R.n_work});
            if (auto n = normalize(std::move(e))) G.push_back(std::move(*n));
        }
        std::vector<std::pair<size_t, size_t>> pairs;  // (i, j), j == SIZE_MAX: annihilator
        auto push_elem = [&](El e) {
            size_t idx = G.size();
            for (size_t i = 0; i < idx; ++i) pairs.emplace_back(i, idx);
            pairs.emplace_back(idx, size_t(-1));
            G.push_back(std::move(e));
        };
        for (size_t i = 0; i < G.size(); ++i) {
            for (size_t j = i + 1; j < G.size(); ++j) pairs.emplace_back(i, j);
            pairs.emplace_back(i, size_t(-1));
        }
        while (!pairs.empty()) {
            auto [i, j] = pairs.back();
            pairs.pop_back();
            El s;
            if (j == size_t(-1)) {
                // annihilator pair p^{N-v} g_i
                int v = R.valuation(G[i].g.terms.begin()->second.v);
                if (v == 0) continue;
                TrackedResidue sc{R.ppow(R.n_work - v), R.n_work};
                s.g = poly_scale(ops, G[i].g, sc);
                for (int v2 = 0; v2 < 4; ++v2)
                    s.cof[v2] = poly_scale(ops, G[i].cof[v2], sc);
            } else {
                const auto& [lei, lci] = *G[i].g.terms.begin();
                const auto& [lej, lcj] = *G[j].g.terms.begin();
                Exp4 l = exp_lcm(lei, lej);
                int vi = R.valuation(lci.v), vj = R.valuation(lcj.v);
                if (l == exp_add(lei, lej) && vi == 0 && vj == 0)
                    continue;  // product criterion (unit leads only)
                int v = std::max(vi, vj);
                RPoly mi, mj;
                mi.terms.emplace(exp_sub(l, lei),
                                 TrackedResidue{R.ppow(v - vi), R.n_work});
                mj.terms.emplace(exp_sub(l, lej),
                                 TrackedResidue{R.ppow(v - vj), R.n_work});
                s.g = poly_sub(ops, poly_mul(ops, mi, G[i].g),
                               poly_mul(ops, mj, G[j].g));
                for (int v2 = 0; v2 < 4; ++v2)
                    s.cof[v2] = poly_sub(ops, poly_mul(ops, mi, G[i].cof[v2]),
                                         poly_mul(ops, mj, G[j].cof[v2]));
            }
            s = reduce(std::move(s), true);
            if (auto n = normalize(std::move(s))) push_elem(std::move(*n));
        }
        // minimalize: drop g when another element divides its lead with no
        // larger lead valuation
        std::vector<bool> keep(G.size(), true);
        for (size_t i = 0; i < G.size(); ++i) {
            for (size_t j = 0; j < G.size() && keep[i]; ++j) {
                if (i == j || !keep[j]) continue;
                const auto& [lei, lci] = *G[i].g.terms.begin();
                const auto& [lej, lcj] = *G[j].g.terms.begin();
                if (exp_divides(lej, lei) &&
                    R.valuation(lcj.v) <= R.valuation(lci.v) &&
                    !(lej == lei && R.valuation(lcj.v) == R.valuation(lci.v) && j > i))
                    keep[i] = false;
            }
        }
        for (size_t i = 0; i < G.size(); ++i) {
            if (!keep[i]) continue;
            out.basis.push_back(G[i].g);
            out.lead_val.push_back(out.R.valuation(G[i].g.terms.begin()->second.v));
            out.transforms.push_back(G[i].cof);
        }
        return out;
    }

    RPoly normal_form(RPoly h, std::vector<RPoly>* quotients = nullptr) const {
        ROps ops{R};
        if (quotients) quotients->assign(basis.size(), RPoly{});
        RPoly rem;
        while (!h.is_zero()) {
            auto [le, lc] = *h.terms.begin();
            int lv = R.valuation(lc.v);
            bool reduced = false;
            for (size_t i = 0; i < basis.size(); ++i) {
                const auto& [ge, gc] = *basis[i].terms.begin();
                if (lead_val[i] > lv || !exp_divides(ge, le)) continue;
                TrackedResidue coef{
                    R.mul(lc.v / R.ppow(lead_val[i]), R.inv(gc.v / R.ppow(lead_val[i]))),
                    std::min(lc.floor, gc.floor)};
                RPoly mult;
                mult.terms.emplace(exp_sub(le, ge), coef);
                if (quotients)
                    (*quotients)[i] = poly_add(ops, (*quotients)[i], mult);
                h = poly_sub(ops, h, poly_mul(ops, mult, basis[i]));
                reduced = true;
                break;
            }
            if (!reduced) {
                rem.terms.emplace(le, lc);
                h.terms.erase(h.terms.begin());
            }
        }
        return rem;
    }

    // Cofactors of a member mod p^{n_work}: h = sum_v out[v] * f_v.
    std::array<RPoly, 4> lift(const RPoly& h) const {
        ROps ops{R};
        std::vector<RPoly> quot;
        RPoly r = normal_form(h, &quot);
        if (!r.is_zero())
            throw precision_error("residue lift of a non-member (normal form != 0)");
        std::array<RPoly, 4> out;
        for (size_t i = 0; i < basis.size(); ++i) {
            if (quot[i].is_zero()) continue;
            for (int v = 0; v < 4; ++v)
                out[v] = poly_add(ops, out[v], poly_mul(ops, quot[i], transforms[i][v]));
        }
        return out;
    }
};

}  // namespace adezeta
