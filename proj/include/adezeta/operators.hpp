#pragma once

#include <vector>

#include "groebner.hpp"
#include "singularities.hpp"

// Constant-coefficient differential operators in an affine chart, evaluated
// at a singular point. The transfer to ambient coordinates is a nullspace
// computation: an operator of order <= K annihilates every multiple of the
// dehomogenized partials iff the Leibniz coefficient of each jet of the
// cofactor vanishes.

namespace adezeta {

struct AnnihilatorOperator {
    int chart = 3;
    std::array<Rational, 4> point{};  // chart coordinate normalized to 1
    // multi-indices over the chart variables, chart entry always 0
    std::vector<std::pair<Exp4, Rational>> terms;
    int order = 0;

    std::string str() const {
        std::string s;
        for (auto& [a, c] : terms) {
            if (!s.empty()) s += " + ";
            std::string ds;
            for (int i = 0; i < 4; ++i) {
                if (!a[i]) continue;
                ds += std::string("d") + kVarNames[i];
                if (a[i] > 1) ds += "^" + std::to_string(a[i]);
            }
            if (ds.empty()) ds = "ev";
            s += c.str() + "*" + ds;
        }
        return s.empty() ? "0" : s;
    }
};

namespace detail {

inline QPoly dehomogenize(const QPoly& g, int chart) {
    QOps q;
    QPoly out;
    for (auto& [e, c] : g.terms) {
        Exp4 e2 = e;
        e2[chart] = 0;
        poly_add_term(q, out, e2, c);
    }
    return out;
}

// (d^a h)(pt) for a chart polynomial (chart exponents already zero).
inline Rational eval_derivative(const QPoly& h, const Exp4& a,
                                const std::array<Rational, 4>& pt, int chart) {
    Rational total = 0;
    for (auto& [e, c] : h.terms) {
        Rational t = c;
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i) {
            if (i == chart) continue;
            if (e[i] < a[i]) {
                ok = false;
                break;
            }
            for (int k = 0; k < a[i]; ++k) t *= e[i] - k;
            for (int k = 0; k < e[i] - a[i]; ++k) t *= pt[i];
        }
        if (ok) total += t;
    }
    return total;
}

inline std::vector<Exp4> chart_multi_indices(int chart, int cap) {
    std::vector<Exp4> out;
    int v[3], n = 0;
    for (int i = 0; i < 4; ++i)
        if (i != chart) v[n++] = i;
    for (int total = 0; total <= cap; ++total)
        for (int a0 = 0; a0 <= total; ++a0)
            for (int a1 = 0; a1 + a0 <= total; ++a1) {
                Exp4 e{0, 0, 0, 0};
                e[v[0]] = uint16_t(a0);
                e[v[1]] = uint16_t(a1);
                e[v[2]] = uint16_t(total - a0 - a1);
                out.push_back(e);
            }
    return out;
}

// Scan order for the canonical echelon: higher total order first; within a
// grade, ascending lex over the chart variables. This puts the pure power of
// the singular direction in pivot position for the ladders the examples
// print.
inline std::vector<Exp4> scan_order(int chart, int cap) {
    auto idx = chart_multi_indices(chart, cap);
    std::sort(idx.begin(), idx.end(), [](const Exp4& a, const Exp4& b) {
        int da = degree(a), db = degree(b);
        if (da != db) return da > db;
        return a < b;  // ascending lex within a grade
    });
    return idx;
}

}  // namespace detail

inline Rational apply_operator(const AnnihilatorOperator& D, const QPoly& h) {
    QPoly ha = detail::dehomogenize(h, D.chart);
    Rational s = 0;
    for (auto& [a, c] : D.terms)
        s += c * detail::eval_derivative(ha, a, D.point, D.chart);
    return s;
}

// Solve the annihilation system for one singularity: all chart operators of
// order <= cap killing h*g for the four dehomogenized partials g and every
// power series h. Returns exactly mu operators or throws.
inline std::vector<AnnihilatorOperator> transfer_operators(const QPoly& f,
                                                           const SingularityRecord& rec,
                                                           const Int& p = 0) {
    QOps q;
    if (!is_singular_point(f, rec.point))
        throw singularity_error("declared point is not singular on f");
    int chart = rec.pick_chart(p);
    std::array<Rational, 4> pt;
    for (int i = 0; i < 4; ++i)
        pt[i] = Rational(rec.point[i]) / Rational(rec.point[chart]);
    int cap = operator_order_cap(rec.type);
    auto alphas = detail::chart_multi_indices(chart, cap);

    std::vector<QPoly> gens;
    for (int v = 0; v < 4; ++v)
        gens.push_back(detail::dehomogenize(poly_partial(q, f, v), chart));

    // columns indexed by alpha; rows by (generator, beta)
    size_t nrows = gens.size() * alphas.size();
    std::vector<QVec> cols(alphas.size(), QVec(nrows, Rational(0)));
    for (size_t ai = 0; ai < alphas.size(); ++ai) {
        const Exp4& a = alphas[ai];
        for (size_t gi = 0; gi < gens.size(); ++gi) {
            for (size_t bi = 0; bi < alphas.size(); ++bi) {
                const Exp4& b = alphas[bi];
                bool le = true;
                for (int i = 0; i < 4; ++i)
                    if (b[i] > a[i]) le = false;
                if (!le) continue;
                Rational coef = 1;
                for (int i = 0; i < 4; ++i) coef *= binomial(a[i], b[i]);
                coef *= detail::eval_derivative(gens[gi], exp_sub(a, b), pt, chart);
                cols[ai][gi * alphas.size() + bi] = coef;
            }
        }
    }
    auto nullsp = q_kernel(cols);
    if (int(nullsp.size()) != rec.type.milnor())
        throw singularity_error(
            "annihilator count " + std::to_string(nullsp.size()) + " != Milnor " +
            std::to_string(rec.type.milnor()) + " for " + rec.type.str() +
            ": misclassified singularity or non-equisingular configuration");

    // canonical reduced echelon under the fixed scan order
    auto order = detail::scan_order(chart, cap);
    std::map<Exp4, size_t, GrevlexDesc> aidx;
    for (size_t i = 0; i < alphas.size(); ++i) aidx.emplace(alphas[i], i);
    std::vector<size_t> pos(order.size());
    for (size_t i = 0; i < order.size(); ++i) pos[i] = aidx.at(order[i]);

    std::vector<std::pair<size_t, QVec>> ech;  // (scan position, vector)
    for (auto& v0 : nullsp) {
        QVec v = v0;
        for (auto& [sp, b] : ech) {
            if (v[pos[sp]] != 0) {
                Rational coef = v[pos[sp]] / b[pos[sp]];
                for (size_t i = 0; i < v.size(); ++i)
                    if (b[i] != 0) v[i] -= coef * b[i];
            }
        }
        for (size_t spi = 0; spi < order.size(); ++spi) {
            if (v[pos[spi]] != 0) {
                Rational inv = 1 / v[pos[spi]];
                for (auto& x : v) x *= inv;
                ech.emplace_back(spi, std::move(v));
                break;
            }
        }
    }
    // full back-substitution: kill pivot coordinates across vectors
    for (auto& [sp, v] : ech)
        for (auto& [sp2, b] : ech) {
            if (sp == sp2 || v[pos[sp2]] == 0) continue;
            Rational coef = v[pos[sp2]] / b[pos[sp2]];
            for (size_t i = 0; i < v.size(); ++i)
                if (b[i] != 0) v[i] -= coef * b[i];
        }
    std::sort(ech.begin(), ech.end(),
              [&](auto& a, auto& b) { return degree(order[a.first]) < degree(order[b.first]) ||
                     (degree(order[a.first]) == degree(order[b.first]) && a.first > b.first); });

    std::vector<AnnihilatorOperator> out;
    for (auto& [sp, v] : ech) {
        AnnihilatorOperator D;
        D.chart = chart;
        D.point = pt;
        for (size_t i = 0; i < alphas.size(); ++i)
            if (v[i] != 0) D.terms.emplace_back(alphas[i], v[i]);
        std::sort(D.terms.begin(), D.terms.end(), [](auto& a, auto& b) {
            return degree(a.first) < degree(b.first) ||
                   (degree(a.first) == degree(b.first) && a.first < b.first);
        });
        for (auto& [a, c] : D.terms) D.order = std::max(D.order, degree(a));
        out.push_back(std::move(D));
    }
    return out;
}

// [D_i(target_j)] over Q.
inline std::vector<QVec> operator_matrix(const std::vector<AnnihilatorOperator>& ops,
                                         const std::vector<QPoly>& targets) {
    std::vector<QVec> rows(ops.size(), QVec(targets.size(), Rational(0)));
    for (size_t i = 0; i < ops.size(); ++i)
        for (size_t j = 0; j < targets.size(); ++j)
            rows[i][j] = apply_operator(ops[i], targets[j]);
    return rows;
}

// ---- residue-compiled operators -------------------------------------------

struct ROperator {
    int chart = 3;
    std::vector<std::pair<Exp4, limb>> terms;  // primitive integer coeffs
    std::array<std::vector<limb>, 4> point_pows;
};

// max_degree bounds the inputs the compiled operator will see.
inline ROperator compile_operator(const AnnihilatorOperator& D, const ResidueRing& R,
                                  int max_degree) {
    ROperator out;
    out.chart = D.chart;
    for (int i = 0; i < 4; ++i) {
        limb base = R.reduce_rational(D.point[i]);
        out.point_pows[i].resize(max_degree + 1);
        out.point_pows[i][0] = 1 % R.modulus;
        for (int e = 1; e <= max_degree; ++e)
            out.point_pows[i][e] = R.mul(out.point_pows[i][e - 1], base);
    }
    QVec coeffs;
    for (auto& [a, c] : D.terms) coeffs.push_back(c);
    auto ints = q_primitive(coeffs);
    size_t k = 0;
    for (auto& [a, c] : D.terms) out.terms.emplace_back(a, R.reduce(ints[k++]));
    return out;
}

inline TrackedResidue apply_operator(const ROperator& D, const ResidueRing& R,
                                     const RPoly& h) {
    limb total = 0;
    int fl = R.n_work;
    for (auto& [e0, c] : h.terms) {
        fl = std::min(fl, c.floor);
        Exp4 e = e0;
        e[D.chart] = 0;
        for (auto& [a, ca] : D.terms) {
            bool ok = true;
            limb t = R.mul(c.v, ca);
            for (int i = 0; i < 4 && ok; ++i) {
                if (i == D.chart) continue;
                if (e[i] < a[i]) {
                    ok = false;
                    break;
                }
                for (int k = 0; k < a[i]; ++k) t = R.mul(t, limb(e[i] - k));
                t = R.mul(t, D.point_pows[i][e[i] - a[i]]);
            }
            if (ok) total = R.add(total, t);
        }
    }
    return {total, fl};
}

}  // namespace adezeta
