#pragma once

#include <array>
#include <vector>

#include "polynomial.hpp"

// Differential j-forms in four variables. A j-form stores C(4,j) polynomial
// components indexed by sorted index subsets of {w,x,y,z} in lexicographic
// order; all wedge signs come from sorting-permutation parity.

namespace adezeta {

inline const std::vector<std::vector<std::array<int, 4>>>& form_subsets() {
    static const std::vector<std::vector<std::array<int, 4>>> subsets = [] {
        std::vector<std::vector<std::array<int, 4>>> s(5);
        for (int mask = 0; mask < 16; ++mask) {
            std::array<int, 4> idx{-1, -1, -1, -1};
            int n = 0;
            for (int v = 0; v < 4; ++v)
                if (mask & (1 << v)) idx[n++] = v;
            s[n].push_back(idx);
        }
        for (auto& lvl : s) std::sort(lvl.begin(), lvl.end());
        return s;
    }();
    return subsets;
}

inline int subset_index(int j, const std::array<int, 4>& I) {
    const auto& lvl = form_subsets()[j];
    for (size_t i = 0; i < lvl.size(); ++i)
        if (lvl[i] == I) return int(i);
    return -1;
}

// Sign of dx_v ^ dx_I when sorted into dx_{I u {v}}; 0 if v is in I.
inline int insert_sign(int v, const std::array<int, 4>& I, int j) {
    int before = 0;
    for (int k = 0; k < j; ++k) {
        if (I[k] == v) return 0;
        if (I[k] < v) ++before;
    }
    return (before % 2) ? -1 : 1;
}

inline std::array<int, 4> subset_insert(int v, std::array<int, 4> I, int j) {
    I[j] = v;
    std::sort(I.begin(), I.begin() + j + 1);
    return I;
}

template <class C>
struct WedgeForm {
    int j = 0;  // form degree, 0..4
    std::vector<SparsePoly<C>> comps;  // size C(4,j)

    explicit WedgeForm(int deg = 0) : j(deg), comps(form_subsets()[deg].size()) {}

    bool is_zero() const {
        for (auto& c : comps)
            if (!c.is_zero()) return false;
        return true;
    }
};

using QForm = WedgeForm<Rational>;
using RForm = WedgeForm<TrackedResidue>;

// Weight of a homogeneous form: coefficient degree + form degree.
template <class C>
int weight(const WedgeForm<C>& w) {
    std::optional<int> d;
    for (auto& c : w.comps) {
        auto cd = c.homogeneous_degree();
        if (!cd) continue;
        if (d && *d != *cd) throw parse_error("form is not homogeneous");
        d = cd;
    }
    if (!d) throw parse_error("weight of the zero form");
    return *d + w.j;
}

// df ^ w (the Koszul differential without the weight scalar).
template <class Ops>
WedgeForm<typename Ops::C> koszul_wedge(const Ops& ops,
                                        const SparsePoly<typename Ops::C>& f,
                                        const WedgeForm<typename Ops::C>& w) {
    WedgeForm<typename Ops::C> out(w.j + 1);
    const auto& src = form_subsets()[w.j];
    for (size_t ci = 0; ci < src.size(); ++ci) {
        if (w.comps[ci].is_zero()) continue;
        for (int v = 0; v < 4; ++v) {
            int s = insert_sign(v, src[ci], w.j);
            if (!s) continue;
            auto tgt = subset_insert(v, src[ci], w.j);
            int ti = subset_index(w.j + 1, tgt);
            auto fv = poly_partial(ops, f, v);
            auto piece = poly_mul(ops, fv, w.comps[ci]);
            if (s < 0) piece = poly_scale(ops, piece, ops.neg(ops.from_int(1)));
            out.comps[ti] = poly_add(ops, out.comps[ti], piece);
        }
    }
    return out;
}

// Exterior derivative.
template <class Ops>
WedgeForm<typename Ops::C> de_rham(const Ops& ops, const WedgeForm<typename Ops::C>& w) {
    WedgeForm<typename Ops::C> out(w.j + 1);
    const auto& src = form_subsets()[w.j];
    for (size_t ci = 0; ci < src.size(); ++ci) {
        if (w.comps[ci].is_zero()) continue;
        for (int v = 0; v < 4; ++v) {
            int s = insert_sign(v, src[ci], w.j);
            if (!s) continue;
            auto tgt = subset_insert(v, src[ci], w.j);
            int ti = subset_index(w.j + 1, tgt);
            auto dv = poly_partial(ops, w.comps[ci], v);
            if (s < 0) dv = poly_scale(ops, dv, ops.neg(ops.from_int(1)));
            out.comps[ti] = poly_add(ops, out.comps[ti], dv);
        }
    }
    return out;
}

// Interior product with the Euler vector field sum x_i d/dx_i.
template <class Ops>
WedgeForm<typename Ops::C> euler_contraction(const Ops& ops,
                                             const WedgeForm<typename Ops::C>& w) {
    if (w.j == 0) throw std::invalid_argument("contraction of a 0-form");
    WedgeForm<typename Ops::C> out(w.j - 1);
    const auto& src = form_subsets()[w.j];
    for (size_t ci = 0; ci < src.size(); ++ci) {
        if (w.comps[ci].is_zero()) continue;
        for (int k = 0; k < w.j; ++k) {
            int v = src[ci][k];
            std::array<int, 4> rest{-1, -1, -1, -1};
            int n = 0;
            for (int m = 0; m < w.j; ++m)
                if (m != k) rest[n++] = src[ci][m];
            int ti = subset_index(w.j - 1, rest);
            SparsePoly<typename Ops::C> xv;
            Exp4 e{0, 0, 0, 0};
            e[v] = 1;
            xv.terms.emplace(e, ops.from_int((k % 2) ? -1 : 1));
            out.comps[ti] =
                poly_add(ops, out.comps[ti], poly_mul(ops, xv, w.comps[ci]));
        }
    }
    return out;
}

template <class Ops>
WedgeForm<typename Ops::C> scale_form(const Ops& ops, const WedgeForm<typename Ops::C>& w,
                                      const typename Ops::C& s) {
    WedgeForm<typename Ops::C> out(w.j);
    for (size_t i = 0; i < w.comps.size(); ++i) out.comps[i] = poly_scale(ops, w.comps[i], s);
    return out;
}

// d_f(w) = f dw - (|w|/N) df ^ w for homogeneous w; N = deg f. Only
// meaningful over Q (the weight scalar is rational).
inline QForm twisted_differential(const QPoly& f, const QForm& w) {
    QOps q;
    int wt = weight(w);
    int N = *f.homogeneous_degree();
    QForm a = de_rham(q, w);
    for (auto& c : a.comps) c = poly_mul(q, f, c);
    QForm b = koszul_wedge(q, f, w);
    Rational scale = Rational(-wt) / N;
    for (size_t i = 0; i < a.comps.size(); ++i)
        a.comps[i] = poly_add(q, a.comps[i], poly_scale(q, b.comps[i], scale));
    return a;
}

// The 4-form coefficient of d(beta) for a 3-form beta, as one polynomial.
template <class Ops>
SparsePoly<typename Ops::C> de_rham_top(const Ops& ops,
                                        const WedgeForm<typename Ops::C>& beta) {
    auto d = de_rham(ops, beta);
    return d.comps[0];
}

}  // namespace adezeta
