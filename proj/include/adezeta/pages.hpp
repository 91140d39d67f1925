#pragma once

#include <map>
#include <string>
#include <vector>

#include "forms.hpp"
#include "linalg.hpp"

// Koszul / de Rham page computations. Everything here runs over exact
// rationals on the integer lift; coefficient degrees stay below the stable
// bound so the matrices are small.

namespace adezeta {

struct page_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Columns of df^ : Omega^j_src_deg -> Omega^{j+1}_{src_deg+N-1}. Source index
// is (component ci, monomial mi) flattened as ci*n_mon+mi; target likewise in
// the grevlex-descending monomial order.
template <class Ops>
std::vector<std::vector<typename Ops::C>> koszul_columns(
    const Ops& ops, const SparsePoly<typename Ops::C>& f, int j, int src_deg) {
    int N = f.is_zero() ? 1 : *f.homogeneous_degree();
    int tgt_deg = src_deg + N - 1;
    auto src_mons = monomial_basis(src_deg);
    auto tgt_mons = monomial_basis(tgt_deg);
    std::map<Exp4, size_t, GrevlexDesc> tgt_idx;
    for (size_t i = 0; i < tgt_mons.size(); ++i) tgt_idx.emplace(tgt_mons[i], i);
    const auto& src_sub = form_subsets()[j];
    const auto& tgt_sub = form_subsets()[j + 1];
    size_t tgt_block = tgt_mons.size();
    std::vector<SparsePoly<typename Ops::C>> partials;
    for (int v = 0; v < 4; ++v) partials.push_back(poly_partial(ops, f, v));

    std::vector<std::vector<typename Ops::C>> cols;
    cols.reserve(src_sub.size() * src_mons.size());
    for (size_t ci = 0; ci < src_sub.size(); ++ci) {
        for (auto& mono : src_mons) {
            std::vector<typename Ops::C> col(tgt_sub.size() * tgt_block,
                                             ops.from_int(0));
            for (int v = 0; v < 4; ++v) {
                int s = insert_sign(v, src_sub[ci], j);
                if (!s) continue;
                int ti = subset_index(j + 1, subset_insert(v, src_sub[ci], j));
                for (auto& [e, c] : partials[v].terms) {
                    size_t row = ti * tgt_block + tgt_idx.at(exp_add(e, mono));
                    auto val = (s < 0) ? ops.neg(c) : c;
                    col[row] = ops.add(col[row], val);
                }
            }
            cols.push_back(std::move(col));
        }
    }
    return cols;
}

inline std::vector<QVec> koszul_matrix(const QPoly& f, int j, int src_deg) {
    return koszul_columns(QOps{}, f, j, src_deg);
}

// dim (R/J)_m over Q.
inline int quotient_dim_q(const QPoly& f, int m) {
    int N = *f.homogeneous_degree();
    int total = int(monomial_basis(m).size());
    if (m < N - 1) return total;
    return total - int(q_rank(koszul_matrix(f, 3, m - (N - 1))));
}

// dim (R/J)_m over F_p.
inline int quotient_dim_fp(const QPoly& f, int m, uint64_t p) {
    ResidueRing R(p, 1);
    ROps ops{R};
    RPoly fp = poly_reduce_mod(f, R);
    int N = *f.homogeneous_degree();
    int total = int(monomial_basis(m).size());
    if (m < N - 1) return total;
    auto cols = koszul_columns(ops, fp, 3, m - (N - 1));
    RMatrix M(cols.empty() ? 0 : cols[0].size(), cols.size());
    for (size_t c = 0; c < cols.size(); ++c)
        for (size_t r = 0; r < cols[c].size(); ++r) M.at(r, c) = cols[c][r].v;
    return total - int(r_echelon_unit(R, M).size());
}

// Monomial representatives of R_m / V chosen greedily in descending graded
// lex, matching the bases the examples print (wy; w^2, wx; ...).
inline std::vector<Exp4> greedy_reps(const std::vector<Exp4>& mons, QEchelon& v_space) {
    std::vector<Exp4> order = mons;
    std::sort(order.begin(), order.end(),
              [](const Exp4& a, const Exp4& b) { return gradedlex_greater(a, b); });
    std::map<Exp4, size_t, GrevlexDesc> idx;
    for (size_t i = 0; i < mons.size(); ++i) idx.emplace(mons[i], i);
    std::vector<Exp4> reps;
    for (auto& mono : order) {
        QVec unit(mons.size(), Rational(0));
        unit[idx.at(mono)] = 1;
        if (v_space.insert(std::move(unit))) reps.push_back(mono);
    }
    return reps;
}

struct GradedBasis {
    int coeff_degree = 0;
    int pole = 0;
    // Vectors over 4*C(d+3,3) coordinates for 3-form bases, or monomial reps
    // for cokernel bases.
    std::vector<QVec> vectors;
    std::vector<Exp4> monomials;
};

// Cokernel representatives of df^ : Omega^3 -> Omega^4 at coefficient degree
// t*N-4, chosen as monomials.
inline GradedBasis e1_top_basis(const QPoly& f, int t) {
    int N = *f.homogeneous_degree();
    int m = t * N - 4;
    GradedBasis out;
    out.pole = t;
    out.coeff_degree = m;
    if (m < 0) return out;
    auto mons = monomial_basis(m);
    QEchelon image;
    if (m >= N - 1)
        for (auto& col : koszul_matrix(f, 3, m - (N - 1))) image.insert(col);
    out.monomials = greedy_reps(mons, image);
    return out;
}

// Basis of ker(df^: Omega^3 -> Omega^4) / im(df^: Omega^2 -> Omega^3) at
// coefficient degree t*N-3, with representatives chosen inside the kernel so
// df^beta = 0 identically.
inline GradedBasis e1_sub_basis(const QPoly& f, int t) {
    int N = *f.homogeneous_degree();
    int d3 = t * N - 3;
    GradedBasis out;
    out.pole = t;
    out.coeff_degree = d3;
    if (d3 < 0) return out;
    auto kernel = q_kernel(koszul_matrix(f, 3, d3));
    QEchelon im;
    if (d3 >= N - 1)
        for (auto& col : koszul_matrix(f, 2, d3 - (N - 1))) im.insert(col);
    for (auto& k : kernel) {
        QVec copy = k;
        if (im.insert(std::move(copy))) out.vectors.push_back(k);
    }
    return out;
}

struct PageEntry {
    int pole = 0;
    int coeff_degree = 0;
    std::vector<Exp4> reps;   // E2 basis monomials
    int e1_sub_dim = 0;
    int v_dim = 0;            // dim of J_m + d(ker)
};

struct PageReport {
    int N = 0;
    int mu = 0;
    int stable_top_degree = 0;             // where the top diagonal stabilizes
    std::vector<PageEntry> entries;        // the sub-stable poles
    std::vector<std::pair<int, int>> top_dims;  // (degree, dim) diagnostics

    int total_dim() const {
        int s = 0;
        for (auto& e : entries) s += int(e.reps.size());
        return s;
    }
    std::vector<std::pair<Exp4, int>> basis_elements() const {
        std::vector<std::pair<Exp4, int>> out;
        for (auto& e : entries)
            for (auto& r : e.reps) out.emplace_back(r, e.pole);
        return out;
    }
};

// Global Milnor number: the stabilized top-diagonal quotient dimension. The
// quotient can sit one or two degrees above 3(N-2) before settling (the
// subdiagonal settles at exactly 3(N-2)), so scan until two consecutive
// degrees agree.
inline int global_milnor(const QPoly& f) {
    int N = *f.homogeneous_degree();
    int m0 = 3 * (N - 2);
    int prev = quotient_dim_q(f, m0);
    for (int m = m0 + 1; m <= m0 + 5; ++m) {
        int cur = quotient_dim_q(f, m);
        if (cur == prev) return cur;
        prev = cur;
    }
    throw page_error("top-diagonal dimensions failed to stabilize");
}

// E2 top-diagonal bases for the sub-stable poles, plus the subdiagonal
// vanishing check there. E2 classes live at pole orders t with
// t*N-4 < 3(N-2); higher poles are stable (E2 = 0) and t >= 3 sits on the
// boundary axis.
inline PageReport e2_basis(const QPoly& f) {
    QOps q;
    int N = *f.homogeneous_degree();
    PageReport rep;
    rep.N = N;
    rep.mu = global_milnor(f);
    rep.stable_top_degree = 3 * (N - 2);
    for (int m = std::max(0, 3 * (N - 2) - 2); m <= 3 * (N - 2) + 2; ++m)
        rep.top_dims.emplace_back(m, quotient_dim_q(f, m));
    for (int t = 1; t * N - 4 < 3 * (N - 2); ++t) {
        int m = t * N - 4;
        if (m < 0) continue;
        PageEntry entry;
        entry.pole = t;
        entry.coeff_degree = m;
        auto mons = monomial_basis(m);
        QEchelon v_space;
        int j_dim = 0;
        if (m >= N - 1) {
            for (auto& col : koszul_matrix(f, 3, m - (N - 1))) v_space.insert(col);
            j_dim = int(v_space.rank());
        }
        // d1 image: de Rham of the full df^-kernel one coefficient degree up
        auto kernel = q_kernel(koszul_matrix(f, 3, m + 1));
        entry.e1_sub_dim = 0;
        {
            QEchelon im2;
            if (m + 1 >= N - 1)
                for (auto& col : koszul_matrix(f, 2, m + 1 - (N - 1))) im2.insert(col);
            int im2_rank = int(im2.rank());
            entry.e1_sub_dim = int(kernel.size()) - im2_rank;
        }
        auto mons3 = monomial_basis(m + 1);
        size_t block3 = mons3.size();
        std::map<Exp4, size_t, GrevlexDesc> idx;
        for (size_t i = 0; i < mons.size(); ++i) idx.emplace(mons[i], i);
        for (auto& combo : kernel) {
            QVec col(mons.size(), Rational(0));
            for (size_t src = 0; src < combo.size(); ++src) {
                if (combo[src] == 0) continue;
                size_t ci = src / block3;
                const auto& I = form_subsets()[3][ci];
                int vmiss = 0;
                for (int v = 0; v < 4; ++v)
                    if (insert_sign(v, I, 3)) vmiss = v;
                int s = insert_sign(vmiss, I, 3);
                const Exp4& e = mons3[src % block3];
                if (!e[vmiss]) continue;
                Exp4 e2 = e;
                e2[vmiss] -= 1;
                col[idx.at(e2)] += Rational(s) * Rational(e[vmiss]) * combo[src];
            }
            v_space.insert(std::move(col));
        }
        entry.v_dim = int(v_space.rank());
        // subdiagonal E2 vanishing: d1 must be injective on ker/im
        int d1_rank = entry.v_dim - j_dim;
        if (d1_rank != entry.e1_sub_dim)
            throw page_error(
                "subdiagonal E2 is nonzero at pole " + std::to_string(t) +
                "; the singularities are not (all) of ADE type");
        entry.reps = greedy_reps(mons, v_space);
        rep.entries.push_back(std::move(entry));
    }
    return rep;
}

}  // namespace adezeta
