#pragma once

#include <map>
#include <vector>

#include "frobenius.hpp"
#include "operators.hpp"

// Cohomological reduction. Terms h*Omega/f^l at stable poles are lowered one
// pole at a time: solve the operator system for the de Rham coefficients,
// drop the (exact) de Rham part, Groebner-lift the Jacobian remainder and
// apply the Griffiths-style identity; below the stable range the term is
// decomposed against the E2 representatives directly.

namespace adezeta {

struct reduction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Divide every coefficient by d; the common floor of the result is the
// minimum over all inputs (a fuzzy zero degrades its siblings, not itself).
inline RPoly poly_div_int(const ResidueRing& R, const RPoly& a, const Int& d) {
    int fl = R.n_work;
    std::vector<std::pair<Exp4, TrackedResidue>> vals;
    for (auto& [e, c] : a.terms) {
        TrackedResidue t = tr_div_int(R, c, d);
        fl = std::min(fl, t.floor);
        vals.emplace_back(e, t);
    }
    RPoly out;
    for (auto& [e, t] : vals)
        if (t.v) out.terms.emplace(e, TrackedResidue{t.v, fl});
    return out;
}

struct LevelBasis {
    int pole = 0;
    std::vector<std::array<RPoly, 4>> betas;    // exact df^-kernel 3-forms
    std::vector<RPoly> alphas;                  // de Rham images (4-form coeffs)
    RMatrix op_matrix;                          // [D_i(alpha_j)]
    int det_valuation = 0;
    // Floor digits an operator solve at this level costs. Zero once the
    // level is certified: if the system solves exactly on every monomial of
    // the degree, linearity keeps the unknown tails of later inputs exact
    // multiples of p^{n_work} through the solve, so no precision is spent
    // even when det(op_matrix) is p-divisible.
    int solve_loss = 0;
};

struct PrecisionAudit {
    int n_target = 0;
    int n_work = 0;
    int min_floor = 1 << 20;
    int solve_digit_events = 0;
    int lower_digit_events = 0;

    void note_floor(int f) { min_floor = std::min(min_floor, f); }
};

class ReductionEngine {
  public:
    ReductionEngine(const QPoly& f, const PageReport& page, const ResidueRing& R,
                    const std::vector<SingularityRecord>& sings)
        : f_(f), page_(page), R_(R), N_(page.N), ops_{R} {
        fR_ = poly_reduce_mod(f_, R_);
        gctx_ = groebner_build(f_);
        rgb_ = ResidueGB::build(gctx_, R_);
        mu_ = page_.mu;

        int declared = 0;
        for (auto& s : sings) declared += s.type.milnor();
        if (declared != mu_)
            throw reduction_error("declared Milnor sum " + std::to_string(declared) +
                                  " != computed mu " + std::to_string(mu_));

        int max_deg = N_ * (R_.n_work + 3);
        for (auto& s : sings) {
            auto qs = transfer_operators(f_, s, Int(R_.p));
            for (auto& D : qs) {
                max_order_ = std::max(max_order_, D.order);
                qops_.push_back(D);
                rops_.push_back(compile_operator(D, R_, max_deg));
            }
        }
        if (int(qops_.size()) != mu_)
            throw reduction_error("operator count != mu");

        t0_ = 1;
        while (t0_ * N_ - 3 < 3 * (N_ - 2)) ++t0_;
        l_min_ = 1;
        while (l_min_ * N_ - 4 < 3 * (N_ - 2)) ++l_min_;
        build_base_betas();
        for (auto& entry : page_.entries) build_endgame(entry);
    }

    const ResidueRing& ring() const { return R_; }
    int mu() const { return mu_; }
    int base_level() const { return t0_; }
    int stable_pole_min() const { return l_min_; }
    const std::vector<AnnihilatorOperator>& operators() const { return qops_; }
    const GroebnerContext& groebner() const { return gctx_; }

    const LevelBasis& level(int pole) {
        auto it = levels_.find(pole);
        if (it != levels_.end()) return it->second;
        return levels_.emplace(pole, build_level(pole)).first->second;
    }

    // One pole-lowering step at a stable pole; returns the new term and the
    // solved de Rham coefficients.
    std::pair<PoleTerm, std::vector<TrackedResidue>> reduce_pole_once(
        const PoleTerm& term, PrecisionAudit* audit = nullptr) {
        const LevelBasis& lv = level(term.pole);
        int h_floor = poly_min_floor(term.numerator, R_.n_work);
        RVec rhs(mu_);
        for (int i = 0; i < mu_; ++i) {
            auto val = apply_operator(rops_[i], R_, term.numerator);
            rhs[i] = val.v;
        }
        auto sol = r_solve(R_, lv.op_matrix, rhs);
        if (audit && lv.solve_loss) audit->solve_digit_events += lv.solve_loss;
        int a_floor = h_floor - lv.solve_loss;
        std::vector<TrackedResidue> a(mu_);
        RPoly r = term.numerator;
        for (int j = 0; j < mu_; ++j) {
            a[j] = TrackedResidue{sol.x[j], a_floor};
            if (a[j].v)
                r = poly_sub(ops_, r, poly_scale(ops_, lv.alphas[j], a[j]));
        }
        auto cof = rgb_.lift(r);
        RPoly div;
        for (int v = 0; v < 4; ++v)
            div = poly_add(ops_, div, poly_partial(ops_, cof[v], v));
        Int denom = term.pole - 1;
        if (audit) {
            int dv = p_valuation(denom, Int(R_.p));
            if (dv > 0) audit->lower_digit_events += dv;
        }
        PoleTerm out;
        out.numerator = poly_div_int(R_, div, denom);
        out.pole = term.pole - 1;
        return {out, a};
    }

    // Full reduction of a list of terms to E2 coordinates, ordered as
    // page.basis_elements().
    std::vector<TrackedResidue> reduce_to_e2(std::vector<PoleTerm> terms,
                                             PrecisionAudit* audit = nullptr) {
        auto basis = page_.basis_elements();
        std::vector<TrackedResidue> coords(basis.size(),
                                           TrackedResidue{0, R_.n_work});
        for (auto& t : terms) reduce_term(t, coords, audit);
        if (audit)
            for (auto& c : coords) audit->note_floor(c.floor);
        return coords;
    }

    // The q^3 Frob^{-1} matrix on the E2 basis. K <= 0 selects the automatic
    // truncation: terms are added until two consecutive term contributions
    // vanish mod p^{n_target}.
    RMatrix frobenius_matrix(int n_target, int K, PrecisionAudit* audit = nullptr) {
        auto basis = page_.basis_elements();
        size_t M = basis.size();
        RMatrix A(M, M);
        if (M == 0) return A;
        std::vector<std::vector<TrackedResidue>> cols(
            M, std::vector<TrackedResidue>(M, TrackedResidue{0, R_.n_work}));

        int hard_cap = R_.n_work + 1;
        int k_cap = (K > 0) ? K : hard_cap;
        PowerStream stream(f_, R_, int(R_.p) * (hard_cap + 2));
        // sparse powers of f for the binomial recombination
        std::vector<RPoly> fpow{RPoly{}};
        fpow[0].terms.emplace(Exp4{0, 0, 0, 0}, ops_.from_int(1));

        // T[j][a] = psi(h_j * wxyz * f^{a p - l_j}) / wxyz
        std::vector<std::map<int, RPoly>> T(M);
        int consecutive_zero = 0;
        limb target_mod = R_.ppow(std::min(n_target, R_.n_work));

        for (int k = 0; k <= k_cap; ++k) {
            // collect the slices T[j][k+1], in increasing stream order
            std::vector<std::pair<int, size_t>> wanted;
            for (size_t j = 0; j < M; ++j)
                wanted.emplace_back((k + 1) * int(R_.p) - basis[j].second, j);
            std::sort(wanted.begin(), wanted.end());
            for (auto& [m_needed, j] : wanted) {
                while (stream.power() < m_needed) stream.step();
                if (stream.power() != m_needed)
                    throw reduction_error("power stream checkpoint missed");
                Exp4 b{uint16_t(basis[j].first[0] + 1), uint16_t(basis[j].first[1] + 1),
                       uint16_t(basis[j].first[2] + 1), uint16_t(basis[j].first[3] + 1)};
                T[j].emplace(k + 1, stream.psi_slice(b));
            }
            while (int(fpow.size()) <= k)
                fpow.push_back(poly_mul(ops_, fpow.back(), fR_));

            bool all_zero = true;
            for (size_t j = 0; j < M; ++j) {
                RPoly term;
                for (int i = 0; i <= k; ++i) {
                    Int c = binomial(unsigned(k), unsigned(i));
                    if ((k - i) % 2) c = -c;
                    RPoly piece = poly_mul(ops_, fpow[size_t(i)], T[j].at(k - i + 1));
                    term = poly_add(ops_, term,
                                    poly_scale(ops_, piece, tr_make(R_, c)));
                }
                PoleTerm pt{std::move(term), k + 1};
                std::vector<TrackedResidue> contrib(M, TrackedResidue{0, R_.n_work});
                reduce_term(pt, contrib, audit);
                for (size_t i = 0; i < M; ++i) {
                    cols[j][i] = tr_add(R_, cols[j][i], contrib[i]);
                    if (contrib[i].v % target_mod) all_zero = false;
                }
            }
            if (K <= 0) {
                consecutive_zero = all_zero ? consecutive_zero + 1 : 0;
                if (consecutive_zero >= 2 && k >= n_target - 2) break;
            }
        }
        if (K <= 0 && consecutive_zero < 2)
            throw precision_error("Frobenius series failed to converge within the cap");

        last_matrix_floors_.assign(M * M, 0);
        for (size_t j = 0; j < M; ++j)
            for (size_t i = 0; i < M; ++i) {
                A.at(i, j) = cols[j][i].v;
                last_matrix_floors_[i * M + j] = cols[j][i].floor;
                if (audit) audit->note_floor(cols[j][i].floor);
            }
        return A;
    }

    int matrix_floor() const {
        int f = 1 << 20;
        for (auto x : last_matrix_floors_) f = std::min(f, x);
        return last_matrix_floors_.empty() ? R_.n_work : f;
    }

    // Multiplier search for a level: theorem-style candidates first (value
    // nonzero at every singular point, chart derivatives 1..max_order zero),
    // then generic coefficient patterns; certified by the determinant
    // valuation of the operator matrix.
    QPoly find_multiplier_candidate(int degree, size_t index) const {
        static const int patterns[][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0},
                                          {0, 0, 0, 1}, {1, 1, 1, 1}, {1, 2, 3, 4},
                                          {1, 1, 2, 3}, {2, 1, 1, 1}, {1, 2, 4, 3},
                                          {1, 1, 1, 2}, {1, 3, 2, 1}, {3, 1, 4, 1}};
        constexpr size_t n_patterns = sizeof(patterns) / sizeof(patterns[0]);
        if (index >= n_patterns) throw reduction_error("multiplier candidates exhausted");
        QPoly L;
        QOps q;
        for (int v = 0; v < 4; ++v) {
            int c = patterns[index][v];
            if (!c) continue;
            if (Int(c) % Int(R_.p) == 0) ++c;
            Exp4 e{0, 0, 0, 0};
            e[v] = uint16_t(degree);
            poly_add_term(q, L, e, Rational(c));
        }
        return L;
    }

  private:
    // Select mu candidates whose operator-value columns admit the smallest
    // total pivot valuation (global min-valuation pivoting). With a rich
    // candidate pool the selection is unit-triangular and the operator
    // system costs no precision at all.
    LevelBasis select_level_basis(int pole,
                                  std::vector<std::array<RPoly, 4>> pool) const {
        LevelBasis lv;
        lv.pole = pole;
        std::vector<RPoly> pool_alphas;
        std::vector<RVec> cols;
        for (auto& comps : pool) {
            RPoly a = d_top(comps);
            RVec col(size_t(mu_), 0);
            for (int i = 0; i < mu_; ++i)
                col[size_t(i)] = apply_operator(rops_[size_t(i)], R_, a).v;
            pool_alphas.push_back(std::move(a));
            cols.push_back(std::move(col));
        }
        std::vector<bool> used_col(pool.size(), false);
        std::vector<bool> used_row(size_t(mu_), false);
        lv.det_valuation = 0;
        for (int step = 0; step < mu_; ++step) {
            size_t bc = pool.size();
            size_t br = 0;
            int bv = R_.n_work + 1;
            for (size_t c = 0; c < pool.size(); ++c) {
                if (used_col[c]) continue;
                for (size_t r = 0; r < size_t(mu_); ++r) {
                    if (used_row[r] || !cols[c][r]) continue;
                    int v = R_.valuation(cols[c][r]);
                    if (v < bv) {
                        bv = v;
                        bc = c;
                        br = r;
                    }
                }
                if (bv == 0) break;
            }
            if (bc == pool.size())
                throw reduction_error("singular operator system at pole " +
                                      std::to_string(pole));
            used_col[bc] = true;
            used_row[br] = true;
            lv.det_valuation += bv;
            // eliminate row br from the unused columns so later pivots are
            // honest (divisions by the valuated pivot must stay exact)
            limb pv = R_.ppow(bv);
            limb inv = R_.inv(cols[bc][br] / pv);
            for (size_t c = 0; c < pool.size(); ++c) {
                if (used_col[c] || !cols[c][br]) continue;
                if (cols[c][br] % pv) continue;  // cannot eliminate; left as is
                limb coef = R_.mul(cols[c][br] / pv, inv);
                for (size_t r = 0; r < size_t(mu_); ++r)
                    cols[c][r] = R_.sub(cols[c][r], R_.mul(coef, cols[bc][r]));
            }
            lv.betas.push_back(std::move(pool[bc]));
            lv.alphas.push_back(std::move(pool_alphas[bc]));
        }
        lv.op_matrix = RMatrix(size_t(mu_), size_t(mu_));
        for (int i = 0; i < mu_; ++i)
            for (int j = 0; j < mu_; ++j)
                lv.op_matrix.at(size_t(i), size_t(j)) =
                    apply_operator(rops_[size_t(i)], R_, lv.alphas[size_t(j)]).v;
        auto dv = r_det_valuation(R_, lv.op_matrix);
        if (!dv)
            throw reduction_error("singular operator system at pole " +
                                  std::to_string(pole));
        lv.det_valuation = *dv;
        lv.solve_loss = lv.det_valuation > 0 && !certify_integral_solves(lv)
                            ? lv.det_valuation
                            : 0;
        return lv;
    }

    // True iff [D_i(alpha_j)] a = [D_i(m)] solves exactly in Z/p^{n_work}
    // for every monomial m of the level degree.
    bool certify_integral_solves(const LevelBasis& lv) const {
        auto mons = monomial_basis(lv.pole * N_ - 4);
        RPoly m;
        for (auto& e : mons) {
            m.terms.clear();
            m.terms.emplace(e, TrackedResidue{1, R_.n_work});
            RVec rhs(size_t(mu_), 0);
            for (int i = 0; i < mu_; ++i)
                rhs[size_t(i)] = apply_operator(rops_[size_t(i)], R_, m).v;
            try {
                r_solve(R_, lv.op_matrix, std::move(rhs));
            } catch (const precision_error&) {
                return false;
            }
        }
        return true;
    }

    void build_base_betas() {
        // full kernel of df^ : Omega^3_{t0 N - 3} -> Omega^4 mod p^{n_work};
        // the operator functionals kill d(im df^), so any exact-kernel
        // subset works as a level basis and the selection is free to
        // optimize the pairing lattice.
        int d3 = t0_ * N_ - 3;
        auto cols = koszul_columns(ops_, fR_, 3, d3);
        RMatrix Mx(cols.empty() ? 0 : cols[0].size(), cols.size());
        for (size_t c = 0; c < cols.size(); ++c)
            for (size_t r = 0; r < cols[c].size(); ++r) Mx.at(r, c) = cols[c][r].v;
        auto gens = r_kernel_unit(R_, std::move(Mx));
        auto mons3 = monomial_basis(d3);
        for (auto& g : gens) {
            std::array<RPoly, 4> comps;
            for (size_t idx = 0; idx < g.size(); ++idx) {
                if (!g[idx]) continue;
                size_t ci = idx / mons3.size();
                comps[ci].terms.emplace(mons3[idx % mons3.size()],
                                        TrackedResidue{g[idx], R_.n_work});
            }
            base_pool_.push_back(std::move(comps));
        }
        LevelBasis base = select_level_basis(t0_, base_pool_);
        base_betas_ = base.betas;
        if (t0_ >= l_min_) levels_.emplace(t0_, std::move(base));
        if (int(base_betas_.size()) != mu_)
            throw reduction_error("level basis selection failed at the base level");
    }

    RPoly d_top(const std::array<RPoly, 4>& comps) const {
        RPoly out;
        const auto& sub3 = form_subsets()[3];
        for (size_t ci = 0; ci < 4; ++ci) {
            int vmiss = 0;
            for (int v = 0; v < 4; ++v)
                if (insert_sign(v, sub3[ci], 3)) vmiss = v;
            int s = insert_sign(vmiss, sub3[ci], 3);
            RPoly d = poly_partial(ops_, comps[ci], vmiss);
            if (s < 0) d = poly_scale(ops_, d, ops_.from_int(-1));
            out = poly_add(ops_, out, d);
        }
        return out;
    }

    LevelBasis build_level(int pole) {
        if (pole < l_min_) throw reduction_error("level below the stable range");
        int dL = (pole - t0_) * N_;
        if (dL == 0) return select_level_basis(pole, base_pool_);
        std::vector<std::array<RPoly, 4>> pool;
        for (size_t cand = 0; cand < 8; ++cand) {
            QPoly L;
            try {
                L = find_multiplier_candidate(dL, cand);
            } catch (const reduction_error&) {
                break;
            }
            RPoly LR = poly_reduce_mod(L, R_);
            for (auto& b : base_betas_) {
                std::array<RPoly, 4> lb;
                for (int ci = 0; ci < 4; ++ci) lb[ci] = poly_mul(ops_, LR, b[ci]);
                pool.push_back(std::move(lb));
            }
        }
        return select_level_basis(pole, pool);
    }

    struct Endgame {
        int pole = 0;
        int m = 0;
        std::vector<Exp4> mons;
        std::map<Exp4, size_t, GrevlexDesc> idx;
        std::vector<Exp4> reps;
        std::vector<size_t> rep_rows;
        // pivot row -> (reduced column, its Jacobian-part provenance). The
        // non-Jacobian part of every column is a d(beta) with df^beta = 0,
        // i.e. exact, so only the tracked Jacobian part continues downward.
        // Pivots may be p-divisible (the sub-stable V-space can drop rank
        // mod p even on an equisingular lift); eliminating against such a
        // pivot divides and costs its valuation in floor digits.
        struct Col {
            size_t pivot;
            int val;  // p-valuation of the pivot entry
            RVec v;
            RPoly j_part;
        };
        std::vector<Col> ech;
    };

    void build_endgame(const PageEntry& entry) {
        Endgame eg;
        eg.pole = entry.pole;
        eg.m = entry.coeff_degree;
        eg.mons = monomial_basis(eg.m);
        for (size_t i = 0; i < eg.mons.size(); ++i) eg.idx.emplace(eg.mons[i], i);
        eg.reps = entry.reps;
        std::vector<bool> is_rep(eg.mons.size(), false);
        for (auto& r : eg.reps) {
            eg.rep_rows.push_back(eg.idx.at(r));
            is_rep[eg.idx.at(r)] = true;
        }
        size_t dim = eg.mons.size();
        // V columns: J_m spanning set (Jacobian part = themselves), then
        // d(ker df^) one degree up (Jacobian part zero)
        std::vector<std::pair<RVec, RPoly>> vcols;
        if (eg.m >= N_ - 1) {
            auto qmons = monomial_basis(eg.m - (N_ - 1));
            for (int v = 0; v < 4; ++v) {
                RPoly fv = poly_partial(ops_, fR_, v);
                for (auto& q : qmons) {
                    RVec col(dim, 0);
                    RPoly jp;
                    for (auto& [e, c] : fv.terms) {
                        col[eg.idx.at(exp_add(e, q))] =
                            R_.add(col[eg.idx.at(exp_add(e, q))], c.v);
                        poly_add_term(ops_, jp, exp_add(e, q), c);
                    }
                    vcols.emplace_back(std::move(col), std::move(jp));
                }
            }
        }
        {
            auto cols = koszul_columns(ops_, fR_, 3, eg.m + 1);
            RMatrix Mx(cols.empty() ? 0 : cols[0].size(), cols.size());
            for (size_t c = 0; c < cols.size(); ++c)
                for (size_t r = 0; r < cols[c].size(); ++r) Mx.at(r, c) = cols[c][r].v;
            auto gens = r_kernel_unit(R_, std::move(Mx));
            auto mons3 = monomial_basis(eg.m + 1);
            const auto& sub3 = form_subsets()[3];
            for (auto& g : gens) {
                RVec col(dim, 0);
                for (size_t idx2 = 0; idx2 < g.size(); ++idx2) {
                    if (!g[idx2]) continue;
                    size_t ci = idx2 / mons3.size();
                    int vmiss = 0;
                    for (int v = 0; v < 4; ++v)
                        if (insert_sign(v, sub3[ci], 3)) vmiss = v;
                    int s = insert_sign(vmiss, sub3[ci], 3);
                    const Exp4& e = mons3[idx2 % mons3.size()];
                    if (!e[vmiss]) continue;
                    Exp4 e2 = e;
                    e2[vmiss] -= 1;
                    limb val = R_.mul(g[idx2], limb(e[vmiss]));
                    if (s < 0) val = R_.neg(val);
                    col[eg.idx.at(e2)] = R_.add(col[eg.idx.at(e2)], val);
                }
                vcols.emplace_back(std::move(col), RPoly{});
            }
        }
        // echelon with pivots restricted to non-representative monomials,
        // Jacobian provenance carried through the reductions. Global
        // min-valuation pivoting: the chosen pivot divides every remaining
        // entry of its row exactly.
        std::vector<bool> used(vcols.size(), false);
        std::vector<bool> row_used(dim, false);
        for (auto& r : eg.rep_rows) row_used[r] = true;
        for (;;) {
            size_t bc = vcols.size(), br = 0;
            int bv = R_.n_work + 1;
            for (size_t c = 0; c < vcols.size() && bv > 0; ++c) {
                if (used[c]) continue;
                for (size_t i = 0; i < dim; ++i) {
                    if (row_used[i] || !vcols[c].first[i]) continue;
                    int v = R_.valuation(vcols[c].first[i]);
                    if (v < bv) {
                        bv = v;
                        bc = c;
                        br = i;
                    }
                }
            }
            if (bc == vcols.size()) break;
            used[bc] = true;
            row_used[br] = true;
            Endgame::Col col{br, bv, std::move(vcols[bc].first),
                             std::move(vcols[bc].second)};
            limb pv = R_.ppow(bv);
            limb inv = R_.inv(col.v[br] / pv);
            for (size_t c = 0; c < vcols.size(); ++c) {
                if (used[c] || !vcols[c].first[br]) continue;
                limb coef = R_.mul(vcols[c].first[br] / pv, inv);
                for (size_t i = 0; i < dim; ++i)
                    vcols[c].first[i] =
                        R_.sub(vcols[c].first[i], R_.mul(coef, col.v[i]));
                if (!col.j_part.is_zero())
                    poly_axpy(ops_, vcols[c].second,
                              TrackedResidue{R_.neg(coef), R_.n_work}, col.j_part);
            }
            eg.ech.push_back(std::move(col));
        }
        if (eg.ech.size() + eg.reps.size() != dim)
            throw reduction_error(
                "endgame space at pole " + std::to_string(eg.pole) +
                " has the wrong rank (non-equisingular lift?)");
        endgames_.emplace(eg.pole, std::move(eg));
    }

    void reduce_term(PoleTerm term, std::vector<TrackedResidue>& coords,
                     PrecisionAudit* audit) {
        auto basis = page_.basis_elements();
        while (!term.numerator.is_zero() && term.pole >= l_min_) {
            auto [next, a] = reduce_pole_once(term, audit);
            term = std::move(next);
        }
        while (!term.numerator.is_zero() && term.pole >= 1) {
            auto it = endgames_.find(term.pole);
            if (it == endgames_.end())
                throw reduction_error("missing endgame table at pole " +
                                      std::to_string(term.pole));
            const Endgame& eg = it->second;
            int fl = poly_min_floor(term.numerator, R_.n_work);
            // dense vector of the numerator; accumulate the Jacobian part of
            // the V-component as the echelon reduces it
            RVec v(eg.mons.size(), 0);
            for (auto& [e, c] : term.numerator.terms) v[eg.idx.at(e)] = c.v;
            RPoly j_acc;
            for (auto& col : eg.ech) {
                if (v[col.pivot]) {
                    limb pv = R_.ppow(col.val);
                    if (v[col.pivot] % pv)
                        throw precision_error(
                            "inexact endgame elimination at pole " +
                            std::to_string(term.pole));
                    if (col.val) {
                        fl -= col.val;
                        if (audit) audit->solve_digit_events += col.val;
                    }
                    limb coef =
                        R_.mul(v[col.pivot] / pv, R_.inv(col.v[col.pivot] / pv));
                    for (size_t i = 0; i < v.size(); ++i)
                        v[i] = R_.sub(v[i], R_.mul(coef, col.v[i]));
                    if (!col.j_part.is_zero())
                        poly_axpy(ops_, j_acc, TrackedResidue{coef, fl}, col.j_part);
                }
            }
            // residual must sit on the representatives
            for (size_t ri = 0; ri < eg.reps.size(); ++ri) {
                limb c = v[eg.rep_rows[ri]];
                v[eg.rep_rows[ri]] = 0;
                for (size_t bi = 0; bi < basis.size(); ++bi)
                    if (basis[bi].second == eg.pole && basis[bi].first == eg.reps[ri]) {
                        coords[bi] = tr_add(R_, coords[bi], TrackedResidue{c, fl});
                        break;
                    }
            }
            for (size_t i = 0; i < v.size(); ++i)
                if (v[i])
                    throw reduction_error(
                        "endgame residual escapes the representatives at pole " +
                        std::to_string(term.pole));
            if (term.pole == 1) break;
            // the d(beta) part of the V-component is exact and dropped; the
            // Jacobian part continues one pole down
            auto cof = rgb_.lift(j_acc);
            RPoly div;
            for (int vv = 0; vv < 4; ++vv)
                div = poly_add(ops_, div, poly_partial(ops_, cof[vv], vv));
            Int denom = term.pole - 1;
            if (audit) {
                int dv = p_valuation(denom, Int(R_.p));
                if (dv > 0) audit->lower_digit_events += dv;
            }
            term.numerator = poly_div_int(R_, div, denom);
            term.pole -= 1;
        }
    }

    QPoly f_;
    PageReport page_;
    ResidueRing R_;
    int N_;
    ROps ops_;
    RPoly fR_;
    GroebnerContext gctx_;
    ResidueGB rgb_;
    std::vector<AnnihilatorOperator> qops_;
    std::vector<ROperator> rops_;
    int mu_ = 0;
    int max_order_ = 0;
    int t0_ = 0;
    int l_min_ = 0;
    std::vector<std::array<RPoly, 4>> base_pool_;
    std::vector<std::array<RPoly, 4>> base_betas_;
    std::map<int, LevelBasis> levels_;
    std::map<int, Endgame> endgames_;
    std::vector<int> last_matrix_floors_;
};

}  // namespace adezeta
