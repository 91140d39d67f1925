#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rational.hpp"
#include "residue.hpp"

// Exact dense linear algebra, over Q and over Z/p^N. Everything is small
// enough for straightforward Gaussian elimination; the residue-side solver
// tolerates p-divisible pivots and reports the precision digits spent.

namespace adezeta {

using QVec = std::vector<Rational>;

// Incremental echelon basis over Q; vectors keyed by pivot index.
struct QEchelon {
    // pivot index -> reduced vector (vector[pivot] != 0)
    std::vector<std::pair<size_t, QVec>> basis;

    void reduce(QVec& v) const {
        for (auto& [p, b] : basis) {
            if (v[p] != 0) {
                Rational coef = v[p] / b[p];
                for (size_t i = 0; i < v.size(); ++i)
                    if (b[i] != 0) v[i] -= coef * b[i];
            }
        }
    }
    // Returns true (and absorbs v) if v is independent of the basis.
    bool insert(QVec v) {
        reduce(v);
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i] != 0) {
                basis.emplace_back(i, std::move(v));
                return true;
            }
        }
        return false;
    }
    size_t rank() const { return basis.size(); }
};

inline size_t q_rank(const std::vector<QVec>& cols) {
    QEchelon e;
    for (auto& c : cols) e.insert(c);
    return e.rank();
}

// Kernel of the linear map sending basis column j to cols[j]; returns
// coefficient vectors over the column index.
inline std::vector<QVec> q_kernel(const std::vector<QVec>& cols) {
    std::vector<QVec> kernel;
    // echelon with combination tracking
    std::vector<std::pair<size_t, std::pair<QVec, QVec>>> basis;  // pivot -> (vec, combo)
    size_t n = cols.size();
    for (size_t j = 0; j < n; ++j) {
        QVec v = cols[j];
        QVec combo(n, Rational(0));
        combo[j] = 1;
        for (auto& [p, vc] : basis) {
            if (v[p] != 0) {
                Rational coef = v[p] / vc.first[p];
                for (size_t i = 0; i < v.size(); ++i)
                    if (vc.first[i] != 0) v[i] -= coef * vc.first[i];
                for (size_t i = 0; i < n; ++i)
                    if (vc.second[i] != 0) combo[i] -= coef * vc.second[i];
            }
        }
        bool zero = true;
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) {
                basis.emplace_back(i, std::make_pair(std::move(v), std::move(combo)));
                zero = false;
                break;
            }
        if (zero) kernel.push_back(std::move(combo));
    }
    return kernel;
}

// Scale a rational vector to a primitive integer one.
inline std::vector<Int> q_primitive(const QVec& v) {
    Int l = 1;
    for (auto& x : v) {
        Int d = rat_den(x);
        l = boost::multiprecision::lcm(l, d);
    }
    std::vector<Int> out(v.size());
    Int g = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        out[i] = rat_num(v[i]) * (l / rat_den(v[i]));
        g = boost::multiprecision::gcd(g, out[i]);
    }
    if (g > 1)
        for (auto& x : out) x /= g;
    return out;
}

// ---- residue side ---------------------------------------------------------

using RVec = std::vector<limb>;

struct RMatrix {
    size_t rows = 0, cols = 0;
    std::vector<limb> a;  // row-major
    RMatrix() = default;
    RMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}
    limb& at(size_t r, size_t c) { return a[r * cols + c]; }
    limb at(size_t r, size_t c) const { return a[r * cols + c]; }
};

// Row echelon with unit pivots (p-divisible pivot candidates are skipped, so
// the computed rank is the F_p rank). Returns pivot columns; m is reduced in
// place to reduced row echelon form on the pivot set.
inline std::vector<size_t> r_echelon_unit(const ResidueRing& R, RMatrix& m) {
    std::vector<size_t> pivots;
    size_t rr = 0;
    for (size_t c = 0; c < m.cols && rr < m.rows; ++c) {
        size_t pr = rr;
        while (pr < m.rows && !R.is_unit(m.at(pr, c))) ++pr;
        if (pr == m.rows) continue;
        if (pr != rr)
            for (size_t j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(rr, j));
        limb inv = R.inv(m.at(rr, c));
        for (size_t j = c; j < m.cols; ++j) m.at(rr, j) = R.mul(m.at(rr, j), inv);
        for (size_t r = 0; r < m.rows; ++r) {
            if (r == rr) continue;
            limb coef = m.at(r, c);
            if (!coef) continue;
            for (size_t j = c; j < m.cols; ++j)
                m.at(r, j) = R.sub(m.at(r, j), R.mul(coef, m.at(rr, j)));
        }
        pivots.push_back(c);
        ++rr;
    }
    return pivots;
}

// Kernel of m (as a map on column vectors), assuming every pivot is a p-unit
// so the kernel is spanned by one generator per free column.
inline std::vector<RVec> r_kernel_unit(const ResidueRing& R, RMatrix m) {
    auto pivots = r_echelon_unit(R, m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<RVec> gens;
    for (size_t fc = 0; fc < m.cols; ++fc) {
        if (is_pivot[fc]) continue;
        RVec v(m.cols, 0);
        v[fc] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = R.neg(m.at(i, fc));
        gens.push_back(std::move(v));
    }
    return gens;
}

// Square solve A x = b over Z/p^N tolerating p-divisible pivots: picks the
// minimum-valuation pivot per column, checks that every division is exact,
// and reports the total precision digits consumed. Throws precision_error on
// a singular matrix or an inexact division.
struct RSolveResult {
    RVec x;
    int digits_lost = 0;
};

inline RSolveResult r_solve(const ResidueRing& R, RMatrix A, RVec b) {
    size_t n = A.rows;
    if (A.cols != n || b.size() != n) throw std::invalid_argument("r_solve shape");
    int det_val = 0;  // Cramer: solutions lose v_p(det A) digits
    // forward elimination: the minimum-valuation pivot divides everything
    // below it exactly
    for (size_t c = 0; c < n; ++c) {
        size_t best = n;
        int bv = R.n_work + 1;
        for (size_t r = c; r < n; ++r) {
            limb x = A.at(r, c);
            if (!x) continue;
            int v = R.valuation(x);
            if (v < bv) {
                bv = v;
                best = r;
            }
        }
        if (best == n) throw precision_error("singular operator system");
        if (best != c) {
            for (size_t j = 0; j < n; ++j) std::swap(A.at(best, j), A.at(c, j));
            std::swap(b[best], b[c]);
        }
        det_val += bv;
        limb pv = R.ppow(bv);
        limb inv = R.inv(A.at(c, c) / pv);
        for (size_t r = c + 1; r < n; ++r) {
            limb x = A.at(r, c);
            if (!x) continue;
            limb coef = R.mul(x / pv, inv);
            for (size_t j = c; j < n; ++j)
                A.at(r, j) = R.sub(A.at(r, j), R.mul(coef, A.at(c, j)));
            b[r] = R.sub(b[r], R.mul(coef, b[c]));
        }
    }
    // back substitution with divisibility checks on the pivots
    RVec x(n);
    for (size_t c = n; c-- > 0;) {
        limb acc = b[c];
        for (size_t j = c + 1; j < n; ++j)
            acc = R.sub(acc, R.mul(A.at(c, j), x[j]));
        limb d = A.at(c, c);
        int v = R.valuation(d);
        if (v > 0) {
            limb pv = R.ppow(v);
            if (acc % pv) throw precision_error("inexact operator solve");
            x[c] = R.mul(acc / pv, R.inv(d / pv));
        } else {
            x[c] = R.mul(acc, R.inv(d));
        }
    }
    RSolveResult res;
    res.x = std::move(x);
    res.digits_lost = det_val;
    return res;
}

// p-adic valuation of det(A); nullopt when singular mod p^N (or when an
// elimination step cannot be carried out exactly).
inline std::optional<int> r_det_valuation(const ResidueRing& R, RMatrix A) {
    size_t n = A.rows;
    int val = 0;
    for (size_t c = 0; c < n; ++c) {
        size_t best = n;
        int bv = R.n_work + 1;
        for (size_t r = c; r < n; ++r) {
            limb x = A.at(r, c);
            if (!x) continue;
            int v = R.valuation(x);
            if (v < bv) {
                bv = v;
                best = r;
            }
        }
        if (best == n) return std::nullopt;
        if (best != c)
            for (size_t j = 0; j < n; ++j) std::swap(A.at(best, j), A.at(c, j));
        val += bv;
        limb pv = R.ppow(bv);
        limb inv = R.inv(A.at(c, c) / pv);
        for (size_t r = c + 1; r < n; ++r) {
            limb x = A.at(r, c);
            if (!x) continue;
            if (x % pv) return std::nullopt;
            limb coef = R.mul(x / pv, inv);
            for (size_t j = c; j < n; ++j)
                A.at(r, j) = R.sub(A.at(r, j), R.mul(coef, A.at(c, j)));
        }
    }
    return val;
}

}  // namespace adezeta
