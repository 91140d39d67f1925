#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "residue.hpp"

// From the Frobenius matrix to the zeta function: division-free reciprocal
// characteristic polynomial (Berkowitz), symmetric-range integer lifting
// under the Weil bound, and the product-formula assembly
// Z(t) = 1/((1-t)(1-pt)(1-p^2 t) p(t)).

namespace adezeta {

struct zeta_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coefficients of det(1 - tA) via the Berkowitz recursion (no divisions, so
// no precision is spent). Returned floors are the minimum over the inputs.
inline std::vector<TrackedResidue> char_reciprocal_poly(const ResidueRing& R,
                                                        const RMatrix& A,
                                                        int floor_in) {
    size_t n = A.rows;
    std::vector<limb> poly{1 % R.modulus};
    if (n > 0) {
        poly = {1 % R.modulus, R.neg(A.at(0, 0))};
        for (size_t i = 1; i < n; ++i) {
            // c[0]=1, c[1]=-A[i][i], c[k]=-(row . M^{k-2} . col)
            std::vector<limb> c(i + 2);
            c[0] = 1 % R.modulus;
            c[1] = R.neg(A.at(i, i));
            std::vector<limb> vec(i);
            for (size_t r = 0; r < i; ++r) vec[r] = A.at(r, i);
            for (size_t k = 2; k < i + 2; ++k) {
                limb dot = 0;
                for (size_t r = 0; r < i; ++r) dot = R.add(dot, R.mul(A.at(i, r), vec[r]));
                c[k] = R.neg(dot);
                if (k + 1 < i + 2) {
                    std::vector<limb> nxt(i, 0);
                    for (size_t r = 0; r < i; ++r)
                        for (size_t s = 0; s < i; ++s)
                            nxt[r] = R.add(nxt[r], R.mul(A.at(r, s), vec[s]));
                    vec = std::move(nxt);
                }
            }
            std::vector<limb> np(i + 2, 0);
            for (size_t j = 0; j < np.size(); ++j)
                for (size_t k = 0; k <= j && k < c.size(); ++k)
                    if (j - k < poly.size())
                        np[j] = R.add(np[j], R.mul(c[k], poly[j - k]));
            poly = std::move(np);
        }
    }
    std::vector<TrackedResidue> out;
    for (auto v : poly) out.push_back({v, floor_in});
    return out;
}

// Smallest N with p^N > 2 C(M, floor(M/2)) q^M.
inline int minimal_precision(int M, uint64_t p, uint64_t q) {
    Int bound = 2 * binomial(unsigned(M), unsigned(M / 2)) * int_pow(Int(q), unsigned(M));
    Int pw = 1;
    int n = 0;
    while (pw <= bound) {
        pw *= p;
        ++n;
    }
    return n;
}

// Symmetric-range lift of det(1-tA) to Z[t]; coefficient k is bounded by
// C(M,k) q^k since the reciprocal roots have absolute value at most q.
// valid_digits caps the digits trusted beyond the arithmetic floor (the
// truncation of the Frobenius series only certifies that many).
inline std::vector<Int> lift_to_integers(const ResidueRing& R,
                                         const std::vector<TrackedResidue>& poly,
                                         int M, uint64_t q,
                                         int valid_digits = 1 << 20) {
    std::vector<Int> out;
    for (size_t k = 0; k < poly.size(); ++k) {
        Int bound = binomial(unsigned(M), unsigned(k)) * int_pow(Int(q), unsigned(k));
        int fl = std::min(std::min(poly[k].floor, R.n_work), valid_digits);
        Int pf = int_pow(Int(R.p), unsigned(std::max(fl, 0)));
        if (pf <= 2 * bound) {
            int need = 0;
            Int pw = 1;
            while (pw <= 2 * bound) {
                pw *= R.p;
                ++need;
            }
            throw precision_error("insufficient precision to lift coefficient " +
                                  std::to_string(k) + ": have p^" + std::to_string(fl) +
                                  ", need p^" + std::to_string(need));
        }
        Int v = limb_to_int(poly[k].v) % pf;
        if (v > pf / 2) v -= pf;
        if (abs(v) > bound)
            throw zeta_error("lifted coefficient " + std::to_string(k) +
                             " violates the Weil bound");
        out.push_back(v);
    }
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
}

struct ZetaFunction {
    uint64_t p = 0;
    std::vector<Int> p_poly;  // det(1 - t q^3 Frob^{-1}), p_poly[0] = 1

    int deg() const { return int(p_poly.size()) - 1; }
};

inline ZetaFunction assemble_zeta(std::vector<Int> p_poly, uint64_t p) {
    if (p_poly.empty() || p_poly[0] != 1) throw zeta_error("p(t) must have p(0) = 1");
    ZetaFunction z;
    z.p = p;
    z.p_poly = std::move(p_poly);
    return z;
}

// Power sums of the reciprocal roots of p(t) via Newton's identities.
inline std::vector<Int> reciprocal_root_power_sums(const std::vector<Int>& p_poly,
                                                   int R) {
    int deg = int(p_poly.size()) - 1;
    std::vector<Int> e(size_t(std::max(deg, R)) + 1, Int(0));
    for (int k = 0; k <= deg; ++k) e[size_t(k)] = ((k % 2) ? -1 : 1) * p_poly[size_t(k)];
    std::vector<Int> s(size_t(R) + 1, Int(0));
    for (int k = 1; k <= R; ++k) {
        Int acc = 0;
        for (int i = 1; i < k; ++i) acc += ((i % 2) ? 1 : -1) * e[size_t(i)] * s[size_t(k - i)];
        acc += ((k % 2) ? 1 : -1) * Int(k) * e[size_t(k)];
        s[size_t(k)] = acc;
    }
    s.erase(s.begin());
    return s;  // s[r-1] = sum alpha_i^r
}

// N_r predicted by Z(t) = 1/((1-t)(1-pt)(1-p^2 t) p(t)).
inline Int predicted_count(const ZetaFunction& z, int r) {
    Int q = int_pow(Int(z.p), unsigned(r));
    Int n = 1 + q + q * q;
    auto s = reciprocal_root_power_sums(z.p_poly, r);
    return n + s[size_t(r) - 1];
}

struct WeilReport {
    bool lead_ok = true;
    bool roots_ok = true;
    double max_abs_root = 0.0;
    std::string note;
};

// Advisory checks: |leading coefficient| = q^deg and all reciprocal roots of
// absolute value <= q (numerical, diagnostic only).
inline WeilReport weil_sanity(const std::vector<Int>& p_poly, uint64_t q) {
    WeilReport rep;
    int deg = int(p_poly.size()) - 1;
    if (deg <= 0) {
        rep.note = "p(t) = 1, vacuous";
        return rep;
    }
    Int lead = p_poly[size_t(deg)];
    rep.lead_ok = (abs(lead) == int_pow(Int(q), unsigned(deg)));
    // Durand-Kerner on the reversed polynomial (roots = reciprocal roots)
    std::vector<std::complex<double>> coef(size_t(deg) + 1);
    for (int k = 0; k <= deg; ++k)
        coef[size_t(k)] = std::complex<double>(double(p_poly[size_t(deg - k)]), 0.0);
    std::vector<std::complex<double>> roots;
    roots.resize(size_t(deg));
    for (int i = 0; i < deg; ++i)
        roots[size_t(i)] = std::polar(double(q) * 0.7, 0.4 + 2.7 * i);
    for (int it = 0; it < 400; ++it) {
        for (int i = 0; i < deg; ++i) {
            std::complex<double> num = coef[0];
            for (int k = 1; k <= deg; ++k)
                num = num * roots[size_t(i)] + coef[size_t(k)];
            std::complex<double> den = coef[0];
            for (int j2 = 0; j2 < deg; ++j2)
                if (j2 != i) den *= roots[size_t(i)] - roots[size_t(j2)];
            if (std::abs(den) > 1e-300) roots[size_t(i)] -= num / den;
        }
    }
    // the polynomial here is reversed, so its roots are 1/alpha; invert back
    for (auto& r : roots) {
        double a = std::abs(r) > 1e-12 ? 1.0 / std::abs(r) : 1e18;
        rep.max_abs_root = std::max(rep.max_abs_root, a);
    }
    rep.roots_ok = rep.max_abs_root <= double(q) * (1.0 + 5e-3);
    return rep;
}

// Factored display in the examples' style: split off (1 - c t) factors with
// c = +-p^j, print any residual factor raw.
inline std::string int_poly_string(const std::vector<Int>& poly,
                                   const std::string& var = "t") {
    if (poly.empty()) return "0";
    std::string s;
    for (size_t k = 0; k < poly.size(); ++k) {
        if (poly[k] == 0) continue;
        std::string c = poly[k].str();
        if (!s.empty() && poly[k] > 0) c = "+" + c;
        s += c;
        if (k >= 1) s += "*" + var;
        if (k > 1) s += "^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
}

inline std::string zeta_factor_string(const ZetaFunction& z, const std::string& var = "T") {
    std::vector<Int> rem = z.p_poly;
    auto try_divide = [&](const Int& c) {
        if (rem.size() < 2) return false;
        std::vector<Int> q(rem.size() - 1);
        std::vector<Int> cur = rem;
        for (size_t k = 0; k + 1 < rem.size(); ++k) {
            q[k] = cur[k];
            cur[k + 1] += c * q[k];
            cur[k] = 0;
        }
        if (cur.back() != 0) return false;
        rem = std::move(q);
        return true;
    };
    std::vector<int> mult_minus(8, 0), mult_plus(8, 0);
    mult_minus[0] = mult_minus[1] = mult_minus[2] = 1;  // (1-T)(1-pT)(1-p^2 T)
    for (unsigned j = 0; j <= 7; ++j) {
        Int pj = int_pow(Int(z.p), j);
        while (try_divide(pj)) mult_minus[j] += 1;
        while (try_divide(-pj)) mult_plus[j] += 1;
    }
    std::string den;
    for (unsigned j = 0; j <= 7; ++j) {
        std::string pw = (j == 0) ? "" : int_pow(Int(z.p), j).str();
        if (mult_minus[j]) {
            den += "(1-" + pw + var + ")";
            if (mult_minus[j] > 1) den += "^" + std::to_string(mult_minus[j]);
        }
        if (mult_plus[j]) {
            den += "(1+" + pw + var + ")";
            if (mult_plus[j] > 1) den += "^" + std::to_string(mult_plus[j]);
        }
    }
    if (rem.size() > 1) den += "(" + int_poly_string(rem, var) + ")";
    return "1/(" + den + ")";
}

}  // namespace adezeta
