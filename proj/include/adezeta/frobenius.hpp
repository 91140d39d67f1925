#pragma once

#include <vector>

#include "polynomial.hpp"

// The p-adic Frobenius machinery: Delta = f^p - f(x^p), the psi operator,
// and the truncated term streams for the inverse (production) and forward
// (oracle) Frobenius actions. The matrix assembled downstream is that of
// q^3 Frob^{-1}: the p^3 prefactor is never divided out.

namespace adezeta {

struct ZOps {
    using C = Int;
    Int add(const Int& a, const Int& b) const { return a + b; }
    Int sub(const Int& a, const Int& b) const { return a - b; }
    Int mul(const Int& a, const Int& b) const { return a * b; }
    Int neg(const Int& a) const { return -a; }
    Int from_int(long v) const { return Int(v); }
    bool is_zero(const Int& a) const { return a == 0; }
};

using ZPoly = SparsePoly<Int>;

inline ZPoly to_zpoly(const QPoly& f) {
    ZPoly out;
    for (auto& [e, c] : f.terms) {
        if (rat_den(c) != 1) throw parse_error("expected integer coefficients");
        out.terms.emplace(e, rat_num(c));
    }
    return out;
}

struct PoleTerm {
    RPoly numerator;
    int pole = 1;  // represents numerator * Omega / f^pole
};

// Delta = f^p - f(x^p) and g = Delta / p, exactly over Z.
inline std::pair<ZPoly, ZPoly> frobenius_delta(const QPoly& f, uint64_t p) {
    ZOps z;
    ZPoly zf = to_zpoly(f);
    ZPoly fp = poly_pow(z, zf, unsigned(p));
    ZPoly fxp;
    for (auto& [e, c] : zf.terms)
        fxp.terms.emplace(Exp4{uint16_t(e[0] * p), uint16_t(e[1] * p),
                               uint16_t(e[2] * p), uint16_t(e[3] * p)},
                          c);
    ZPoly delta = poly_sub(z, fp, fxp);
    ZPoly g;
    for (auto& [e, c] : delta.terms) {
        if (c % Int(p) != 0) throw parse_error("Delta is not divisible by p");
        g.terms.emplace(e, c / Int(p));
    }
    return {delta, g};
}

// alpha_k = C(l+k-1, k), the coefficients of (1-t)^{-l}.
inline std::vector<Int> series_coeffs(int l, int K) {
    std::vector<Int> out;
    for (int k = 0; k <= K; ++k) out.push_back(binomial(unsigned(l + k - 1), unsigned(k)));
    return out;
}

// psi(prod x_i^{a_i}) = prod x_i^{a_i/p} when every a_i is divisible by p,
// else 0; extended linearly with coefficients unchanged.
template <class C>
SparsePoly<C> psi(const SparsePoly<C>& h, uint64_t p) {
    SparsePoly<C> out;
    for (auto& [e, c] : h.terms) {
        if (e[0] % p || e[1] % p || e[2] % p || e[3] % p) continue;
        out.terms.emplace(Exp4{uint16_t(e[0] / p), uint16_t(e[1] / p),
                               uint16_t(e[2] / p), uint16_t(e[3] / p)},
                          c);
    }
    return out;
}

namespace detail {

template <class C>
SparsePoly<C> exp_scale_poly(const SparsePoly<C>& h, unsigned p) {
    SparsePoly<C> out;
    for (auto& [e, c] : h.terms)
        out.terms.emplace(Exp4{uint16_t(e[0] * p), uint16_t(e[1] * p),
                               uint16_t(e[2] * p), uint16_t(e[3] * p)},
                          c);
    return out;
}

inline RPoly divide_wxyz(const RPoly& h) {
    RPoly out;
    for (auto& [e, c] : h.terms) {
        if (!e[0] || !e[1] || !e[2] || !e[3])
            throw precision_error("inexact division by wxyz in a psi image");
        out.terms.emplace(Exp4{uint16_t(e[0] - 1), uint16_t(e[1] - 1),
                               uint16_t(e[2] - 1), uint16_t(e[3] - 1)},
                          c);
    }
    return out;
}

}  // namespace detail

// p^3 * Frob^{-1}(h Omega / f^l) truncated at k = K, as a list of PoleTerms.
// Derivation: with r = ceil(l/p), 1/f^l = f^{pr-l} (f^r(x^p) + Delta_r)^{-1}
// expanded geometrically, Delta_r = f^{pr} - f^r(x^p); term k is
// psi(f^{pr-l} h wxyz (-Delta_r)^k)/wxyz at pole r(k+1). For l <= p this is
// the plain series with exponent k and alternating sign.
inline std::vector<PoleTerm> inverse_frobenius_terms(const QPoly& f, const RPoly& h,
                                                     int l, int K,
                                                     const ResidueRing& R) {
    ROps ops{R};
    uint64_t p = R.p;
    int r = (l + int(p) - 1) / int(p);
    RPoly fR = poly_reduce_mod(f, R);
    RPoly fr = poly_pow(ops, fR, unsigned(r));
    RPoly delta_r = poly_sub(ops, poly_pow(ops, fr, unsigned(p)),
                             detail::exp_scale_poly(fr, unsigned(p)));
    RPoly wxyz;
    wxyz.terms.emplace(Exp4{1, 1, 1, 1}, ops.from_int(1));
    RPoly base = poly_mul(ops, poly_pow(ops, fR, unsigned(int(p) * r - l)),
                          poly_mul(ops, h, wxyz));
    std::vector<PoleTerm> out;
    RPoly cur = base;
    for (int k = 0; k <= K; ++k) {
        PoleTerm t;
        t.numerator = detail::divide_wxyz(psi(cur, p));
        t.pole = r * (k + 1);
        out.push_back(std::move(t));
        if (k < K) cur = poly_scale(ops, poly_mul(ops, cur, delta_r),
                                    ops.from_int(-1));
    }
    return out;
}

// Forward Frobenius term stream (oracle only): term k has numerator
// p^{3+k} alpha_k h(x^p) prod x_i^{p-1} g^k and pole p(l+k).
inline std::vector<std::pair<ZPoly, int>> forward_frobenius_terms(const QPoly& f,
                                                                  const ZPoly& h,
                                                                  int l, uint64_t p,
                                                                  int K) {
    ZOps z;
    auto [delta, g] = frobenius_delta(f, p);
    auto alpha = series_coeffs(l, K);
    ZPoly hxp = detail::exp_scale_poly(h, unsigned(p));
    ZPoly xprod;
    xprod.terms.emplace(Exp4{uint16_t(p - 1), uint16_t(p - 1), uint16_t(p - 1),
                             uint16_t(p - 1)},
                        Int(1));
    ZPoly cur = poly_mul(z, hxp, xprod);
    Int scale = int_pow(Int(p), 3);
    std::vector<std::pair<ZPoly, int>> out;
    for (int k = 0; k <= K; ++k) {
        ZPoly term = poly_scale(z, cur, scale * alpha[size_t(k)]);
        out.emplace_back(std::move(term), int(p) * (l + k));
        if (k < K) {
            cur = poly_mul(z, cur, g);
            scale *= Int(p);
        }
    }
    return out;
}

// ---- dense power stream ----------------------------------------------------

// Streams f, f^2, f^3, ... as dense homogeneous coefficient arrays mod
// p^{n_work}, extracting psi slices at checkpoints. Indexing drops the
// w-exponent: rank(e1,e2,e3) = C(s+2,3) + C(s2+1,2) + e3 with s = e1+e2+e3
// and s2 = e2+e3, which is degree-independent.
class PowerStream {
  public:
    PowerStream(const QPoly& f, const ResidueRing& R, int max_power)
        : R_(R), N_(*f.homogeneous_degree()) {
        int maxdeg = N_ * max_power + 8;
        c3_.resize(maxdeg + 4);
        c2_.resize(maxdeg + 4);
        for (size_t n = 0; n < c3_.size(); ++n) {
            c2_[n] = n * (n - 1) / 2;
            c3_[n] = n * (n - 1) * (n - 2) / 6;
        }
        for (auto& [e, q] : f.terms) {
            Term t;
            t.da = e[1] + e[2] + e[3];
            t.db = e[2] + e[3];
            t.a3 = e[3];
            t.coeff = R.reduce_rational(q);
            terms_.push_back(t);
        }
        cur_.assign(1, 1 % R.modulus);
        power_ = 0;
    }

    int power() const { return power_; }

    void step() {
        int D = N_ * power_;
        int D2 = D + N_;
        std::vector<limb> next(rank(0, 0, uint64_t(D2)) + 1, 0);
        for (auto& t : terms_) {
            size_t src = 0;
            for (int s = 0; s <= D; ++s) {
                for (int s2 = 0; s2 <= s; ++s2) {
                    size_t tgt = c3_[s + t.da + 2] + c2_[s2 + t.db + 1] + t.a3;
                    const limb* in = cur_.data() + src;
                    limb* out = next.data() + tgt;
                    for (int e3 = 0; e3 <= s2; ++e3)
                        out[e3] = R_.add(out[e3], R_.mul(in[e3], t.coeff));
                    src += s2 + 1;
                }
            }
        }
        cur_ = std::move(next);
        ++power_;
    }

    // psi(x^b * f^power)/wxyz with all entries of b >= 1; requires
    // deg(x^b * f^power) divisible by p.
    RPoly psi_slice(const Exp4& b) const {
        uint64_t p = R_.p;
        int D = N_ * power_;
        RPoly out;
        int r1 = int((p - b[1] % p) % p);
        int r2 = int((p - b[2] % p) % p);
        int r3 = int((p - b[3] % p) % p);
        for (int e1 = r1; e1 <= D; e1 += int(p)) {
            for (int e2 = r2; e1 + e2 <= D; e2 += int(p)) {
                size_t base0 = 0;
                for (int e3 = r3; e1 + e2 + e3 <= D; e3 += int(p)) {
                    limb v = cur_[rank(e1, e2, e3)];
                    if (!v) continue;
                    int e0 = D - e1 - e2 - e3;
                    Exp4 e{uint16_t((e0 + b[0]) / p - 1), uint16_t((e1 + b[1]) / p - 1),
                           uint16_t((e2 + b[2]) / p - 1), uint16_t((e3 + b[3]) / p - 1)};
                    if ((e0 + b[0]) % p)
                        throw precision_error("psi slice misaligned in w");
                    out.terms.emplace(e, TrackedResidue{v, R_.n_work});
                    (void)base0;
                }
            }
        }
        return out;
    }

  private:
    size_t rank(uint64_t e1, uint64_t e2, uint64_t e3) const {
        uint64_t s = e1 + e2 + e3, s2 = e2 + e3;
        return c3_[s + 2] + c2_[s2 + 1] + e3;
    }

    struct Term {
        int da, db, a3;
        limb coeff;
    };
    ResidueRing R_;
    int N_;
    std::vector<Term> terms_;
    std::vector<size_t> c3_, c2_;
    std::vector<limb> cur_;
    int power_ = 0;
};

}  // namespace adezeta
