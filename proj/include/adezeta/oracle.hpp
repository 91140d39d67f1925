#pragma once

#include <numeric>
#include <vector>

#include "zeta.hpp"
#include "polynomial.hpp"

// Brute-force verification: F_{p^r} arithmetic with log/exp tables,
// projective point counting by normalized representatives, and the zeta
// series consistency check.

namespace adezeta {

struct oracle_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ExtensionField {
  public:
    uint64_t p = 0;
    int r = 1;
    uint64_t q = 0;
    std::vector<int> modulus;  // monic, coefficients of 1, x, .., x^{r-1}

    static ExtensionField build(uint64_t p, int r) {
        ExtensionField F;
        F.p = p;
        F.r = r;
        F.q = 1;
        for (int i = 0; i < r; ++i) F.q *= p;
        if (r == 1) {
            F.modulus = {0};
        } else {
            F.modulus = first_irreducible(p, r);
        }
        F.build_tables();
        return F;
    }

    // elements are integers 0..q-1, base-p digits = coefficients
    uint64_t add(uint64_t a, uint64_t b) const {
        if (!add_table_.empty()) return add_table_[a * q + b];
        return add_slow(a, b);
    }
    uint64_t mul(uint64_t a, uint64_t b) const {
        if (!a || !b) return 0;
        return exp_[(log_[a] + log_[b]) % (q - 1)];
    }
    uint64_t pow(uint64_t a, uint64_t e) const {
        if (e == 0) return 1;
        if (!a) return 0;
        return exp_[(log_[a] % (q - 1)) * (e % (q - 1)) % (q - 1)];
    }
    uint64_t neg(uint64_t a) const {
        uint64_t out = 0, mul = 1;
        for (int i = 0; i < r; ++i) {
            uint64_t d = (a / mul) % p;
            out += ((p - d) % p) * mul;
            mul *= p;
        }
        return out;
    }
    uint64_t embed(Int n) const {
        n %= Int(p);
        if (n < 0) n += p;
        return uint64_t(n);
    }
    // multiplicative order of a nonzero element
    uint64_t element_order(uint64_t a) const {
        uint64_t l = log_[a];
        uint64_t g = std::gcd(l, q - 1);
        return (q - 1) / (g ? g : (q - 1));
    }

  private:
    std::vector<uint64_t> exp_, log_;
    std::vector<uint16_t> add_table_;

    uint64_t add_slow(uint64_t a, uint64_t b) const {
        uint64_t out = 0, mul = 1;
        for (int i = 0; i < r; ++i) {
            out += ((a % p) + (b % p)) % p * mul;
            a /= p;
            b /= p;
            mul *= p;
        }
        return out;
    }

    static std::vector<int> poly_mul_mod(const std::vector<int>& a,
                                         const std::vector<int>& b,
                                         const std::vector<int>& mod, uint64_t p) {
        int r = int(mod.size());
        std::vector<int> res(a.size() + b.size() - 1, 0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j)
                res[i + j] = int((res[i + j] + int64_t(a[i]) * b[j]) % int64_t(p));
        for (int i = int(res.size()) - 1; i >= r; --i) {
            int c = res[size_t(i)];
            if (!c) continue;
            res[size_t(i)] = 0;
            for (int j = 0; j < r; ++j)
                res[size_t(i - r + j)] =
                    int(((res[size_t(i - r + j)] - int64_t(c) * mod[size_t(j)]) % int64_t(p) + p) % p);
        }
        res.resize(size_t(r));
        return res;
    }

    static std::vector<int> x_power(uint64_t e, const std::vector<int>& mod, uint64_t p) {
        int r = int(mod.size());
        std::vector<int> result(size_t(r), 0);
        result[0] = 1;
        std::vector<int> base(size_t(r), 0);
        if (r > 1)
            base[1] = 1;
        else
            base[0] = 0;
        while (e) {
            if (e & 1) result = poly_mul_mod(result, base, mod, p);
            base = poly_mul_mod(base, base, mod, p);
            e >>= 1;
        }
        return result;
    }

    static bool is_irreducible(const std::vector<int>& mod, uint64_t p) {
        int r = int(mod.size());
        std::vector<int> x(size_t(r), 0);
        if (r > 1) x[1] = 1;
        uint64_t pr = 1;
        for (int i = 0; i < r; ++i) pr *= p;
        if (x_power(pr, mod, p) != x) return false;
        for (int d = 2; d <= r; ++d) {
            if (r % d) continue;
            // d prime divisor check is implied by testing all divisors
            bool prime = true;
            for (int t = 2; t * t <= d; ++t)
                if (d % t == 0) prime = false;
            if (!prime) continue;
            uint64_t pk = 1;
            for (int i = 0; i < r / d; ++i) pk *= p;
            if (x_power(pk, mod, p) == x) return false;
        }
        return true;
    }

    static std::vector<int> first_irreducible(uint64_t p, int r) {
        std::vector<int> coeffs(size_t(r), 0);
        for (;;) {
            if (is_irreducible(coeffs, p)) return coeffs;
            // increment the coefficient tuple lexicographically (c0 fastest
            // would be colex; spec wants smallest in lex coefficient order,
            // so treat (c0, c1, ...) as digits with c_{r-1} least significant)
            int i = r - 1;
            while (i >= 0) {
                coeffs[size_t(i)] += 1;
                if (coeffs[size_t(i)] < int(p)) break;
                coeffs[size_t(i)] = 0;
                --i;
            }
            if (i < 0) throw oracle_error("no irreducible polynomial found");
        }
    }

    void build_tables() {
        exp_.assign(q ? q : 1, 0);
        log_.assign(q ? q : 1, 0);
        // find a multiplicative generator by trial
        auto mul_raw = [&](uint64_t a, uint64_t b) {
            std::vector<int> va(size_t(r), 0), vb(size_t(r), 0);
            for (int i = 0; i < r; ++i) {
                va[size_t(i)] = int(a % p);
                a /= p;
                vb[size_t(i)] = int(b % p);
                b /= p;
            }
            auto vc = r == 1
                          ? std::vector<int>{int((int64_t(va[0]) * vb[0]) % int64_t(p))}
                          : poly_mul_mod(va, vb, modulus, p);
            uint64_t out = 0, m = 1;
            for (int i = 0; i < r; ++i) {
                out += uint64_t(vc[size_t(i)]) * m;
                m *= p;
            }
            return out;
        };
        for (uint64_t g = 2; g < q; ++g) {
            uint64_t x = 1;
            bool ok = true;
            std::vector<uint64_t> seen;
            seen.reserve(q);
            for (uint64_t i = 0; i + 1 < q; ++i) {
                exp_[i] = x;
                if (x == 1 && i > 0) {
                    ok = false;
                    break;
                }
                x = mul_raw(x, g);
            }
            if (ok && x == 1) {
                for (uint64_t i = 0; i + 1 < q; ++i) log_[exp_[i]] = i;
                if (q <= 2500) {
                    add_table_.assign(q * q, 0);
                    for (uint64_t a = 0; a < q; ++a)
                        for (uint64_t b = 0; b < q; ++b) {
                            uint64_t out = 0, m = 1;
                            uint64_t aa = a, bb = b;
                            for (int i = 0; i < r; ++i) {
                                out += ((aa % p) + (bb % p)) % p * m;
                                aa /= p;
                                bb /= p;
                                m *= p;
                            }
                            add_table_[a * q + b] = uint16_t(out);
                        }
                }
                return;
            }
        }
        if (q == 2) {  // F_2: the loop above never runs (g starts at 2)
            exp_ = {1};
            log_ = {0, 0};
            add_table_ = {0, 1, 1, 0};
            return;
        }
        throw oracle_error("no multiplicative generator found");
    }
};

inline ExtensionField build_field(uint64_t p, int r) { return ExtensionField::build(p, r); }

// Number of projective points of f = 0 over the field, enumerated by
// representatives with first nonzero coordinate 1.
inline Int count_points(const QPoly& f, const ExtensionField& F) {
    int maxe = 0;
    for (auto& [e, c] : f.terms)
        for (int i = 0; i < 4; ++i) maxe = std::max(maxe, int(e[i]));
    uint64_t q = F.q;
    // per-value power tables
    std::vector<std::vector<uint64_t>> ptab(q, std::vector<uint64_t>(size_t(maxe) + 1, 1));
    for (uint64_t v = 0; v < q; ++v)
        for (int e = 1; e <= maxe; ++e) ptab[v][size_t(e)] = F.mul(ptab[v][size_t(e - 1)], v);
    struct Term {
        uint64_t c;
        int e0, e1, e2, e3;
    };
    std::vector<Term> terms;
    for (auto& [e, c] : f.terms) {
        Int num = rat_num(c);
        uint64_t cc = F.embed(num);
        if (cc) terms.push_back({cc, e[0], e[1], e[2], e[3]});
    }
    Int total = 0;
    for (int chart = 0; chart < 4; ++chart) {
        // coordinates before `chart` are 0, coordinate `chart` is 1
        std::vector<Term> live;
        for (auto& t : terms) {
            int es[4] = {t.e0, t.e1, t.e2, t.e3};
            bool zero = false;
            for (int i = 0; i < chart; ++i)
                if (es[i] > 0) zero = true;
            if (!zero) live.push_back(t);
        }
        int nfree = 3 - chart;
        std::vector<uint64_t> vals(4, 0);
        vals[size_t(chart)] = 1;
        long long count = 0;
        // up to three nested loops over the free coordinates
        auto eval = [&]() {
            uint64_t s = 0;
            for (auto& t : live) {
                int es[4] = {t.e0, t.e1, t.e2, t.e3};
                uint64_t prod = t.c;
                for (int i = chart; i < 4; ++i)
                    if (es[i]) prod = F.mul(prod, ptab[vals[size_t(i)]][size_t(es[i])]);
                s = F.add(s, prod);
            }
            return s;
        };
        if (nfree == 0) {
            if (eval() == 0) ++count;
        } else if (nfree == 1) {
            for (uint64_t a = 0; a < q; ++a) {
                vals[3] = a;
                if (eval() == 0) ++count;
            }
        } else if (nfree == 2) {
            for (uint64_t a = 0; a < q; ++a) {
                vals[2] = a;
                for (uint64_t b = 0; b < q; ++b) {
                    vals[3] = b;
                    if (eval() == 0) ++count;
                }
            }
        } else {
            for (uint64_t a = 0; a < q; ++a) {
                vals[1] = a;
                for (uint64_t b = 0; b < q; ++b) {
                    vals[2] = b;
                    for (uint64_t c2 = 0; c2 < q; ++c2) {
                        vals[3] = c2;
                        if (eval() == 0) ++count;
                    }
                }
            }
        }
        total += count;
    }
    return total;
}

// True iff t d/dt log Z(t) reproduces the provided counts.
inline bool zeta_series_check(const ZetaFunction& z, const std::vector<Int>& counts) {
    for (size_t r = 1; r <= counts.size(); ++r)
        if (predicted_count(z, int(r)) != counts[r - 1]) return false;
    return true;
}

}  // namespace adezeta
