#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "rational.hpp"

// Arithmetic in Z/p^N with per-value precision floors. A TrackedResidue is
// an integer mod p^{n_work} together with the number of low p-adic digits
// known to be correct; +,* propagate the minimum floor, division by p^v
// requires valuation >= v and lowers the floor by v.
//
// Moduli up to 2^126 are supported: products use a single 128-bit reduction
// when the modulus fits 64 bits and Barrett reduction above that.

namespace adezeta {

using limb = unsigned __int128;

inline std::string limb_str(limb v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s += char('0' + int(v % 10));
        v /= 10;
    }
    return std::string(s.rbegin(), s.rend());
}

inline Int limb_to_int(limb v) {
    Int hi = Int(uint64_t(v >> 64));
    return (hi << 64) + Int(uint64_t(v));
}

struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// 128x128 -> 256 via 64-bit limbs
struct U256 {
    limb hi, lo;
};

inline U256 mul_wide(limb a, limb b) {
    uint64_t a0 = uint64_t(a), a1 = uint64_t(a >> 64);
    uint64_t b0 = uint64_t(b), b1 = uint64_t(b >> 64);
    limb p00 = limb(a0) * b0;
    limb p01 = limb(a0) * b1;
    limb p10 = limb(a1) * b0;
    limb p11 = limb(a1) * b1;
    limb mid = p01 + p10;
    limb carry_mid = (mid < p01) ? (limb(1) << 64) : 0;
    limb lo = p00 + (mid << 64);
    limb carry_lo = (lo < p00) ? 1 : 0;
    limb hi = p11 + (mid >> 64) + carry_mid + carry_lo;
    return {hi, lo};
}

inline U256 shift_right(const U256& x, unsigned s) {
    // 0 < s < 128
    return {x.hi >> s, (x.lo >> s) | (x.hi << (128 - s))};
}

}  // namespace detail

struct ResidueRing {
    uint64_t p = 0;
    int n_work = 0;
    limb modulus = 0;  // p^n_work
    bool small = true;  // modulus fits 64 bits
    int k_bits = 0;     // bit length of modulus
    limb barrett_mu = 0;  // floor(2^{2k}/modulus), k = k_bits

    ResidueRing() = default;
    ResidueRing(uint64_t p_, int n_work_) : p(p_), n_work(n_work_) {
        Int m = int_pow(Int(p), unsigned(n_work));
        if (m >= (Int(1) << 126))
            throw std::overflow_error("residue modulus exceeds 126 bits");
        modulus = to_limb(m);
        small = (m < (Int(1) << 63));
        k_bits = 0;
        Int t = m;
        while (t > 0) {
            t >>= 1;
            ++k_bits;
        }
        barrett_mu = to_limb((Int(1) << (2 * k_bits)) / m);
    }

    static limb to_limb(const Int& v) {
        Int lo = v & ((Int(1) << 64) - 1);
        Int hi = v >> 64;
        return (limb(uint64_t(hi)) << 64) | limb(uint64_t(lo));
    }

    limb reduce(const Int& v) const {
        Int m = limb_to_int(modulus);
        Int r = v % m;
        if (r < 0) r += m;
        return to_limb(r);
    }
    limb reduce_rational(const Rational& q) const {
        Int den = rat_den(q);
        if (den % Int(p) == 0) throw precision_error("p in denominator");
        return mul(reduce(rat_num(q)), inv(reduce(den)));
    }

    limb add(limb a, limb b) const {
        limb s = a + b;
        if (s >= modulus || s < a) s -= modulus;
        return s;
    }
    limb sub(limb a, limb b) const { return b ? add(a, modulus - b) : a; }
    limb neg(limb a) const { return a ? modulus - a : 0; }

    limb mul(limb a, limb b) const {
        if (small) return uint64_t(a) * limb(uint64_t(b)) % modulus;
        // Barrett: x = a b < m^2 < 2^{2k}; q = floor(x / 2^{k-1});
        // estimate floor(x/m) as hi_{k+1}(q * mu); r = x - est*m, r < 3m.
        detail::U256 x = detail::mul_wide(a, b);
        limb q1 = detail::shift_right(x, unsigned(k_bits - 1)).lo;
        detail::U256 q2 = detail::mul_wide(q1, barrett_mu);
        limb est = detail::shift_right(q2, unsigned(k_bits + 1)).lo;
        limb r = x.lo - est * modulus;  // mod 2^128 is fine
        while (r >= modulus) r -= modulus;
        return r;
    }

    limb pow(limb a, uint64_t e) const {
        limb r = 1 % modulus;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    int valuation(limb a) const {
        if (a == 0) return n_work;
        int v = 0;
        while (a % p == 0) {
            a /= p;
            ++v;
        }
        return v;
    }
    bool is_unit(limb a) const { return a % p != 0; }

    limb inv(limb a) const {
        if (!is_unit(a)) throw precision_error("inverting a non-unit residue");
        // extended Euclid over the big integers (setup-frequency only)
        Int m = limb_to_int(modulus);
        Int t = 0, newt = 1, r = m, newr = limb_to_int(a);
        while (newr != 0) {
            Int q = r / newr;
            Int tmp = t - q * newt;
            t = newt;
            newt = tmp;
            tmp = r - q * newr;
            r = newr;
            newr = tmp;
        }
        if (t < 0) t += m;
        return to_limb(t);
    }

    limb ppow(int k) const {
        limb r = 1;
        for (int i = 0; i < k; ++i) r *= p;
        return r;
    }
};

struct TrackedResidue {
    limb v = 0;
    int floor = 0;  // digits of guaranteed accuracy, <= n_work

    TrackedResidue() = default;
    TrackedResidue(limb v_, int floor_) : v(v_), floor(floor_) {}
};

inline TrackedResidue tr_make(const ResidueRing& R, const Int& value) {
    return {R.reduce(value), R.n_work};
}
inline TrackedResidue tr_add(const ResidueRing& R, const TrackedResidue& a,
                             const TrackedResidue& b) {
    return {R.add(a.v, b.v), std::min(a.floor, b.floor)};
}
inline TrackedResidue tr_sub(const ResidueRing& R, const TrackedResidue& a,
                             const TrackedResidue& b) {
    return {R.sub(a.v, b.v), std::min(a.floor, b.floor)};
}
inline TrackedResidue tr_mul(const ResidueRing& R, const TrackedResidue& a,
                             const TrackedResidue& b) {
    return {R.mul(a.v, b.v), std::min(a.floor, b.floor)};
}
inline TrackedResidue tr_neg(const ResidueRing& R, const TrackedResidue& a) {
    return {R.neg(a.v), a.floor};
}

// Divide by an arbitrary nonzero integer d = p^v * u: requires the residue to
// be divisible by p^v; costs v digits of floor.
inline TrackedResidue tr_div_int(const ResidueRing& R, const TrackedResidue& a, Int d) {
    if (d < 0) return tr_div_int(R, tr_neg(R, a), -d);
    int v = p_valuation(d, Int(R.p));
    limb pv = R.ppow(v);
    if (a.v % pv != 0)
        throw precision_error("inexact division by p^" + std::to_string(v));
    limb unit = R.reduce(d / int_pow(Int(R.p), unsigned(v)));
    return {R.mul(a.v / pv, R.inv(unit)), a.floor - v};
}

// Congruence at the jointly known precision.
inline bool tr_congruent(const ResidueRing& R, const TrackedResidue& a,
                         const TrackedResidue& b) {
    int fl = std::min(a.floor, b.floor);
    if (fl <= 0) return true;
    limb m = R.ppow(std::min(fl, R.n_work));
    return a.v % m == b.v % m;
}

}  // namespace adezeta
