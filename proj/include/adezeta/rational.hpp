#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace adezeta {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Int int_pow(Int base, unsigned e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

// p-adic valuation of a nonzero integer.
inline int p_valuation(Int v, const Int& p) {
    if (v == 0) return -1;
    int n = 0;
    while (v % p == 0) {
        v /= p;
        ++n;
    }
    return n;
}

}  // namespace adezeta
