#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "monomial.hpp"
#include "rational.hpp"
#include "residue.hpp"

// Sparse multivariate polynomials in w,x,y,z over a pluggable coefficient
// ring. Terms are kept in descending grevlex, zero coefficients are never
// stored, so begin() is the leading term.

namespace adezeta {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coefficient operations for the two rings used throughout: exact rationals
// and tracked residues mod p^N. F_p is the residue ring with n_work = 1.
struct QOps {
    using C = Rational;
    Rational add(const Rational& a, const Rational& b) const { return a + b; }
    Rational sub(const Rational& a, const Rational& b) const { return a - b; }
    Rational mul(const Rational& a, const Rational& b) const { return a * b; }
    Rational neg(const Rational& a) const { return -a; }
    Rational from_int(long v) const { return Rational(v); }
    bool is_zero(const Rational& a) const { return a == 0; }
};

struct ROps {
    ResidueRing R;
    using C = TrackedResidue;
    TrackedResidue add(const TrackedResidue& a, const TrackedResidue& b) const {
        return tr_add(R, a, b);
    }
    TrackedResidue sub(const TrackedResidue& a, const TrackedResidue& b) const {
        return tr_sub(R, a, b);
    }
    TrackedResidue mul(const TrackedResidue& a, const TrackedResidue& b) const {
        return tr_mul(R, a, b);
    }
    TrackedResidue neg(const TrackedResidue& a) const { return tr_neg(R, a); }
    TrackedResidue from_int(long v) const { return tr_make(R, Int(v)); }
    bool is_zero(const TrackedResidue& a) const { return a.v == 0; }
};

template <class C>
struct SparsePoly {
    std::map<Exp4, C, GrevlexDesc> terms;

    bool is_zero() const { return terms.empty(); }
    size_t size() const { return terms.size(); }

    // Degree of a homogeneous polynomial; nullopt for 0, throws otherwise.
    std::optional<int> homogeneous_degree() const {
        if (terms.empty()) return std::nullopt;
        int d = degree(terms.begin()->first);
        for (auto& [e, c] : terms)
            if (degree(e) != d) throw parse_error("polynomial is not homogeneous");
        return d;
    }
};

using QPoly = SparsePoly<Rational>;
using RPoly = SparsePoly<TrackedResidue>;

template <class Ops>
void poly_add_term(const Ops& ops, SparsePoly<typename Ops::C>& p, const Exp4& e,
                   const typename Ops::C& c) {
    if (ops.is_zero(c)) return;
    auto it = p.terms.find(e);
    if (it == p.terms.end()) {
        p.terms.emplace(e, c);
    } else {
        it->second = ops.add(it->second, c);
        if (ops.is_zero(it->second)) p.terms.erase(it);
    }
}

template <class Ops>
SparsePoly<typename Ops::C> poly_add(const Ops& ops, const SparsePoly<typename Ops::C>& a,
                                     const SparsePoly<typename Ops::C>& b) {
    SparsePoly<typename Ops::C> r = a;
    for (auto& [e, c] : b.terms) poly_add_term(ops, r, e, c);
    return r;
}

template <class Ops>
void poly_axpy(const Ops& ops, SparsePoly<typename Ops::C>& acc,
               const typename Ops::C& scale, const SparsePoly<typename Ops::C>& b) {
    for (auto& [e, c] : b.terms) poly_add_term(ops, acc, e, ops.mul(scale, c));
}

template <class Ops>
SparsePoly<typename Ops::C> poly_sub(const Ops& ops, const SparsePoly<typename Ops::C>& a,
                                     const SparsePoly<typename Ops::C>& b) {
    SparsePoly<typename Ops::C> r = a;
    for (auto& [e, c] : b.terms) poly_add_term(ops, r, e, ops.neg(c));
    return r;
}

template <class Ops>
SparsePoly<typename Ops::C> poly_mul(const Ops& ops, const SparsePoly<typename Ops::C>& a,
                                     const SparsePoly<typename Ops::C>& b) {
    SparsePoly<typename Ops::C> r;
    for (auto& [ea, ca] : a.terms)
        for (auto& [eb, cb] : b.terms)
            poly_add_term(ops, r, exp_add(ea, eb), ops.mul(ca, cb));
    return r;
}

template <class Ops>
SparsePoly<typename Ops::C> poly_scale(const Ops& ops, const SparsePoly<typename Ops::C>& a,
                                       const typename Ops::C& s) {
    SparsePoly<typename Ops::C> r;
    for (auto& [e, c] : a.terms) poly_add_term(ops, r, e, ops.mul(c, s));
    return r;
}

template <class Ops>
SparsePoly<typename Ops::C> poly_partial(const Ops& ops, const SparsePoly<typename Ops::C>& a,
                                         int var) {
    SparsePoly<typename Ops::C> r;
    for (auto& [e, c] : a.terms) {
        if (!e[var]) continue;
        Exp4 e2 = e;
        e2[var] -= 1;
        poly_add_term(ops, r, e2, ops.mul(c, ops.from_int(e[var])));
    }
    return r;
}

template <class Ops>
SparsePoly<typename Ops::C> poly_pow(const Ops& ops, const SparsePoly<typename Ops::C>& a,
                                     unsigned n) {
    SparsePoly<typename Ops::C> r;
    r.terms.emplace(Exp4{0, 0, 0, 0}, ops.from_int(1));
    for (unsigned i = 0; i < n; ++i) r = poly_mul(ops, r, a);
    return r;
}

// ---- parsing -------------------------------------------------------------

namespace detail {

struct Parser {
    const std::string& s;
    size_t i = 0;
    explicit Parser(const std::string& str) : s(str) {}

    void skip() {
        while (i < s.size() && isspace((unsigned char)s[i])) ++i;
    }
    bool peek(char c) {
        skip();
        return i < s.size() && s[i] == c;
    }
    bool eat(char c) {
        if (peek(c)) {
            ++i;
            return true;
        }
        return false;
    }

    QPoly parse_expr() {
        QPoly r = parse_term(eat('-') ? -1 : (eat('+'), 1));
        QOps q;
        for (;;) {
            if (eat('+'))
                r = poly_add(q, r, parse_term(1));
            else if (eat('-'))
                r = poly_add(q, r, parse_term(-1));
            else
                break;
        }
        return r;
    }

    QPoly parse_term(int sign) {
        QOps q;
        QPoly r = parse_factor();
        for (;;) {
            skip();
            if (eat('*')) {
                r = poly_mul(q, r, parse_factor());
            } else if (i < s.size() &&
                       (isalnum((unsigned char)s[i]) || s[i] == '(')) {
                r = poly_mul(q, r, parse_factor());  // juxtaposition
            } else {
                break;
            }
        }
        if (sign < 0) r = poly_scale(q, r, Rational(-1));
        return r;
    }

    QPoly parse_factor() {
        QOps q;
        QPoly base = parse_atom();
        skip();
        if (eat('^')) {
            skip();
            size_t j = i;
            while (j < s.size() && isdigit((unsigned char)s[j])) ++j;
            if (j == i) throw parse_error("expected exponent after '^'");
            unsigned e = std::stoul(s.substr(i, j - i));
            i = j;
            return poly_pow(q, base, e);
        }
        return base;
    }

    QPoly parse_atom() {
        skip();
        if (i >= s.size()) throw parse_error("unexpected end of input");
        QPoly r;
        if (eat('(')) {
            r = parse_expr();
            if (!eat(')')) throw parse_error("missing ')'");
            return r;
        }
        char c = s[i];
        if (isdigit((unsigned char)c)) {
            size_t j = i;
            while (j < s.size() && isdigit((unsigned char)s[j])) ++j;
            Int v(s.substr(i, j - i));
            i = j;
            if (v != 0) r.terms.emplace(Exp4{0, 0, 0, 0}, Rational(v));
            return r;
        }
        for (int v = 0; v < 4; ++v) {
            if (c == kVarNames[v]) {
                ++i;
                Exp4 e{0, 0, 0, 0};
                e[v] = 1;
                r.terms.emplace(e, Rational(1));
                return r;
            }
        }
        throw parse_error(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace detail

// Parse an integer-coefficient polynomial expression in w,x,y,z.
inline QPoly poly_parse(const std::string& text) {
    detail::Parser p(text);
    QPoly r = p.parse_expr();
    p.skip();
    if (p.i != text.size()) throw parse_error("trailing input");
    r.homogeneous_degree();  // throws on inhomogeneous input
    return r;
}

// Map rational coefficients into Z/p^N; p in a denominator signals a
// precision bug or a non-equisingular input.
inline RPoly poly_reduce_mod(const QPoly& a, const ResidueRing& R) {
    RPoly r;
    for (auto& [e, c] : a.terms) {
        TrackedResidue t{R.reduce_rational(c), R.n_work};
        if (t.v != 0) r.terms.emplace(e, t);
    }
    return r;
}

inline int poly_min_floor(const RPoly& a, int n_work) {
    int fl = n_work;
    for (auto& [e, c] : a.terms) fl = std::min(fl, c.floor);
    return fl;
}

template <class C>
std::string poly_str(const SparsePoly<C>& p, auto coeff_str) {
    if (p.terms.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [e, c] : p.terms) {
        if (!first) s += " + ";
        s += coeff_str(c) + "*" + monomial_str(e);
        first = false;
    }
    return s;
}

inline std::string qpoly_str(const QPoly& p) {
    return poly_str(p, [](const Rational& c) { return c.str(); });
}

}  // namespace adezeta
