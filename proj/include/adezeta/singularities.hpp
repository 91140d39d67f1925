#pragma once

#include <string>
#include <vector>

#include "polynomial.hpp"

// ADE singularity records and the normal-form annihilator tables. Types are
// declared input; the transfer solve verifies them by operator count.

namespace adezeta {

struct singularity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AdeType {
    char family = 'A';  // 'A' | 'D' | 'E'
    int index = 1;      // Milnor number

    static AdeType parse(const std::string& s) {
        if (s.size() < 2 || (s[0] != 'A' && s[0] != 'D' && s[0] != 'E'))
            throw singularity_error("bad ADE type '" + s + "'");
        AdeType t;
        t.family = s[0];
        t.index = std::stoi(s.substr(1));
        if (t.family == 'A' && t.index < 1)
            throw singularity_error("A_n needs n >= 1");
        if (t.family == 'D' && t.index < 4)
            throw singularity_error("D_n needs n >= 4");
        if (t.family == 'E' && (t.index < 6 || t.index > 8))
            throw singularity_error("E_n needs n in {6,7,8}");
        return t;
    }
    std::string str() const { return family + std::to_string(index); }
    int milnor() const { return index; }
};

struct SingularityRecord {
    std::array<Int, 4> point{};  // primitive integer projective coordinates
    AdeType type;
    int chart = -1;  // -1: pick automatically

    static std::array<Int, 4> normalize_point(std::array<Rational, 4> pt) {
        Int l = 1;
        for (auto& c : pt) l = boost::multiprecision::lcm(l, rat_den(c));
        std::array<Int, 4> out;
        Int g = 0;
        for (int i = 0; i < 4; ++i) {
            out[i] = rat_num(pt[i]) * (l / rat_den(pt[i]));
            g = boost::multiprecision::gcd(g, out[i]);
        }
        if (g > 1)
            for (auto& x : out) x /= g;
        int first = 0;
        while (first < 4 && out[first] == 0) ++first;
        if (first == 4) throw singularity_error("zero projective point");
        if (out[first] < 0)
            for (auto& x : out) x = -x;
        return out;
    }

    // Largest absolute coordinate, restricted to p-units when p is given.
    int pick_chart(const Int& p = 0) const {
        if (chart >= 0) return chart;
        int best = -1;
        for (int i = 0; i < 4; ++i) {
            if (point[i] == 0) continue;
            if (p != 0 && point[i] % p == 0) continue;
            if (best < 0 || abs(point[i]) > abs(point[best])) best = i;
        }
        if (best < 0) throw singularity_error("no usable chart coordinate");
        return best;
    }
};

inline bool is_singular_point(const QPoly& f, const std::array<Int, 4>& pt) {
    QOps q;
    auto eval = [&](const QPoly& g) {
        Rational s = 0;
        for (auto& [e, c] : g.terms) {
            Rational t = c;
            for (int i = 0; i < 4; ++i)
                for (int k = 0; k < e[i]; ++k) t *= Rational(pt[i]);
            s += t;
        }
        return s;
    };
    if (eval(f) != 0) return false;
    for (int v = 0; v < 4; ++v)
        if (eval(poly_partial(q, f, v)) != 0) return false;
    return true;
}

// One normal-form operator: sum of (multi-index over (u,v,t), coefficient).
struct NormalFormOperator {
    std::vector<std::pair<std::array<int, 3>, Rational>> terms;
    int order = 0;
};

// Theorem-style operator ladders in local coordinates (u,v,t), one per
// Milnor-number unit, evaluation first. The D_n ladder carries the top
// operator d_t^{n-2} - ((n-1)!/2) d_v^2 and the E_7 ladder ends with
// d_t^4 - 4 d_v^2 d_t: both follow from the Leibniz annihilation conditions
// on the standard equations (u^2+tv^2+t^{n-1} and u^2+v^3+vt^3) and are
// exercised by the tests.
inline std::vector<NormalFormOperator> normal_form_operators(const AdeType& t) {
    auto mk = [](std::vector<std::pair<std::array<int, 3>, Rational>> terms) {
        NormalFormOperator op;
        op.terms = std::move(terms);
        for (auto& [a, c] : op.terms)
            op.order = std::max(op.order, a[0] + a[1] + a[2]);
        return op;
    };
    std::vector<NormalFormOperator> ops;
    ops.push_back(mk({{{0, 0, 0}, 1}}));  // evaluation
    if (t.family == 'A') {
        for (int k = 1; k <= t.index - 1; ++k) ops.push_back(mk({{{0, 0, k}, 1}}));
    } else if (t.family == 'D') {
        int n = t.index;
        ops.push_back(mk({{{0, 1, 0}, 1}}));
        for (int k = 1; k <= n - 3; ++k) ops.push_back(mk({{{0, 0, k}, 1}}));
        Rational c = 1;
        for (int i = 2; i <= n - 1; ++i) c *= i;
        c /= 2;
        ops.push_back(mk({{{0, 0, n - 2}, 1}, {{0, 2, 0}, -c}}));
    } else if (t.index == 6) {
        ops.push_back(mk({{{0, 1, 0}, 1}}));
        ops.push_back(mk({{{0, 0, 1}, 1}}));
        ops.push_back(mk({{{0, 1, 1}, 1}}));
        ops.push_back(mk({{{0, 0, 2}, 1}}));
        ops.push_back(mk({{{0, 1, 2}, 1}}));
    } else if (t.index == 7) {
        ops.push_back(mk({{{0, 1, 0}, 1}}));
        ops.push_back(mk({{{0, 0, 1}, 1}}));
        ops.push_back(mk({{{0, 1, 1}, 1}}));
        ops.push_back(mk({{{0, 0, 2}, 1}}));
        ops.push_back(mk({{{0, 0, 3}, 1}, {{0, 2, 0}, -1}}));
        ops.push_back(mk({{{0, 0, 4}, 1}, {{0, 2, 1}, -4}}));
    } else {
        ops.push_back(mk({{{0, 1, 0}, 1}}));
        ops.push_back(mk({{{0, 0, 1}, 1}}));
        ops.push_back(mk({{{0, 1, 1}, 1}}));
        ops.push_back(mk({{{0, 0, 2}, 1}}));
        ops.push_back(mk({{{0, 1, 2}, 1}}));
        ops.push_back(mk({{{0, 0, 3}, 1}}));
        ops.push_back(mk({{{0, 1, 3}, 1}}));
    }
    return ops;
}

inline int operator_order_cap(const AdeType& t) {
    int cap = 0;
    for (auto& op : normal_form_operators(t)) cap = std::max(cap, op.order);
    return cap;
}

// The standard local equation of the type in variables (u,v,t).
inline QPoly normal_form_equation(const AdeType& t) {
    // variables mapped as u->w, v->x, t->y
    auto mono = [](int a, int b, int c) {
        Exp4 e{uint16_t(a), uint16_t(b), uint16_t(c), 0};
        return e;
    };
    QPoly g;
    if (t.family == 'A') {
        g.terms.emplace(mono(2, 0, 0), 1);
        g.terms.emplace(mono(0, 2, 0), 1);
        g.terms.emplace(mono(0, 0, t.index + 1), 1);
    } else if (t.family == 'D') {
        g.terms.emplace(mono(2, 0, 0), 1);
        g.terms.emplace(mono(0, 2, 1), 1);
        g.terms.emplace(mono(0, 0, t.index - 1), 1);
    } else if (t.index == 6) {
        g.terms.emplace(mono(2, 0, 0), 1);
        g.terms.emplace(mono(0, 3, 0), 1);
        g.terms.emplace(mono(0, 0, 4), 1);
    } else if (t.index == 7) {
        g.terms.emplace(mono(2, 0, 0), 1);
        g.terms.emplace(mono(0, 3, 0), 1);
        g.terms.emplace(mono(0, 1, 3), 1);
    } else {
        g.terms.emplace(mono(2, 0, 0), 1);
        g.terms.emplace(mono(0, 3, 0), 1);
        g.terms.emplace(mono(0, 0, 5), 1);
    }
    return g;
}

}  // namespace adezeta
