#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

// Monomials in the four homogeneous coordinates w, x, y, z.
// The global order is graded reverse lexicographic with w > x > y > z;
// bases are enumerated in descending grevlex so matrices are reproducible.

namespace adezeta {

using Exp4 = std::array<uint16_t, 4>;

constexpr const char* kVarNames = "wxyz";

inline int degree(const Exp4& e) { return e[0] + e[1] + e[2] + e[3]; }

inline Exp4 exp_add(const Exp4& a, const Exp4& b) {
    return {uint16_t(a[0] + b[0]), uint16_t(a[1] + b[1]), uint16_t(a[2] + b[2]),
            uint16_t(a[3] + b[3])};
}

// a > b in grevlex: higher degree wins; on ties the rightmost nonzero
// entry of a-b is negative.
inline bool grevlex_greater(const Exp4& a, const Exp4& b) {
    int da = degree(a), db = degree(b);
    if (da != db) return da > db;
    for (int i = 3; i >= 0; --i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

struct GrevlexDesc {
    bool operator()(const Exp4& a, const Exp4& b) const { return grevlex_greater(a, b); }
};

// Graded lexicographic (w > x > y > z). Only used when scanning candidate
// quotient representatives; see pages.hpp.
inline bool gradedlex_greater(const Exp4& a, const Exp4& b) {
    int da = degree(a), db = degree(b);
    if (da != db) return da > db;
    for (int i = 0; i < 4; ++i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

// All degree-d monomials, descending grevlex. Size C(d+3,3).
inline std::vector<Exp4> monomial_basis(int d) {
    std::vector<Exp4> out;
    out.reserve(size_t(d + 3) * (d + 2) * (d + 1) / 6);
    for (int e0 = d; e0 >= 0; --e0)
        for (int e1 = d - e0; e1 >= 0; --e1)
            for (int e2 = d - e0 - e1; e2 >= 0; --e2)
                out.push_back({uint16_t(e0), uint16_t(e1), uint16_t(e2),
                               uint16_t(d - e0 - e1 - e2)});
    std::sort(out.begin(), out.end(), GrevlexDesc{});
    return out;
}

inline std::string monomial_str(const Exp4& e) {
    std::string s;
    for (int i = 0; i < 4; ++i) {
        if (!e[i]) continue;
        s += kVarNames[i];
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
    return s.empty() ? "1" : s;
}

}  // namespace adezeta
