#pragma once

#include <algorithm>
#include <string>

#include "wflag/common.hpp"

namespace wflag {

/// Integer polynomial in one variable q, dense coefficient vector indexed by
/// degree.  Invariant: no trailing zero coefficient; the zero polynomial is
/// the empty vector and its degree() is the sentinel -1.
struct PolyZ {
    IntVec c;

    PolyZ() = default;
    explicit PolyZ(IntVec coeffs) : c(std::move(coeffs)) { trim(); }

    static PolyZ zero() { return PolyZ{}; }
    static PolyZ one() { return constant(1); }
    static PolyZ constant(Int k) {
        PolyZ p;
        if (k != 0) p.c = {k};
        return p;
    }
    static PolyZ q() { return monomial(1); }
    static PolyZ monomial(int deg, Int coeff = 1) {
        PolyZ p;
        if (coeff != 0) {
            p.c.assign(static_cast<std::size_t>(deg) + 1, 0);
            p.c.back() = coeff;
        }
        return p;
    }
    /// (1+q)^n
    static PolyZ one_plus_q_pow(int n) {
        PolyZ r = one();
        PolyZ b{{1, 1}};
        for (int i = 0; i < n; ++i) r = r * b;
        return r;
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    Int coeff(int d) const {
        if (d < 0 || d >= static_cast<int>(c.size())) return 0;
        return c[static_cast<std::size_t>(d)];
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    PolyZ operator+(const PolyZ& o) const {
        PolyZ r;
        r.c.resize(std::max(c.size(), o.c.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
        r.trim();
        return r;
    }
    PolyZ operator-(const PolyZ& o) const {
        PolyZ r;
        r.c.resize(std::max(c.size(), o.c.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] -= o.c[i];
        r.trim();
        return r;
    }
    PolyZ operator*(const PolyZ& o) const {
        if (is_zero() || o.is_zero()) return zero();
        PolyZ r;
        r.c.assign(c.size() + o.c.size() - 1, 0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        }
        r.trim();
        return r;
    }
    PolyZ& operator+=(const PolyZ& o) { return *this = *this + o; }
    PolyZ& operator-=(const PolyZ& o) { return *this = *this - o; }

    /// Multiply by q^k.
    PolyZ shifted(int k) const {
        if (is_zero()) return zero();
        PolyZ r;
        r.c.assign(c.size() + static_cast<std::size_t>(k), 0);
        std::copy(c.begin(), c.end(), r.c.begin() + k);
        return r;
    }

    Int operator()(Int x) const {
        Int v = 0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    }

    bool operator==(const PolyZ& o) const { return c == o.c; }
    bool operator!=(const PolyZ& o) const { return !(*this == o); }

    bool nonneg_coeffs() const {
        for (Int x : c)
            if (x < 0) return false;
        return true;
    }

    /// Palindromic with respect to degree d: coeff(j) == coeff(d-j) for all j.
    bool palindromic(int d) const {
        if (is_zero()) return true;
        if (degree() > d) return false;
        for (int j = 0; 2 * j <= d; ++j)
            if (coeff(j) != coeff(d - j)) return false;
        return true;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            Int v = c[i];
            if (!s.empty()) {
                s += (v > 0) ? "+" : "-";
                if (v < 0) v = -v;
            } else if (v < 0) {
                s += "-";
                v = -v;
            }
            if (i == 0) {
                s += std::to_string(v);
            } else {
                if (v != 1) s += std::to_string(v) + "*";
                s += (i == 1) ? "q" : "q^" + std::to_string(i);
            }
        }
        return s;
    }
};

}  // namespace wflag
