#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace wflag {

using Int = long long;
using IntVec = std::vector<Int>;
using Rat = boost::rational<Int>;
using RatVec = std::vector<Rat>;

/// Sign of an exact rational (boost keeps the denominator positive).  Mixed
/// rational/integer comparisons are avoided throughout; this is the one
/// place sign decisions are made.
inline int rat_sign(const Rat& r) {
    return (r.numerator() > 0) - (r.numerator() < 0);
}

/// Thrown when a computation would exceed a configured resource cap
/// (interval length caps, brute-force enumeration caps).
struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::size_t hash_ints(const IntVec& v) {
    std::size_t h = 1469598103934665603ULL;
    for (Int x : v) h = hash_combine(h, std::hash<Int>{}(x));
    return h;
}

struct IntVecHash {
    std::size_t operator()(const IntVec& v) const { return hash_ints(v); }
};

/// Square integer matrix, row major.  Used for Weyl group actions on the
/// root and coroot lattices; everything stays exact.
struct IntMat {
    int n = 0;
    IntVec a;

    IntMat() = default;
    explicit IntMat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0) {}

    static IntMat identity(int dim) {
        IntMat m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
        return m;
    }

    Int& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    Int at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    IntMat operator*(const IntMat& o) const {
        IntMat r(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const Int aik = at(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < n; ++j) r.at(i, j) += aik * o.at(k, j);
            }
        return r;
    }

    IntVec apply(const IntVec& v) const {
        IntVec r(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r[i] += at(i, j) * v[j];
        return r;
    }

    RatVec apply(const RatVec& v) const {
        RatVec r(static_cast<std::size_t>(n), Rat(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r[i] += Rat(at(i, j)) * v[j];
        return r;
    }

    bool operator==(const IntMat& o) const { return n == o.n && a == o.a; }
    bool operator!=(const IntMat& o) const { return !(*this == o); }
};

inline IntVec zero_vec(int n) { return IntVec(static_cast<std::size_t>(n), 0); }

inline bool is_zero(const IntVec& v) {
    for (Int x : v)
        if (x != 0) return false;
    return true;
}

inline IntVec add(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline IntVec negate(const IntVec& a) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

}  // namespace wflag
