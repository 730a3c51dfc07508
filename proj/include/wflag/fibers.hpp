#pragma once

#include "wflag/convolution.hpp"

namespace wflag {

// ---------------------------------------------------------------------------
// Fibers of Demazure maps p : X_B(s_bullet) -> X_B(s_star) and the
// decomposition-theorem multiplicities recovered from them.
//
// F_v is computed by the forward two-case recursion derived from the BN-pair
// relations: processing the word left to right, the last step attaches a
// P^1 of choices through x_v that splits into an A^0 in the cell of v and an
// A^1 in the cell of the longer of {v, vs}:
//
//   F_0(u) = [u = e];   F_j(u) = F_{j-1}(u) + q F_{j-1}(us)   if us > u,
//                       F_j(u) = q F_{j-1}(u) + F_{j-1}(us)   if us < u.
//
// The subword Euler count is kept as a fully independent oracle.
// ---------------------------------------------------------------------------

/// A word in the simple(-affine) reflections, repetitions allowed, together
/// with its Demazure fold s_star (the target of the convolution morphism).
struct DemazureMapSpec {
    RootDatumPtr datum;
    std::vector<int> word;
    WeylElement target;

    int r() const { return static_cast<int>(word.size()); }
};

inline DemazureMapSpec make_demazure_spec(const RootDatumPtr& d, const std::vector<int>& word) {
    WeylElement t = identity_element(d);
    for (int s : word) {
        d->validate_generator(s);
        if (!right_descent(t, s)) t = multiply(t, simple_reflection(d, s));
    }
    return {d, word, t};
}

using FiberTable = std::unordered_map<WeylElement, PolyZ, WeylElementHash>;

/// Full table v -> F_{p;v}; entries exist exactly for v <= s_star.
inline FiberTable fiber_table(const DemazureMapSpec& spec) {
    FiberTable f;
    f.emplace(identity_element(spec.datum), PolyZ::one());
    for (int letter : spec.word) {
        const WeylElement s = simple_reflection(spec.datum, letter);
        FiberTable next;
        auto value = [&f](const WeylElement& u) {
            auto it = f.find(u);
            return it == f.end() ? PolyZ::zero() : it->second;
        };
        std::vector<WeylElement> support;
        for (const auto& [u, p] : f) {
            support.push_back(u);
            support.push_back(multiply(u, s));
        }
        for (const WeylElement& u : support) {
            if (next.count(u)) continue;
            const WeylElement us = multiply(u, s);
            PolyZ val = right_descent(u, letter)
                            ? value(u).shifted(1) + value(us)
                            : value(u) + value(us).shifted(1);
            if (!val.is_zero()) next.emplace(u, std::move(val));
        }
        f = std::move(next);
    }
    return f;
}

inline PolyZ fiber_poincare(const DemazureMapSpec& spec, const WeylElement& v) {
    if (v.datum.get() != spec.datum.get())
        throw std::invalid_argument("fiber_poincare: element from a different root datum");
    const FiberTable f = fiber_table(spec);
    auto it = f.find(v);
    return it == f.end() ? PolyZ::zero() : it->second;
}

using EulerTable = std::unordered_map<WeylElement, Int, WeylElementHash>;

namespace detail {
inline void euler_dfs(const DemazureMapSpec& spec, std::size_t pos, const WeylElement& prod,
                      EulerTable& out) {
    if (pos == spec.word.size()) {
        ++out[prod];
        return;
    }
    euler_dfs(spec, pos + 1, prod, out);  // t_i = 1
    euler_dfs(spec, pos + 1, multiply(prod, simple_reflection(spec.datum, spec.word[pos])), out);
}
}  // namespace detail

/// Counts of all 2^r substitution tuples (t_1,...,t_r), t_i = s_i or 1,
/// grouped by the product.  Independent of the fiber recursion.
inline EulerTable fiber_euler_table(const DemazureMapSpec& spec) {
    if (spec.r() > 20) throw CapError("fiber_euler: word longer than the 2^r cap");
    EulerTable out;
    detail::euler_dfs(spec, 0, identity_element(spec.datum), out);
    return out;
}

inline Int fiber_euler_bruteforce(const DemazureMapSpec& spec, const WeylElement& v) {
    const EulerTable t = fiber_euler_table(spec);
    auto it = t.find(v);
    return it == t.end() ? 0 : it->second;
}

/// Cell polynomial of the fiber of the composite X_B(s_bullet) -> G/P over
/// the coset point x_{wP}: sum over w' in W_P of
/// q^{l(w_min w') - l(w_min)} F(w_min w').
inline PolyZ fiber_poincare_parahoric(const DemazureMapSpec& spec, const ParabolicSubset& P,
                                      const WeylElement& w) {
    const WeylElement w_min = min_coset_rep_right(w, P);
    const int base = length(w_min);
    const FiberTable f = fiber_table(spec);
    PolyZ out;
    for (const WeylElement& wp : parabolic_subgroup(spec.datum, P)) {
        const WeylElement x = multiply(w_min, wp);
        auto it = f.find(x);
        if (it == f.end()) continue;
        out += it->second.shifted(length(x) - base);
    }
    return out;
}

struct DecompositionChecks {
    bool reconstruction = false;
    bool nonnegativity = false;
    bool duality = false;
    bool lefschetz = false;
    bool global_sum = false;

    bool all() const {
        return reconstruction && nonnegativity && duality && lefschetz && global_sum;
    }
};

/// Per-map record of the fiber polynomials F_v, the multiplicities M_v
/// obtained by the triangular solve of F = P.M, the supports, and the
/// decomposition-theorem constraint checks.  Rows are sorted by (length,
/// reduced word) for deterministic output.
struct DecompositionReport {
    DemazureMapSpec spec;
    struct Row {
        WeylElement v;
        PolyZ F;
        PolyZ M;
    };
    std::vector<Row> rows;
    std::vector<WeylElement> supports;
    DecompositionChecks checks;
};

/// Solve the unitriangular system F_v = sum_{v <= x <= s_star} P(v,x) M_x
/// for M, then evaluate the five constraint checks; failures are reported in
/// the checks record, never repaired.
inline DecompositionReport multiplicities(const DemazureMapSpec& spec, KLContext& ctx) {
    if (spec.datum.get() != ctx.datum().get())
        throw std::invalid_argument("multiplicities: context bound to a different root datum");
    const int r = spec.r();
    std::vector<WeylElement> interval = elements_below(spec.target, ctx.cap());
    const FiberTable f = fiber_table(spec);

    std::vector<WeylElement> desc = interval;
    std::sort(desc.begin(), desc.end(),
              [](const WeylElement& a, const WeylElement& b) { return length(a) > length(b); });
    FiberTable m;
    for (const WeylElement& x : desc) {
        PolyZ acc = f.count(x) ? f.at(x) : PolyZ::zero();
        for (const WeylElement& z : desc) {
            if (length(z) <= length(x) || !ctx.leq(x, z)) continue;
            acc -= ctx.kl(x, z) * m.at(z);
        }
        m.emplace(x, acc);
    }

    DecompositionReport rep;
    rep.spec = spec;
    for (const WeylElement& v : interval) {
        const PolyZ fv = f.count(v) ? f.at(v) : PolyZ::zero();
        rep.rows.push_back({v, fv, m.at(v)});
    }

    DecompositionChecks& c = rep.checks;
    c.reconstruction = true;
    c.nonnegativity = true;
    c.duality = true;
    c.lefschetz = true;
    for (const auto& row : rep.rows) {
        PolyZ recon;
        for (const auto& other : rep.rows) {
            if (!ctx.leq(row.v, other.v)) continue;
            recon += ctx.kl(row.v, other.v) * other.M;
        }
        if (recon != row.F) c.reconstruction = false;
        if (!row.M.nonneg_coeffs()) c.nonnegativity = false;
        const int d = r - length(row.v);  // m_{2j} = m_{2(r - l(v)) - 2j}
        if (!row.M.palindromic(d)) c.duality = false;
        for (int j = 1; 2 * j <= d; ++j)
            if (row.M.coeff(j) < row.M.coeff(j - 1)) c.lefschetz = false;
    }
    PolyZ total;
    for (const auto& row : rep.rows) total += row.F.shifted(length(row.v));
    c.global_sum = (total == PolyZ::one_plus_q_pow(r));

    for (const auto& row : rep.rows)
        if (!row.M.is_zero()) rep.supports.push_back(row.v);
    return rep;
}

/// {v : M_v != 0}; always contains s_star.
inline std::vector<WeylElement> supports(const DemazureMapSpec& spec, KLContext& ctx) {
    return multiplicities(spec, ctx).supports;
}

}  // namespace wflag
