#pragma once

#include "wflag/hecke.hpp"

namespace wflag {

// ---------------------------------------------------------------------------
// Double-coset level geometry for a parahoric P: orbit classes in
// W_P \ W / W_P, the geometric Demazure product, Q-type predicates and cell
// generating functions.
// ---------------------------------------------------------------------------

/// A double coset W_P w W_P, canonicalized through its minimal
/// representative; the maximal representative (the unique element with every
/// generator of P as a left and right descent) is cached at construction.
struct OrbitClass {
    ParabolicSubset parahoric;
    WeylElement min_rep;
    WeylElement max_rep;

    CosetTag tag() const { return {parahoric, parahoric, min_rep}; }

    bool operator==(const OrbitClass& o) const {
        return parahoric == o.parahoric && min_rep == o.min_rep;
    }
    bool operator!=(const OrbitClass& o) const { return !(*this == o); }
};

inline OrbitClass make_orbit_class(const ParabolicSubset& P, const WeylElement& w) {
    return {P, min_double_coset_rep(P, w, P), max_double_coset_rep(P, w, P)};
}

/// Geometric P-Demazure product: lift to maximal representatives, take the
/// 0-Hecke product, project back.  Associative with unit the class of e.
inline OrbitClass star(const ParabolicSubset& P, const OrbitClass& w1, const OrbitClass& w2) {
    if (!(w1.parahoric == P) || !(w2.parahoric == P))
        throw std::invalid_argument("star: orbit classes for a different parahoric");
    return make_orbit_class(P, demazure_product(w1.max_rep, w2.max_rep));
}

inline void require_nested(const ParabolicSubset& P, const ParabolicSubset& Q) {
    if (!P.subset_of(Q))
        throw std::invalid_argument("parahoric P is not contained in Q");
}

/// w is of Q-type iff it admits a lift in ^Q W ^P; for P contained in Q this
/// holds iff the maximal representative of W_P w W_P has every generator of
/// Q as a left descent.
inline bool is_Q_type(const ParabolicSubset& P, const ParabolicSubset& Q, const OrbitClass& w) {
    require_nested(P, Q);
    w.min_rep.datum->validate_parabolic(Q);
    for (int i : Q.indices)
        if (!left_descent(w.max_rep, i)) return false;
    return true;
}

/// Q-maximal: admits a lift in ^Q W ^Q, i.e. additionally every generator of
/// Q is a right descent of the maximal representative.
inline bool is_Q_maximal(const ParabolicSubset& P, const ParabolicSubset& Q, const OrbitClass& w) {
    if (!is_Q_type(P, Q, w)) return false;
    for (int i : Q.indices)
        if (!right_descent(w.max_rep, i)) return false;
    return true;
}

inline OrbitClass project_to(const ParabolicSubset& Q, const OrbitClass& w) {
    return make_orbit_class(Q, w.min_rep);
}

/// Property check for the projection identity: for Q-type inputs,
/// (w_1 *_P ... *_P w_r)'' = w_1'' *_Q ... *_Q w_r'' and the product is
/// again of Q-type (Q-maximal when all inputs are).
inline bool star_projection_identity(const ParabolicSubset& P, const ParabolicSubset& Q,
                                     const std::vector<OrbitClass>& ws) {
    if (ws.empty()) throw std::invalid_argument("star_projection_identity: empty input");
    for (const OrbitClass& w : ws)
        if (!is_Q_type(P, Q, w)) throw std::invalid_argument("inputs not Q-type");
    bool all_max = true;
    for (const OrbitClass& w : ws) all_max = all_max && is_Q_maximal(P, Q, w);

    OrbitClass lhs = ws.front();
    for (std::size_t i = 1; i < ws.size(); ++i) lhs = star(P, lhs, ws[i]);
    OrbitClass rhs = project_to(Q, ws.front());
    for (std::size_t i = 1; i < ws.size(); ++i) rhs = star(Q, rhs, project_to(Q, ws[i]));

    if (project_to(Q, lhs) != rhs) return false;
    if (!is_Q_type(P, Q, lhs)) return false;
    if (all_max && !is_Q_maximal(P, Q, lhs)) return false;
    return true;
}

/// Dimension of the B-orbit through x_v in G/P: the length of the minimal
/// representative of the coset v W_P.
inline int orbit_dimension(const ParabolicSubset& P, const WeylElement& v) {
    return length(min_coset_rep_right(v, P));
}

/// Same dimension as the cardinality of {a : v(a) > 0 and a <_P 0};
/// enumeration is bounded by the pairings with the translation part of v.
inline int orbit_dimension_via_roots(const ParabolicSubset& P, const WeylElement& v) {
    const RootDatum& d = *v.datum;
    if (!d.affine)
        throw std::invalid_argument("orbit_dimension_via_roots requires an affine datum");
    const RatVec xp = d.facet_point(P);
    int count = 0;
    for (int r = 0; r < d.num_roots(); ++r) {
        const IntVec& alpha = d.root_coords[r];
        const Rat val = d.pairing(alpha, xp);
        Int bound = d.pairing(alpha, v.translation);
        if (bound < 0) bound = -bound;
        for (Int n = -bound - 1; n <= 0; ++n) {
            if (rat_sign(val + Rat(n)) >= 0) continue;  // need a <_P 0 (implies a < 0)
            if (affine_root_positive(act_on_affine_root(v, {alpha, n}))) ++count;
        }
    }
    return count;
}

/// B-invariant cells of the Schubert variety indexed by the coset w W_P:
/// the minimal coset representatives below w.
inline std::vector<WeylElement> coset_cells_below(const ParabolicSubset& P, const WeylElement& w,
                                                  int cap = 14) {
    std::vector<WeylElement> cells;
    for (const WeylElement& x : elements_below(w, cap)) {
        bool minimal = true;
        for (int i : P.indices)
            if (right_descent(x, i)) {
                minimal = false;
                break;
            }
        if (minimal) cells.push_back(x);
    }
    return cells;
}

/// Cell-count generating function of the twisted product X_P(w_bullet):
/// product over the factors of sum_{v <= w_i in W/W_P} q^{l(v_min)}.
inline PolyZ twisted_product_poincare(const ParabolicSubset& P,
                                      const std::vector<OrbitClass>& ws, int cap = 14) {
    PolyZ prod = PolyZ::one();
    for (const OrbitClass& w : ws) {
        PolyZ factor;
        for (const WeylElement& v : coset_cells_below(P, w.min_rep, cap))
            factor += PolyZ::monomial(length(v));
        prod = prod * factor;
    }
    return prod;
}

/// Intersection-cohomology Poincare polynomial of the Schubert variety
/// X_P(w) (q is the weight-2 Tate class):
/// sum over cosets v <= w of q^{dim Y(v)} P(v_max, w_max).
inline PolyZ ih_poincare_schubert(const ParabolicSubset& P, const OrbitClass& w,
                                  KLContext& ctx) {
    PolyZ out;
    for (const WeylElement& v : coset_cells_below(P, w.max_rep, ctx.cap())) {
        const WeylElement v_max = max_coset_rep_right(v, P);
        out += ctx.kl(v_max, w.max_rep).shifted(length(v));
    }
    return out;
}

}  // namespace wflag
