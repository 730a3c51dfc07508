#pragma once

#include "wflag/poly.hpp"
#include "wflag/weyl.hpp"

namespace wflag {

/// 0-Hecke (Demazure) product: fold w <- max(w, w s) over a reduced word of
/// v, the maximum taken in the Bruhat order (w and ws are always
/// comparable).
inline WeylElement demazure_product(const WeylElement& u, const WeylElement& v) {
    require_same_datum(u, v);
    WeylElement w = u;
    for (int letter : reduced_word(v)) {
        if (!right_descent(w, letter)) w = multiply(w, simple_reflection(w.datum, letter));
    }
    return w;
}

// ---------------------------------------------------------------------------
// Kazhdan-Lusztig polynomials
//
// Primary algorithm: the right-hand C'-basis recursion on a left descent s
// of w, with v = sw and c = [su < u]:
//
//   P(u,w) = q^{1-c} P(su,v) + q^c P(u,v)
//            - sum_{u <= z < v, sz < z} mu(z,v) q^{(l(w)-l(z))/2} P(u,z)
//
// Independent oracle: R-polynomials plus the self-duality triangular solve
//   sum_{u <= y <= w} R(u,y) P(y,w) = q^{l(w)-l(u)} P(u,w)(1/q),
// which determines P degree-by-degree since deg P < (l(w)-l(u))/2.
// The two routes share nothing but the group operations.
// ---------------------------------------------------------------------------

class KLContext {
  public:
    explicit KLContext(RootDatumPtr datum, int cap = 14)
        : datum_(std::move(datum)), cap_(cap) {}

    const RootDatumPtr& datum() const { return datum_; }
    int cap() const { return cap_; }
    BruhatCache& bruhat() { return bruhat_; }

    bool leq(const WeylElement& u, const WeylElement& w) { return bruhat_.leq(u, w); }

    PolyZ kl(const WeylElement& u, const WeylElement& w) {
        check_elements(u, w);
        std::lock_guard<std::mutex> lock(mu_);
        return kl_impl(u, w);
    }

    /// mu(u,w): coefficient of q^{(l(w)-l(u)-1)/2} in P(u,w).
    Int mu(const WeylElement& u, const WeylElement& w) {
        check_elements(u, w);
        std::lock_guard<std::mutex> lock(mu_);
        return mu_impl(u, w);
    }

    PolyZ r_polynomial(const WeylElement& u, const WeylElement& w) {
        check_elements(u, w);
        std::lock_guard<std::mutex> lock(mu_);
        return r_impl(u, w);
    }

    /// KL polynomial recovered through the R-polynomial route only.
    PolyZ kl_via_r(const WeylElement& u, const WeylElement& w) {
        check_elements(u, w);
        std::lock_guard<std::mutex> lock(mu_);
        return kl_via_r_impl(u, w);
    }

    /// Inverse KL polynomial Ptilde(u,w): the (u,w) entry of the inverse of
    /// the matrix (P(x,y)) over the interval, i.e. the unique solution of
    /// sum_{u <= x <= w} P(u,x) Ptilde(x,w) = delta(u,w).  `top` bounds the
    /// working interval and must satisfy w <= top.
    PolyZ inverse_kl(const WeylElement& u, const WeylElement& w, const WeylElement& top) {
        check_elements(u, w);
        check_elements(w, top);
        if (length(top) > cap_)
            throw CapError("inverse_kl: interval top exceeds cap");
        std::lock_guard<std::mutex> lock(mu_);
        if (!bruhat_.leq(w, top)) throw std::invalid_argument("inverse_kl: requires w <= top");
        return inv_impl(u, w);
    }

    /// Q(u,w) = (-1)^{l(u)+l(w)} Ptilde(u,w); nonnegative coefficients.
    PolyZ q_polynomial(const WeylElement& u, const WeylElement& w, const WeylElement& top) {
        PolyZ pt = inverse_kl(u, w, top);
        if ((length(u) + length(w)) % 2 != 0) pt = PolyZ::zero() - pt;
        return pt;
    }

    /// Preload a memoized KL value (persistent-cache support).
    void seed_kl(const WeylElement& u, const WeylElement& w, const PolyZ& p) {
        require_same_datum(u, w);
        std::lock_guard<std::mutex> lock(mu_);
        kl_.emplace(Key{u, w}, p);
    }

    std::vector<std::tuple<WeylElement, WeylElement, PolyZ>> kl_entries() {
        std::lock_guard<std::mutex> lock(mu_);
        std::vector<std::tuple<WeylElement, WeylElement, PolyZ>> out;
        out.reserve(kl_.size());
        for (const auto& [k, p] : kl_) out.emplace_back(k.u, k.w, p);
        return out;
    }

  private:
    struct Key {
        WeylElement u, w;
        bool operator==(const Key& o) const { return u == o.u && w == o.w; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return hash_combine(WeylElementHash{}(k.u), WeylElementHash{}(k.w));
        }
    };

    void check_elements(const WeylElement& u, const WeylElement& w) {
        require_same_datum(u, w);
        if (u.datum.get() != datum_.get())
            throw std::invalid_argument("elements belong to a different root datum");
        if (length(w) > cap_)
            throw CapError("interval length " + std::to_string(length(w)) + " exceeds cap " +
                           std::to_string(cap_));
    }

    const std::vector<WeylElement>& below(const WeylElement& w) {
        auto it = below_.find(w);
        if (it != below_.end()) return it->second;
        return below_.emplace(w, elements_below(w, cap_)).first->second;
    }

    PolyZ kl_impl(const WeylElement& u, const WeylElement& w) {
        if (!bruhat_.leq(u, w)) return PolyZ::zero();
        if (u == w) return PolyZ::one();
        const Key key{u, w};
        if (auto it = kl_.find(key); it != kl_.end()) return it->second;

        int s = -1;
        for (int i : w.datum->generator_indices())
            if (left_descent(w, i)) {
                s = i;
                break;
            }
        const WeylElement si = simple_reflection(w.datum, s);
        const WeylElement v = multiply(si, w);
        const WeylElement su = multiply(si, u);
        const bool c = length(su) < length(u);

        PolyZ p = c ? kl_impl(su, v) + kl_impl(u, v).shifted(1)
                    : kl_impl(su, v).shifted(1) + kl_impl(u, v);
        const int lw = length(w);
        for (const WeylElement& z : below(v)) {
            if (!left_descent(z, s)) continue;
            if (!bruhat_.leq(u, z)) continue;
            const Int m = mu_impl(z, v);
            if (m == 0) continue;
            const int e = (lw - length(z)) / 2;
            p -= kl_impl(u, z) * PolyZ::monomial(e, m);
        }
        kl_.emplace(key, p);
        return p;
    }

    Int mu_impl(const WeylElement& u, const WeylElement& w) {
        const int diff = length(w) - length(u);
        if (diff <= 0 || diff % 2 == 0) return 0;
        return kl_impl(u, w).coeff((diff - 1) / 2);
    }

    PolyZ r_impl(const WeylElement& u, const WeylElement& w) {
        if (w.is_identity()) return u.is_identity() ? PolyZ::one() : PolyZ::zero();
        if (u == w) return PolyZ::one();
        const Key key{u, w};
        if (auto it = r_.find(key); it != r_.end()) return it->second;
        int s = -1;
        for (int i : w.datum->generator_indices())
            if (right_descent(w, i)) {
                s = i;
                break;
            }
        const WeylElement si = simple_reflection(w.datum, s);
        const WeylElement ws = multiply(w, si);
        const WeylElement us = multiply(u, si);
        PolyZ r;
        if (length(us) < length(u)) {
            r = r_impl(us, ws);
        } else {
            r = PolyZ{{-1, 1}} * r_impl(u, ws) + r_impl(us, ws).shifted(1);
        }
        r_.emplace(key, r);
        return r;
    }

    PolyZ kl_via_r_impl(const WeylElement& u, const WeylElement& w) {
        if (!bruhat_.leq(u, w)) return PolyZ::zero();
        auto cit = r_columns_.find(w);
        if (cit == r_columns_.end()) {
            std::unordered_map<WeylElement, PolyZ, WeylElementHash> col;
            std::vector<WeylElement> interval = below(w);
            std::sort(interval.begin(), interval.end(),
                      [](const WeylElement& a, const WeylElement& b) {
                          return length(a) > length(b);
                      });
            for (const WeylElement& x : interval) {
                if (x == w) {
                    col[x] = PolyZ::one();
                    continue;
                }
                PolyZ s;
                for (const auto& [y, py] : col) {
                    if (!bruhat_.leq(x, y)) continue;
                    s += r_impl(x, y) * py;
                }
                const int d = length(w) - length(x);
                PolyZ p;
                for (int i = 0; 2 * i <= d - 1; ++i)
                    if (s.coeff(d - i) != 0) p += PolyZ::monomial(i, s.coeff(d - i));
                // verify the full self-duality identity q^d p(1/q) = s + p
                PolyZ lhs;
                for (int i = 0; i <= p.degree(); ++i)
                    if (p.coeff(i) != 0) lhs += PolyZ::monomial(d - i, p.coeff(i));
                if (lhs != s + p)
                    throw std::logic_error("kl_via_r: self-duality solve failed");
                col[x] = p;
            }
            cit = r_columns_.emplace(w, std::move(col)).first;
        }
        auto it = cit->second.find(u);
        return it == cit->second.end() ? PolyZ::zero() : it->second;
    }

    PolyZ inv_impl(const WeylElement& u, const WeylElement& w) {
        if (!bruhat_.leq(u, w)) return PolyZ::zero();
        if (u == w) return PolyZ::one();
        const Key key{u, w};
        if (auto it = inv_.find(key); it != inv_.end()) return it->second;
        PolyZ s;
        for (const WeylElement& x : below(w)) {
            if (x == u || !bruhat_.leq(u, x)) continue;
            s += kl_impl(u, x) * inv_impl(x, w);
        }
        PolyZ pt = PolyZ::zero() - s;
        // sign pattern (-1)^{l(u)+l(w)} Ptilde = Q with Q >= 0
        PolyZ signed_pt = pt;
        if ((length(u) + length(w)) % 2 != 0) signed_pt = PolyZ::zero() - signed_pt;
        if (!signed_pt.nonneg_coeffs())
            throw std::logic_error("inverse_kl: sign constraint violated");
        inv_.emplace(key, pt);
        return pt;
    }

    RootDatumPtr datum_;
    int cap_;
    BruhatCache bruhat_;
    std::unordered_map<Key, PolyZ, KeyHash> kl_, r_, inv_;
    std::unordered_map<WeylElement, std::vector<WeylElement>, WeylElementHash> below_;
    std::unordered_map<WeylElement, std::unordered_map<WeylElement, PolyZ, WeylElementHash>,
                       WeylElementHash>
        r_columns_;
    std::mutex mu_;
};

}  // namespace wflag
