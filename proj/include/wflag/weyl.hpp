#pragma once

#include <cstdlib>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "wflag/root_data.hpp"

namespace wflag {

// ---------------------------------------------------------------------------
// Elements of the finite or affine Weyl group, represented as a pair
// (translation, finite part) acting on the coweight space by
// x |-> lambda + wbar(x).  The finite part is stored as its action matrix on
// coroot coordinates, together with the inverse matrix kept in lockstep so
// that inversion never solves a linear system.
//
// With the cocharacter lattice fixed to Q^vee the stabilizer Omega of the
// base alcove is trivial and every element lies in W_aff; omega_part() is
// kept as an accessor for the quasi-Coxeter interface.
// ---------------------------------------------------------------------------

struct WeylElement {
    RootDatumPtr datum;
    IntVec translation;  // coroot coordinates; all zero for finite data
    IntMat fin;          // action of the finite part on coroot coordinates
    IntMat fin_inv;

    bool operator==(const WeylElement& o) const {
        return datum.get() == o.datum.get() && translation == o.translation && fin == o.fin;
    }
    bool operator!=(const WeylElement& o) const { return !(*this == o); }

    bool is_identity() const { return is_zero(translation) && fin == IntMat::identity(datum->rank); }

    /// Trivial for every supported datum (see header note).
    int omega_part() const { return 0; }
};

struct WeylElementHash {
    std::size_t operator()(const WeylElement& w) const {
        std::size_t h = hash_ints(w.translation);
        h = hash_combine(h, hash_ints(w.fin.a));
        return h;
    }
};

inline void require_same_datum(const WeylElement& u, const WeylElement& v) {
    if (u.datum.get() != v.datum.get())
        throw std::invalid_argument("Weyl elements belong to different root data");
}

inline WeylElement identity_element(const RootDatumPtr& d) {
    return {d, zero_vec(d->rank), IntMat::identity(d->rank), IntMat::identity(d->rank)};
}

inline WeylElement simple_reflection(const RootDatumPtr& d, int i) {
    d->validate_generator(i);
    if (i >= 1)
        return {d, zero_vec(d->rank), d->simple_refl_coroot[i - 1], d->simple_refl_coroot[i - 1]};
    // s_0 = s_{-theta+1} = t_{theta^vee} s_theta
    return {d, d->coroot_coords[d->highest_root], d->theta_refl_coroot, d->theta_refl_coroot};
}

inline WeylElement multiply(const WeylElement& u, const WeylElement& v) {
    require_same_datum(u, v);
    return {u.datum, add(u.translation, u.fin.apply(v.translation)), u.fin * v.fin,
            v.fin_inv * u.fin_inv};
}

inline WeylElement invert(const WeylElement& w) {
    return {w.datum, negate(w.fin_inv.apply(w.translation)), w.fin_inv, w.fin};
}

/// Action on a point of the coweight space in rational coordinates.
inline RatVec act_on_point(const WeylElement& w, const RatVec& x) {
    RatVec r = w.fin.apply(x);
    for (int i = 0; i < w.datum->rank; ++i) r[i] += w.translation[i];
    return r;
}

/// w(alpha + n) = wbar(alpha) + (n - <wbar(alpha), lambda>); this realizes
/// w(a)(x) = a(w^{-1} x).
inline AffineRoot act_on_affine_root(const WeylElement& w, const AffineRoot& a) {
    const RootDatum& d = *w.datum;
    const int idx = d.root_index(a.alpha);
    const int im = d.act_on_root_index(w.fin, idx);
    const IntVec& beta = d.root_coords[im];
    return {beta, a.level - d.pairing(beta, w.translation)};
}

/// Separating-hyperplane count: the number of positive affine roots sent to
/// negative ones by w^{-1}; for a finite datum, the classical inversion
/// count.  w^{-1}(alpha + n) = wbar^{-1}(alpha) + (n + <alpha, lambda>).
inline int length(const WeylElement& w) {
    const RootDatum& d = *w.datum;
    Int total = 0;
    for (int r = 0; r < d.num_roots(); ++r) {
        const int rim = d.act_on_root_index(w.fin_inv, r);
        const bool im_negative = !d.is_positive_root(rim);
        if (!d.affine) {
            if (d.is_positive_root(r) && im_negative) ++total;
            continue;
        }
        const Int p = d.pairing(d.root_coords[r], w.translation);
        const Int n_min = d.is_positive_root(r) ? 0 : 1;
        // levels n >= n_min with n + p < 0, plus n = -p when the image root
        // is negative
        if (-p - 1 >= n_min) total += -p - n_min;
        if (im_negative && -p >= n_min) ++total;
    }
    return static_cast<int>(total);
}

/// l(w s_i) < l(w) iff w maps the i-th simple affine root to a negative one.
inline bool right_descent(const WeylElement& w, int i) {
    AffineRoot a = w.datum->affine
                       ? w.datum->simple_affine_root(i)
                       : AffineRoot{[&] {
                             w.datum->validate_generator(i);
                             IntVec c = zero_vec(w.datum->rank);
                             c[i - 1] = 1;
                             return c;
                         }(),
                                    0};
    return affine_root_negative(act_on_affine_root(w, a));
}

inline bool left_descent(const WeylElement& w, int i) { return right_descent(invert(w), i); }

enum class Side { left, right };

inline std::set<int> descents(const WeylElement& w, Side side) {
    std::set<int> out;
    for (int i : w.datum->generator_indices())
        if (side == Side::right ? right_descent(w, i) : left_descent(w, i)) out.insert(i);
    return out;
}

/// Lexicographically-greedy reduced word (smallest right descent stripped
/// first), so the result is deterministic.
inline std::vector<int> reduced_word(const WeylElement& w_in) {
    WeylElement w = w_in;
    std::vector<int> rev;
    const auto gens = w.datum->generator_indices();
    while (!w.is_identity()) {
        bool found = false;
        for (int i : gens) {
            if (right_descent(w, i)) {
                rev.push_back(i);
                w = multiply(w, simple_reflection(w.datum, i));
                found = true;
                break;
            }
        }
        if (!found)
            throw std::logic_error("element has no descent but is not the identity");
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

inline WeylElement element_from_word(const RootDatumPtr& d, const std::vector<int>& word) {
    WeylElement w = identity_element(d);
    for (int i : word) w = multiply(w, simple_reflection(d, i));
    return w;
}

inline std::string word_string(const std::vector<int>& word) {
    std::string s;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(word[i]);
    }
    return s;
}

inline std::string element_word_string(const WeylElement& w) {
    return word_string(reduced_word(w));
}

inline std::vector<int> parse_word(const std::string& s) {
    std::vector<int> w;
    if (s.empty()) return w;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("malformed word '" + s + "'");
        w.push_back(std::atoi(tok.c_str()));
    }
    return w;
}

/// Deterministic total order: by length, then by lexicographic reduced word.
inline bool element_less(const WeylElement& a, const WeylElement& b) {
    const int la = length(a), lb = length(b);
    if (la != lb) return la < lb;
    return reduced_word(a) < reduced_word(b);
}

// ---------------------------------------------------------------------------
// Bruhat order
// ---------------------------------------------------------------------------

/// Memoized Bruhat comparison via the lifting property: for a left descent s
/// of w,  u <= w  iff  (su < u ? su <= sw : u <= sw).  Queries behave
/// atomically; the table is shared under a mutex.
class BruhatCache {
  public:
    bool leq(const WeylElement& u, const WeylElement& w) {
        require_same_datum(u, w);
        std::lock_guard<std::mutex> lock(mu_);
        return leq_impl(u, w);
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

    bool leq_impl(const WeylElement& u, const WeylElement& w) {
        if (u == w) return true;
        const int lu = cached_length(u), lw = cached_length(w);
        if (lu >= lw) return false;
        if (lu == 0) return true;
        const Key key{u, w};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        int s = -1;
        for (int i : w.datum->generator_indices())
            if (left_descent(w, i)) {
                s = i;
                break;
            }
        const WeylElement si = simple_reflection(w.datum, s);
        const WeylElement sw = multiply(si, w);
        const WeylElement su = multiply(si, u);
        const bool r = cached_length(su) < lu ? leq_impl(su, sw) : leq_impl(u, sw);
        memo_.emplace(key, r);
        return r;
    }

    int cached_length(const WeylElement& w) {
        auto it = len_.find(w);
        if (it != len_.end()) return it->second;
        const int l = length(w);
        len_.emplace(w, l);
        return l;
    }

    std::unordered_map<Key, bool, KeyHash> memo_;
    std::unordered_map<WeylElement, int, WeylElementHash> len_;
    std::mutex mu_;
};

inline bool bruhat_leq(const WeylElement& u, const WeylElement& w, BruhatCache& cache) {
    return cache.leq(u, w);
}

/// The lower Bruhat interval {x : x <= w}, by the subword property: close
/// {e} under appending the letters of one reduced word of w.  Sorted by
/// element_less for deterministic iteration.
inline std::vector<WeylElement> elements_below(const WeylElement& w, int cap = 14) {
    if (length(w) > cap)
        throw CapError("elements_below: length " + std::to_string(length(w)) +
                       " exceeds cap " + std::to_string(cap));
    std::unordered_set<WeylElement, WeylElementHash> seen;
    seen.insert(identity_element(w.datum));
    for (int letter : reduced_word(w)) {
        const WeylElement s = simple_reflection(w.datum, letter);
        std::vector<WeylElement> grown;
        for (const auto& x : seen) grown.push_back(multiply(x, s));
        for (auto& x : grown) seen.insert(std::move(x));
    }
    std::vector<WeylElement> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), element_less);
    return out;
}

// ---------------------------------------------------------------------------
// Coset representatives
// ---------------------------------------------------------------------------

inline WeylElement min_double_coset_rep(const ParabolicSubset& J, const WeylElement& w_in,
                                        const ParabolicSubset& K) {
    w_in.datum->validate_parabolic(J);
    w_in.datum->validate_parabolic(K);
    WeylElement w = w_in;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i : J.indices)
            if (left_descent(w, i)) {
                w = multiply(simple_reflection(w.datum, i), w);
                changed = true;
            }
        for (int i : K.indices)
            if (right_descent(w, i)) {
                w = multiply(w, simple_reflection(w.datum, i));
                changed = true;
            }
    }
    return w;
}

/// Greedy ascent to the unique maximal element of W_J w W_K; terminates
/// because the double coset is finite for proper parabolic subsets.
inline WeylElement max_double_coset_rep(const ParabolicSubset& J, const WeylElement& w_in,
                                        const ParabolicSubset& K) {
    w_in.datum->validate_parabolic(J);
    w_in.datum->validate_parabolic(K);
    WeylElement w = w_in;
    long iterations = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i : J.indices)
            if (!left_descent(w, i)) {
                w = multiply(simple_reflection(w.datum, i), w);
                changed = true;
            }
        for (int i : K.indices)
            if (!right_descent(w, i)) {
                w = multiply(w, simple_reflection(w.datum, i));
                changed = true;
            }
        if (++iterations > 200000)
            throw std::logic_error("max_double_coset_rep: ascent failed to terminate");
    }
    return w;
}

inline WeylElement min_coset_rep_left(const ParabolicSubset& J, const WeylElement& w) {
    return min_double_coset_rep(J, w, ParabolicSubset{});
}
inline WeylElement min_coset_rep_right(const WeylElement& w, const ParabolicSubset& K) {
    return min_double_coset_rep(ParabolicSubset{}, w, K);
}
inline WeylElement max_coset_rep_right(const WeylElement& w, const ParabolicSubset& K) {
    return max_double_coset_rep(ParabolicSubset{}, w, K);
}

/// Enumerate the finite subgroup W_J.
inline std::vector<WeylElement> parabolic_subgroup(const RootDatumPtr& d,
                                                   const ParabolicSubset& J,
                                                   std::size_t cap = 2000000) {
    d->validate_parabolic(J);
    std::unordered_set<WeylElement, WeylElementHash> seen;
    std::vector<WeylElement> queue{identity_element(d)};
    seen.insert(queue.front());
    while (!queue.empty()) {
        WeylElement w = queue.back();
        queue.pop_back();
        for (int i : J.indices) {
            WeylElement x = multiply(w, simple_reflection(d, i));
            if (seen.insert(x).second) queue.push_back(x);
        }
        if (seen.size() > cap)
            throw CapError("parabolic_subgroup: enumeration exceeds cap");
    }
    std::vector<WeylElement> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), element_less);
    return out;
}

/// Double coset tagged by its canonical (minimal) representative.
struct CosetTag {
    ParabolicSubset left;
    ParabolicSubset right;
    WeylElement representative;
};

inline CosetTag make_coset_tag(const ParabolicSubset& J, const WeylElement& w,
                               const ParabolicSubset& K) {
    return {J, K, min_double_coset_rep(J, w, K)};
}

// ---------------------------------------------------------------------------
// Index-set counts for the negative parahoric loop group
// ---------------------------------------------------------------------------

/// Cardinality of {a : a < 0, a <_{Jq} 0, w^{-1} a >=_{Jp} 0}; the set is
/// finite because w^{-1} shifts levels by at most the pairing with the
/// translation part.
inline int count_intersection_dim(const RootDatum& d, const ParabolicSubset& Jq,
                                  const ParabolicSubset& Jp, const WeylElement& w) {
    if (!d.affine) throw std::invalid_argument("count_intersection_dim requires an affine datum");
    if (w.datum.get() != &d)
        throw std::invalid_argument("Weyl element belongs to a different root datum");
    const RatVec xq = d.facet_point(Jq);
    const RatVec xp = d.facet_point(Jp);
    const WeylElement winv = invert(w);
    int count = 0;
    for (int r = 0; r < d.num_roots(); ++r) {
        const IntVec& alpha = d.root_coords[r];
        Int bound = d.pairing(alpha, w.translation);
        if (bound < 0) bound = -bound;
        const Rat vq = d.pairing(alpha, xq);
        for (Int n = -bound - 1; n <= 0; ++n) {
            const AffineRoot a{alpha, n};
            if (!affine_root_negative(a)) continue;
            if (rat_sign(vq + Rat(n)) >= 0) continue;  // not a <_{Jq} 0
            const AffineRoot b = act_on_affine_root(winv, a);
            if (rat_sign(d.pairing(b.alpha, xp) + Rat(b.level)) >= 0) ++count;
        }
    }
    return count;
}

}  // namespace wflag
