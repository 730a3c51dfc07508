#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wflag/common.hpp"

namespace wflag {

// ---------------------------------------------------------------------------
// Root datum
//
// Roots are stored as integer coordinate vectors in the basis of simple
// roots, coroots in the basis of simple coroots.  The Cartan matrix is kept
// in the convention cartan(i,j) = <alpha_j, alpha_i^vee>, so that
// <alpha, lambda> = sum_{i,j} d_i c_j cartan(i,j) for alpha = sum c_j alpha_j
// and lambda = sum d_i alpha_i^vee.
//
// The cocharacter lattice is fixed to the coroot lattice Q^vee, so the
// extended affine Weyl group coincides with the affine Weyl group and the
// stabilizer of the base alcove is trivial.
// ---------------------------------------------------------------------------

enum class FacetSign { negative = -1, zero = 0, positive = 1 };

/// Affine-linear functional alpha + n on the coweight space.  `alpha` is a
/// root in simple-root coordinates; `level` is the constant n.
struct AffineRoot {
    IntVec alpha;
    Int level = 0;

    bool operator==(const AffineRoot& o) const {
        return level == o.level && alpha == o.alpha;
    }
};

/// Subset of simple(-affine) reflection indices.  For an affine datum the
/// indices range over 0..rank with 0 the affine node; for a finite datum
/// over 1..rank.  Kept sorted and duplicate-free.
struct ParabolicSubset {
    std::vector<int> indices;

    ParabolicSubset() = default;
    ParabolicSubset(std::initializer_list<int> l) : indices(l) { normalize(); }
    explicit ParabolicSubset(std::vector<int> l) : indices(std::move(l)) { normalize(); }

    void normalize() {
        std::sort(indices.begin(), indices.end());
        indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    }
    bool contains(int i) const {
        return std::binary_search(indices.begin(), indices.end(), i);
    }
    bool subset_of(const ParabolicSubset& o) const {
        for (int i : indices)
            if (!o.contains(i)) return false;
        return true;
    }
    bool empty() const { return indices.empty(); }
    bool operator==(const ParabolicSubset& o) const { return indices == o.indices; }
};

class RootDatum;
using RootDatumPtr = std::shared_ptr<const RootDatum>;

class RootDatum {
  public:
    char letter = 'A';
    int rank = 0;
    bool affine = false;

    IntMat cartan;  // cartan(i,j) = <alpha_j, alpha_i^vee>, 0-based

    // All roots; positives first (sorted by height then lex), then their
    // negatives in the same order.  root_coords[i] and coroot_coords[i] are
    // the coordinates of the i-th root and of its associated coroot.
    std::vector<IntVec> root_coords;
    std::vector<IntVec> coroot_coords;
    int n_positive = 0;

    int highest_root = -1;  // index into the root table; set iff irreducible

    // Simple reflection action matrices, 0-based by simple index.
    std::vector<IntMat> simple_refl_root;    // on root coordinates
    std::vector<IntMat> simple_refl_coroot;  // on coroot coordinates
    IntMat theta_refl_coroot;                // s_theta on coroot coordinates

    // Base alcove vertices in exact rational coroot coordinates (affine
    // only): vertex[0] is the origin, vertex[j] = varpi_j^vee / c_j where
    // theta = sum c_j alpha_j.
    std::vector<RatVec> alcove_vertices;

    std::string descriptor() const {
        return std::string(1, letter) + std::to_string(rank) + (affine ? "~" : "");
    }

    int num_roots() const { return static_cast<int>(root_coords.size()); }
    bool is_positive_root(int idx) const { return idx < n_positive; }
    int negate_root(int idx) const {
        return idx < n_positive ? idx + n_positive : idx - n_positive;
    }

    int root_index(const IntVec& coords) const {
        auto it = root_index_.find(coords);
        if (it == root_index_.end())
            throw std::invalid_argument("vector is not a root of " + descriptor());
        return it->second;
    }
    bool is_root(const IntVec& coords) const { return root_index_.count(coords) > 0; }
    int coroot_index(const IntVec& coords) const {
        auto it = coroot_index_.find(coords);
        if (it == coroot_index_.end())
            throw std::invalid_argument("vector is not a coroot of " + descriptor());
        return it->second;
    }

    /// <alpha, lambda> for alpha in root coordinates, lambda in coroot
    /// coordinates.
    Int pairing(const IntVec& alpha, const IntVec& lambda) const {
        Int s = 0;
        for (int i = 0; i < rank; ++i) {
            if (lambda[i] == 0) continue;
            Int row = 0;
            for (int j = 0; j < rank; ++j) row += cartan.at(i, j) * alpha[j];
            s += lambda[i] * row;
        }
        return s;
    }
    Rat pairing(const IntVec& alpha, const RatVec& x) const {
        Rat s(0);
        for (int i = 0; i < rank; ++i) {
            if (x[i].numerator() == 0) continue;
            Int row = 0;
            for (int j = 0; j < rank; ++j) row += cartan.at(i, j) * alpha[j];
            s += x[i] * row;
        }
        return s;
    }

    /// Image of the root with index `idx` under the finite Weyl element whose
    /// coroot-side action matrix is `coroot_mat`.
    int act_on_root_index(const IntMat& coroot_mat, int idx) const {
        return coroot_index(coroot_mat.apply(coroot_coords[idx]));
    }

    /// Generator indices: {0,1,...,rank} for affine, {1,...,rank} for finite.
    std::vector<int> generator_indices() const {
        std::vector<int> g;
        if (affine) g.push_back(0);
        for (int i = 1; i <= rank; ++i) g.push_back(i);
        return g;
    }

    void validate_generator(int i) const {
        const bool ok = affine ? (i >= 0 && i <= rank) : (i >= 1 && i <= rank);
        if (!ok)
            throw std::invalid_argument("generator index " + std::to_string(i) +
                                        " out of range for " + descriptor());
    }
    void validate_parabolic(const ParabolicSubset& J) const {
        for (int i : J.indices) validate_generator(i);
        if (affine && static_cast<int>(J.indices.size()) == rank + 1)
            throw std::invalid_argument(
                "parabolic subset generates an infinite group (all affine nodes)");
    }

    /// Simple affine root a_i: alpha_i for i >= 1, -theta + 1 for i = 0.
    AffineRoot simple_affine_root(int i) const {
        validate_generator(i);
        if (i >= 1) {
            IntVec c = zero_vec(rank);
            c[i - 1] = 1;
            return {c, 0};
        }
        return {negate(root_coords[highest_root]), 1};
    }

    /// The canonical facet point x_J: barycenter of the base alcove vertices
    /// complementary to J.  Every simple affine root indexed by J vanishes at
    /// x_J and every other simple affine root is positive there.
    RatVec facet_point(const ParabolicSubset& J) const {
        if (!affine) throw std::invalid_argument("facet points require an affine datum");
        validate_parabolic(J);
        RatVec x(static_cast<std::size_t>(rank), Rat(0));
        Int count = 0;
        for (int v = 0; v <= rank; ++v) {
            if (J.contains(v)) continue;
            for (int i = 0; i < rank; ++i) x[i] += alcove_vertices[v][i];
            ++count;
        }
        for (int i = 0; i < rank; ++i) x[i] /= Rat(count);
        return x;
    }

    std::unordered_map<IntVec, int, IntVecHash> root_index_;
    std::unordered_map<IntVec, int, IntVecHash> coroot_index_;
};

namespace detail {

inline IntMat cartan_matrix(char letter, int rank) {
    IntMat c(rank);
    for (int i = 0; i < rank; ++i) c.at(i, i) = 2;
    auto bond = [&](int i, int j) {  // single edge between nodes i, j (0-based)
        c.at(i, j) = -1;
        c.at(j, i) = -1;
    };
    switch (letter) {
        case 'A':
            for (int i = 0; i + 1 < rank; ++i) bond(i, i + 1);
            break;
        case 'B':
            // alpha_rank short: <alpha_{n-1}, alpha_n^vee> = -2
            for (int i = 0; i + 1 < rank; ++i) bond(i, i + 1);
            if (rank >= 2) {
                c.at(rank - 1, rank - 2) = -2;
                c.at(rank - 2, rank - 1) = -1;
            }
            break;
        case 'C':
            for (int i = 0; i + 1 < rank; ++i) bond(i, i + 1);
            if (rank >= 2) {
                c.at(rank - 1, rank - 2) = -1;
                c.at(rank - 2, rank - 1) = -2;
            }
            break;
        case 'D':
            if (rank < 2) throw std::invalid_argument("type D requires rank >= 2");
            for (int i = 0; i + 2 < rank; ++i) bond(i, i + 1);
            if (rank >= 3) bond(rank - 3, rank - 1);
            // rank 2: no bonds (A1 x A1)
            break;
        case 'E': {
            if (rank < 6 || rank > 8) throw std::invalid_argument("type E requires rank 6..8");
            // Bourbaki numbering: chain 1-3-4-5-...-rank, branch 2-4.
            bond(0, 2);
            for (int i = 2; i + 1 < rank; ++i) bond(i, i + 1);
            bond(1, 3);
            break;
        }
        case 'F':
            if (rank != 4) throw std::invalid_argument("type F requires rank 4");
            bond(0, 1);
            bond(2, 3);
            c.at(2, 1) = -2;  // alpha_3 short
            c.at(1, 2) = -1;
            break;
        case 'G':
            if (rank != 2) throw std::invalid_argument("type G requires rank 2");
            c.at(0, 1) = -1;
            c.at(1, 0) = -3;
            break;
        default:
            throw std::invalid_argument(std::string("unknown type letter '") + letter + "'");
    }
    return c;
}

/// Solve M x = b over the rationals (M square, invertible).
inline RatVec solve_rational(const std::vector<RatVec>& m_in, const RatVec& b_in) {
    const int n = static_cast<int>(b_in.size());
    std::vector<RatVec> m = m_in;
    RatVec b = b_in;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (m[r][col].numerator() != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::logic_error("singular matrix in facet solve");
        std::swap(m[piv], m[col]);
        std::swap(b[piv], b[col]);
        const Rat d = m[col][col];
        for (int j = 0; j < n; ++j) m[col][j] /= d;
        b[col] /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col || m[r][col].numerator() == 0) continue;
            const Rat f = m[r][col];
            for (int j = 0; j < n; ++j) m[r][j] -= f * m[col][j];
            b[r] -= f * b[col];
        }
    }
    return b;
}

}  // namespace detail

/// Parse a group descriptor `<LETTER><rank>[~]` and build the datum.
inline RootDatumPtr build_root_datum(const std::string& descriptor) {
    if (descriptor.size() < 2 || descriptor.size() > 3)
        throw std::invalid_argument("malformed group descriptor '" + descriptor + "'");
    const char letter = descriptor[0];
    if (letter < 'A' || letter > 'G')
        throw std::invalid_argument("unknown type letter in '" + descriptor + "'");
    if (!std::isdigit(static_cast<unsigned char>(descriptor[1])))
        throw std::invalid_argument("malformed group descriptor '" + descriptor + "'");
    const int rank = descriptor[1] - '0';
    if (rank < 1 || rank > 8)
        throw std::invalid_argument("rank out of range in '" + descriptor + "'");
    bool affine = false;
    if (descriptor.size() == 3) {
        if (descriptor[2] != '~')
            throw std::invalid_argument("malformed group descriptor '" + descriptor + "'");
        affine = true;
    }

    auto d = std::make_shared<RootDatum>();
    d->letter = letter;
    d->rank = rank;
    d->affine = affine;
    d->cartan = detail::cartan_matrix(letter, rank);

    // Simple reflection matrices.
    d->simple_refl_root.resize(rank);
    d->simple_refl_coroot.resize(rank);
    for (int i = 0; i < rank; ++i) {
        IntMat r = IntMat::identity(rank);
        IntMat cr = IntMat::identity(rank);
        for (int j = 0; j < rank; ++j) {
            r.at(i, j) -= d->cartan.at(i, j);   // alpha_j -> alpha_j - <alpha_j,ai^vee> alpha_i
            cr.at(i, j) -= d->cartan.at(j, i);  // aj^vee -> aj^vee - <alpha_i,aj^vee> ai^vee
        }
        d->simple_refl_root[i] = r;
        d->simple_refl_coroot[i] = cr;
    }

    // Enumerate the root system by closing the simples under the simple
    // reflections; roots and coroots are propagated in lockstep.
    std::map<IntVec, IntVec> roots;  // root coords -> coroot coords
    std::vector<IntVec> queue;
    for (int i = 0; i < rank; ++i) {
        IntVec e = zero_vec(rank);
        e[i] = 1;
        roots[e] = e;
        queue.push_back(e);
    }
    while (!queue.empty()) {
        IntVec r = queue.back();
        queue.pop_back();
        const IntVec cr = roots[r];
        for (int i = 0; i < rank; ++i) {
            IntVec r2 = d->simple_refl_root[i].apply(r);
            if (roots.count(r2)) continue;
            roots[r2] = d->simple_refl_coroot[i].apply(cr);
            queue.push_back(r2);
        }
    }

    std::vector<std::pair<IntVec, IntVec>> positives;
    for (const auto& [r, cr] : roots) {
        bool pos = true;
        for (Int x : r)
            if (x < 0) {
                pos = false;
                break;
            }
        if (pos) positives.emplace_back(r, cr);
    }
    auto height = [](const IntVec& v) {
        Int h = 0;
        for (Int x : v) h += x;
        return h;
    };
    std::sort(positives.begin(), positives.end(), [&](const auto& a, const auto& b) {
        const Int ha = height(a.first), hb = height(b.first);
        if (ha != hb) return ha < hb;
        return a.first < b.first;
    });

    d->n_positive = static_cast<int>(positives.size());
    for (const auto& [r, cr] : positives) {
        d->root_coords.push_back(r);
        d->coroot_coords.push_back(cr);
    }
    for (const auto& [r, cr] : positives) {
        d->root_coords.push_back(negate(r));
        d->coroot_coords.push_back(negate(cr));
    }
    for (int i = 0; i < d->num_roots(); ++i) {
        d->root_index_[d->root_coords[i]] = i;
        d->coroot_index_[d->coroot_coords[i]] = i;
    }

    // Highest root: unique positive root of maximal height when irreducible.
    {
        const Int hmax = height(positives.back().first);
        int count = 0;
        for (int i = 0; i < d->n_positive; ++i)
            if (height(d->root_coords[i]) == hmax) {
                d->highest_root = i;
                ++count;
            }
        if (count != 1) d->highest_root = -1;  // reducible (D2)
    }

    if (affine) {
        if (d->highest_root < 0)
            throw std::invalid_argument("affine form requires an irreducible root system ('" +
                                        descriptor + "' is reducible)");
        const IntVec& theta = d->root_coords[d->highest_root];
        const IntVec& theta_cov = d->coroot_coords[d->highest_root];
        IntMat m = IntMat::identity(rank);
        for (int j = 0; j < rank; ++j) {
            IntVec e = zero_vec(rank);
            e[j] = 1;
            const Int p = d->pairing(theta, e);  // <theta, alpha_j^vee>
            for (int i = 0; i < rank; ++i) m.at(i, j) -= p * theta_cov[i];
        }
        d->theta_refl_coroot = m;

        // Alcove vertices: origin plus varpi_j^vee / c_j, where A^T w = e_j.
        d->alcove_vertices.assign(static_cast<std::size_t>(rank) + 1,
                                  RatVec(static_cast<std::size_t>(rank), Rat(0)));
        std::vector<RatVec> at(rank, RatVec(static_cast<std::size_t>(rank)));
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) at[i][j] = Rat(d->cartan.at(j, i));
        for (int j = 1; j <= rank; ++j) {
            RatVec e(static_cast<std::size_t>(rank), Rat(0));
            e[j - 1] = Rat(1);
            RatVec w = detail::solve_rational(at, e);
            const Int cj = theta[j - 1];
            for (int i = 0; i < rank; ++i) d->alcove_vertices[j][i] = w[i] / Rat(cj);
        }
    }

    return d;
}

/// Positivity of an affine root: alpha+n > 0 iff n >= 1, or n = 0 and
/// alpha > 0.  For a finite datum only level 0 occurs.
inline bool affine_root_positive(const AffineRoot& a) {
    if (a.level >= 1) return true;
    if (a.level <= -1) return false;
    for (Int x : a.alpha)
        if (x != 0) return x > 0;
    return false;  // not a root; callers validate
}

inline bool affine_root_negative(const AffineRoot& a) {
    return affine_root_positive({negate(a.alpha), -a.level});
}

/// Sign of the affine root at the canonical facet point x_J.
inline FacetSign sign_at_facet(const RootDatum& d, const AffineRoot& a,
                               const ParabolicSubset& J) {
    d.root_index(a.alpha);  // validates that alpha is a root of d
    const RatVec x = d.facet_point(J);
    const int s = rat_sign(d.pairing(a.alpha, x) + Rat(a.level));
    if (s < 0) return FacetSign::negative;
    if (s > 0) return FacetSign::positive;
    return FacetSign::zero;
}

/// Smallest integer i >= 0 such that alpha - i takes negative values on the
/// facet of J.  Since alpha - i is strictly decreasing in i this is
/// floor(alpha(x_J)) + 1 clamped at 0.
inline Int i_alpha_f(const RootDatum& d, const IntVec& alpha, const ParabolicSubset& J) {
    d.root_index(alpha);
    const RatVec x = d.facet_point(J);
    const Rat v = d.pairing(alpha, x);
    if (rat_sign(v) < 0) return 0;
    const Int fl = v.numerator() / v.denominator();  // v >= 0: truncation = floor
    return fl + 1;
}

}  // namespace wflag
