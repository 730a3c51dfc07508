#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wflag/wflag.hpp"

using namespace wflag;

namespace {

int expected_positive_count(char letter, int rank) {
    switch (letter) {
        case 'A': return rank * (rank + 1) / 2;
        case 'B':
        case 'C': return rank * rank;
        case 'D': return rank * (rank - 1);
        case 'E': return rank == 6 ? 36 : (rank == 7 ? 63 : 120);
        case 'F': return 24;
        case 'G': return 6;
    }
    return -1;
}

WeylElement random_element(const RootDatumPtr& d, std::mt19937& rng, int letters) {
    auto gens = d->generator_indices();
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    WeylElement w = identity_element(d);
    for (int i = 0; i < letters; ++i) w = multiply(w, simple_reflection(d, gens[pick(rng)]));
    return w;
}

}  // namespace

TEST_CASE("descriptor grammar") {
    CHECK_THROWS_AS(build_root_datum("Z3"), std::invalid_argument);
    CHECK_THROWS_AS(build_root_datum("A0"), std::invalid_argument);
    CHECK_THROWS_AS(build_root_datum("A9"), std::invalid_argument);
    CHECK_THROWS_AS(build_root_datum(""), std::invalid_argument);
    CHECK_THROWS_AS(build_root_datum("A"), std::invalid_argument);
    CHECK_THROWS_AS(build_root_datum("a2"), std::invalid_argument);
    CHECK_THROWS_AS(build_root_datum("A2~~"), std::invalid_argument);
    CHECK_THROWS_AS(build_root_datum("H9"), std::invalid_argument);
    CHECK_THROWS_AS(build_root_datum("E5"), std::invalid_argument);
    CHECK_THROWS_AS(build_root_datum("F3"), std::invalid_argument);
    CHECK_THROWS_AS(build_root_datum("G3"), std::invalid_argument);
    CHECK_THROWS_AS(build_root_datum("D2~"), std::invalid_argument);  // reducible

    auto a1 = build_root_datum("A1");
    CHECK(a1->rank == 1);
    CHECK_FALSE(a1->affine);
    CHECK(a1->n_positive == 1);

    auto a2t = build_root_datum("A2~");
    CHECK(a2t->affine);
    CHECK(a2t->n_positive == 3);
}

TEST_CASE("root system invariants") {
    for (const std::string desc :
         {"A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "E6", "A2~", "B2~", "G2~"}) {
        auto d = build_root_datum(desc);
        INFO("datum " << desc);
        CHECK(d->n_positive == expected_positive_count(d->letter, d->rank));

        // <alpha_i, alpha_i^vee> = 2 and Cartan matrix reconstruction
        for (int i = 0; i < d->rank; ++i) {
            IntVec ei = zero_vec(d->rank);
            ei[i] = 1;
            for (int j = 0; j < d->rank; ++j) {
                IntVec ej = zero_vec(d->rank);
                ej[j] = 1;
                CHECK(d->pairing(ej, ei) == d->cartan.at(i, j));
            }
            CHECK(d->pairing(ei, ei) == 2);
        }

        // closure under the simple reflections up to sign
        for (int r = 0; r < d->num_roots(); ++r)
            for (int i = 0; i < d->rank; ++i) {
                IntVec im = d->simple_refl_root[i].apply(d->root_coords[r]);
                CHECK(d->is_root(im));
            }
    }
}

TEST_CASE("act_on_affine_root worked examples") {
    auto d = build_root_datum("A1~");
    const IntVec alpha = {1};
    const AffineRoot a{alpha, 0};

    SECTION("identity fixes alpha+1") {
        AffineRoot r = act_on_affine_root(identity_element(d), {alpha, 1});
        CHECK(r.alpha == alpha);
        CHECK(r.level == 1);
    }
    SECTION("t_{alpha^vee} sends alpha to alpha - 2") {
        // t_{alpha^vee} = s_0 s_1
        WeylElement t = multiply(simple_reflection(d, 0), simple_reflection(d, 1));
        AffineRoot r = act_on_affine_root(t, a);
        CHECK(r.alpha == alpha);
        CHECK(r.level == -2);
    }
    SECTION("s_alpha sends alpha+1 to -alpha+1") {
        AffineRoot r = act_on_affine_root(simple_reflection(d, 1), {alpha, 1});
        CHECK(r.alpha == negate(alpha));
        CHECK(r.level == 1);
    }
}

TEST_CASE("affine action is a group action evaluated pointwise") {
    std::mt19937 rng(20240811);
    for (const std::string desc : {"A1~", "A2~", "B2~"}) {
        auto d = build_root_datum(desc);
        // sample points with distinct denominators so functional equality at
        // two generic points pins the affine-linear map on a line
        std::vector<RatVec> points;
        for (int k = 1; k <= 3; ++k) {
            RatVec x(d->rank);
            for (int i = 0; i < d->rank; ++i) x[i] = Rat(k + i, 7 + 2 * k);
            points.push_back(x);
        }
        auto eval = [&](const AffineRoot& a, const RatVec& x) {
            return d->pairing(a.alpha, x) + Rat(a.level);
        };
        for (int trial = 0; trial < 40; ++trial) {
            WeylElement w1 = random_element(d, rng, 4);
            WeylElement w2 = random_element(d, rng, 3);
            std::uniform_int_distribution<int> pr(0, d->num_roots() - 1);
            std::uniform_int_distribution<Int> pl(-2, 2);
            AffineRoot a{d->root_coords[pr(rng)], pl(rng)};

            // w(a)(x) = a(w^{-1} x), checked at sample points
            AffineRoot wa = act_on_affine_root(w1, a);
            for (const RatVec& x : points)
                CHECK(eval(wa, x) == eval(a, act_on_point(invert(w1), x)));

            // group action
            AffineRoot lhs = act_on_affine_root(w1, act_on_affine_root(w2, a));
            AffineRoot rhs = act_on_affine_root(multiply(w1, w2), a);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("positivity flip count equals length") {
    std::mt19937 rng(7);
    for (const std::string desc : {"A2", "B2", "A1~", "A2~"}) {
        auto d = build_root_datum(desc);
        for (int trial = 0; trial < 30; ++trial) {
            WeylElement w = random_element(d, rng, 6);
            if (length(w) > 10) continue;
            const WeylElement winv = invert(w);
            // count positive affine roots a with w^{-1} a < 0, directly
            int flips = 0;
            for (int r = 0; r < d->num_roots(); ++r) {
                Int bound = 0;
                for (int i = 0; i < d->rank; ++i) bound += std::abs(w.translation[i]) * 8;
                const Int hi = d->affine ? bound + 2 : 0;
                for (Int n = 0; n <= hi; ++n) {
                    const AffineRoot a{d->root_coords[r], n};
                    if (!affine_root_positive(a)) continue;
                    if (affine_root_negative(act_on_affine_root(winv, a))) ++flips;
                }
            }
            CHECK(flips == length(w));
        }
    }
}

TEST_CASE("sign_at_facet") {
    auto d = build_root_datum("A1~");
    const ParabolicSubset none{};
    const ParabolicSubset vertex{1};
    const IntVec alpha = {1};

    CHECK(sign_at_facet(*d, {alpha, 0}, none) == FacetSign::positive);
    CHECK(sign_at_facet(*d, {alpha, -1}, none) == FacetSign::negative);
    CHECK(sign_at_facet(*d, {alpha, 0}, vertex) == FacetSign::zero);

    SECTION("at the Iwahori facet, negative iff negative affine root") {
        for (const std::string desc : {"A1~", "A2~", "B2~"}) {
            auto dd = build_root_datum(desc);
            for (int r = 0; r < dd->num_roots(); ++r)
                for (Int n = -3; n <= 3; ++n) {
                    const AffineRoot a{dd->root_coords[r], n};
                    const bool neg = sign_at_facet(*dd, a, none) == FacetSign::negative;
                    CHECK(neg == affine_root_negative(a));
                }
        }
    }

    SECTION("facet point solves the defining signs") {
        auto dd = build_root_datum("A2~");
        for (int mask = 0; mask < 7; ++mask) {  // proper subsets of {0,1,2}
            std::vector<int> idx;
            for (int i = 0; i <= 2; ++i)
                if (mask & (1 << i)) idx.push_back(i);
            const ParabolicSubset J(idx);
            for (int i = 0; i <= 2; ++i) {
                const FacetSign s = sign_at_facet(*dd, dd->simple_affine_root(i), J);
                if (J.contains(i))
                    CHECK(s == FacetSign::zero);
                else
                    CHECK(s == FacetSign::positive);
            }
        }
    }
}

TEST_CASE("i_alpha_f") {
    auto d = build_root_datum("A1~");
    const IntVec alpha = {1};
    CHECK(i_alpha_f(*d, alpha, ParabolicSubset{}) == 1);
    CHECK(i_alpha_f(*d, negate(alpha), ParabolicSubset{}) == 0);
    CHECK(i_alpha_f(*d, alpha, ParabolicSubset{1}) == 1);

    SECTION("bounds over all rank <= 2 affine data and all facets") {
        for (const std::string desc : {"A1~", "A2~", "B2~", "G2~"}) {
            auto dd = build_root_datum(desc);
            const int n = dd->rank + 1;
            for (int mask = 0; mask + 1 < (1 << n); ++mask) {
                std::vector<int> idx;
                for (int i = 0; i < n; ++i)
                    if (mask & (1 << i)) idx.push_back(i);
                const ParabolicSubset J(idx);
                for (int r = 0; r < dd->num_roots(); ++r) {
                    const Int i = i_alpha_f(*dd, dd->root_coords[r], J);
                    const bool pos = dd->is_positive_root(r);
                    CHECK(i >= 0);
                    if (pos) CHECK(i >= 1);
                    CHECK(i <= 2);  // alcove-diameter regression guard, rank <= 2
                    if (J.empty()) CHECK(i == (pos ? 1 : 0));
                    // minimality, by direct evaluation
                    CHECK(sign_at_facet(*dd, {dd->root_coords[r], -i}, J) ==
                          FacetSign::negative);
                    if (i > 0)
                        CHECK(sign_at_facet(*dd, {dd->root_coords[r], -(i - 1)}, J) !=
                              FacetSign::negative);
                }
            }
        }
    }
}

TEST_CASE("count_intersection_dim") {
    auto d = build_root_datum("A1~");
    const WeylElement e = identity_element(d);
    const ParabolicSubset none{};
    const ParabolicSubset vertex{1};

    CHECK(count_intersection_dim(*d, none, none, e) == 0);
    CHECK(count_intersection_dim(*d, vertex, vertex, e) == 0);
    CHECK(count_intersection_dim(*d, none, vertex, e) == 1);
    CHECK(count_intersection_dim(*d, none, none, simple_reflection(d, 1)) == 1);

    SECTION("Iwahori-Iwahori count equals length") {
        std::mt19937 rng(99);
        for (const std::string desc : {"A1~", "A2~"}) {
            auto dd = build_root_datum(desc);
            for (int trial = 0; trial < 25; ++trial) {
                WeylElement w = random_element(dd, rng, 5);
                CHECK(count_intersection_dim(*dd, ParabolicSubset{}, ParabolicSubset{}, w) ==
                      length(w));
            }
        }
    }
}

TEST_CASE("parabolic subset validation") {
    auto d = build_root_datum("A2~");
    CHECK_THROWS_AS(d->validate_parabolic(ParabolicSubset{0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(d->validate_parabolic(ParabolicSubset{3}), std::invalid_argument);
    CHECK_NOTHROW(d->validate_parabolic(ParabolicSubset{0, 2}));

    auto fin = build_root_datum("A2");
    CHECK_THROWS_AS(fin->validate_parabolic(ParabolicSubset{0}), std::invalid_argument);
    CHECK_NOTHROW(fin->validate_parabolic(ParabolicSubset{1, 2}));

    SECTION("W_J finite for proper affine subsets, by closure enumeration") {
        CHECK(parabolic_subgroup(d, ParabolicSubset{0, 1}).size() == 6);
        CHECK(parabolic_subgroup(d, ParabolicSubset{1, 2}).size() == 6);
        CHECK(parabolic_subgroup(d, ParabolicSubset{1}).size() == 2);
        CHECK(parabolic_subgroup(d, ParabolicSubset{}).size() == 1);
    }
}
