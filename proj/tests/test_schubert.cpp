#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "incidence/schubert.hpp"

using namespace incidence;

namespace {

std::vector<Partition2> box_partitions(unsigned n) {
    std::vector<Partition2> out;
    for (unsigned a = 0; a <= n - 1; ++a)
        for (unsigned b = 0; b <= a; ++b) out.push_back({a, b});
    return out;
}

ChowClassGamma gamma_pow(const ChowClassGamma& x, unsigned e, unsigned n) {
    ChowClassGamma acc = ChowClassGamma::unit();
    for (unsigned i = 0; i < e; ++i) acc = product_Gamma(acc, x, n);
    return acc;
}

}  // namespace

TEST_CASE("Pieri rule") {
    // sigma_1 . sigma_1 in G(2,4)
    ChowClassG s1s1 = pieri({1, 0}, 1, 3);
    CHECK(s1s1.coeff({2, 0}) == 1);
    CHECK(s1s1.coeff({1, 1}) == 1);
    CHECK(s1s1.terms().size() == 2);

    // truncation at the box: in G(2,3) only sigma_{1,1} survives
    ChowClassG t = pieri({1, 0}, 1, 2);
    CHECK(t.coeff({1, 1}) == 1);
    CHECK(t.terms().size() == 1);

    // degree beyond dim G dies
    for (unsigned n : {2u, 3u, 4u}) CHECK(pieri({n - 1, n - 1}, 1, n).is_zero());
}

TEST_CASE("Giambelli products") {
    // sigma_{1,1}^2 = sigma_{2,2} in G(2,4)
    ChowClassG s11 = ChowClassG::basis({1, 1});
    ChowClassG sq = product_G(s11, s11, 3);
    CHECK(sq.coeff({2, 2}) == 1);
    CHECK(sq.terms().size() == 1);

    // unit
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        ChowClassG x;
        for (auto p : box_partitions(4))
            if (rng.below(3) == 0) x.add(p, BigInt(static_cast<i64>(rng.below(19)) - 9));
        CHECK(product_G(x, ChowClassG::unit(), 4) == x);
    }
}

TEST_CASE("degrees of the Grassmannian of lines are Catalan numbers") {
    std::vector<i64> expected{1, 2, 5, 14, 42};
    for (unsigned n = 2; n <= 6; ++n) {
        ChowClassG acc = ChowClassG::unit();
        for (unsigned i = 0; i < 2 * (n - 1); ++i)
            acc = product_G(acc, ChowClassG::basis({1, 0}), n);
        BigInt deg = integrate_G(acc, n);
        CHECK(deg == expected[n - 2]);
        CHECK(deg == syt_two_row_rectangle(n - 1));  // hook length oracle
    }
}

TEST_CASE("Poincare pairing, exhaustive for n <= 6") {
    for (unsigned n = 2; n <= 6; ++n) {
        auto parts = box_partitions(n);
        for (auto l : parts)
            for (auto m : parts) {
                if (l.weight() + m.weight() != 2 * (n - 1)) continue;
                BigInt val = integrate_G(
                    product_G(ChowClassG::basis(l), ChowClassG::basis(m), n), n);
                bool complementary = (m.a == n - 1 - l.b) && (m.b == n - 1 - l.a);
                CHECK(val == (complementary ? 1 : 0));
            }
    }
}

TEST_CASE("flag ring relation and integrals") {
    // h*h = sigma_1 h - sigma_{1,1}
    for (unsigned n : {2u, 3u, 4u}) {
        ChowClassGamma hh = product_Gamma(ChowClassGamma::h(), ChowClassGamma::h(), n);
        CHECK(hh.part(1) == ChowClassG::basis({1, 0}));
        CHECK(hh.part(0) == scale_G(ChowClassG::basis({1, 1}), -1));

        // h (sigma_1 - h) = sigma_{1,1}
        ChowClassGamma q =
            add_Gamma(ChowClassGamma::sigma({1, 0}), scale_Gamma(ChowClassGamma::h(), -1));
        ChowClassGamma prod = product_Gamma(ChowClassGamma::h(), q, n);
        CHECK(prod.part(0) == ChowClassG::basis({1, 1}));
        CHECK(prod.part(1).is_zero());

        // pullback relation: h^{n+1} = 0
        CHECK(gamma_pow(ChowClassGamma::h(), n + 1, n).is_zero());

        // point class normalization
        ChowClassGamma point =
            product_Gamma(ChowClassGamma::h(), ChowClassGamma::sigma({n - 1, n - 1}), n);
        CHECK(integrate_Gamma(point, n) == 1);
    }
    for (unsigned n = 5; n <= 6; ++n) {
        ChowClassGamma point =
            product_Gamma(ChowClassGamma::h(), ChowClassGamma::sigma({n - 1, n - 1}), n);
        CHECK(integrate_Gamma(point, n) == 1);
    }
    // n = 2 specifics
    CHECK(integrate_Gamma(gamma_pow(ChowClassGamma::h(), 3, 2), 2) == 0);
    ChowClassGamma s1h2 = product_Gamma(ChowClassGamma::sigma({1, 0}),
                                        gamma_pow(ChowClassGamma::h(), 2, 2), 2);
    CHECK(integrate_Gamma(s1h2, 2) == 1);
}

TEST_CASE("product on the flag ring is associative and graded") {
    Rng rng(77);
    for (unsigned n : {2u, 3u, 5u}) {
        for (int trial = 0; trial < 60; ++trial) {
            auto random_class = [&] {
                ChowClassG e0, e1;
                for (auto p : box_partitions(n)) {
                    if (rng.below(4) == 0) e0.add(p, BigInt(static_cast<i64>(rng.below(7)) - 3));
                    if (rng.below(4) == 0) e1.add(p, BigInt(static_cast<i64>(rng.below(7)) - 3));
                }
                return ChowClassGamma(e0, e1);
            };
            ChowClassGamma x = random_class(), y = random_class(), z = random_class();
            CHECK(product_Gamma(product_Gamma(x, y, n), z, n) ==
                  product_Gamma(x, product_Gamma(y, z, n), n));
            CHECK(product_Gamma(x, y, n) == product_Gamma(y, x, n));
        }
    }
    // anything of degree beyond 2n-1 integrates against nothing and vanishes
    for (unsigned n : {2u, 3u}) {
        ChowClassGamma top = product_Gamma(ChowClassGamma::h(),
                                           ChowClassGamma::sigma({n - 1, n - 1}), n);
        CHECK(product_Gamma(top, ChowClassGamma::sigma({1, 0}), n).is_zero());
        CHECK(product_Gamma(top, ChowClassGamma::h(), n).is_zero());
    }
}

TEST_CASE("Euler class integrals") {
    // flexes of a plane cubic
    Prediction p233 = predict(2, 3, 3);
    CHECK(p233.expected_dim == 0);
    REQUIRE(p233.count.has_value());
    CHECK(*p233.count == 9);

    // the 3d(d-2) pattern for plane curves
    std::vector<i64> expected{9, 24, 45, 72};
    for (unsigned d = 3; d <= 6; ++d) {
        BigInt val = integrate_Gamma(euler_class(2, d, 3), 2);
        CHECK(val == expected[d - 3]);
        CHECK(val == BigInt(3) * d * (d - 2));
    }

    // negative expected dimension: prediction is "empty for generic F"
    Prediction p244 = predict(2, 4, 4);
    CHECK(p244.expected_dim == -1);
    CHECK_FALSE(p244.count.has_value());
    CHECK(p244.degrees.empty());

    Prediction p333 = predict(3, 3, 3);
    CHECK(p333.expected_dim == 2);
    CHECK(p333.degrees.size() == 3);

    Prediction p232 = predict(2, 3, 2);
    CHECK(p232.expected_dim == 1);

    CHECK_THROWS_AS(euler_class(2, 3, 4), std::invalid_argument);
    CHECK_THROWS_AS(euler_class(2, 3, 0), std::invalid_argument);
}

TEST_CASE("degree of the incidence bundle over the hypersurface") {
    // [Y_{F,1}] = d h pairs to d against h^{n-1} sigma_1^{n-1}
    for (unsigned n : {2u, 3u, 4u}) {
        for (unsigned d : {1u, 2u, 3u, 5u}) {
            ChowClassGamma cls = euler_class(n, d, 1);
            ChowClassGamma probe = product_Gamma(
                gamma_pow(ChowClassGamma::h(), n - 1, n),
                gamma_pow(ChowClassGamma::sigma({1, 0}), n - 1, n), n);
            CHECK(integrate_Gamma(product_Gamma(cls, probe, n), n) == BigInt(d));
        }
    }
}

TEST_CASE("class formatting") {
    CHECK(format_class_G(ChowClassG::unit()) == "1*s[0,0]");
    CHECK(format_class_G(ChowClassG()) == "0");
    CHECK(format_class_Gamma(ChowClassGamma::h()) == "0 + (1*s[0,0])*h");
}
