#include "voalab/fock.hpp"
#include "voalab/involution.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace voalab;

namespace {

Vec random_vec(const Lattice& lat, std::mt19937_64& rng, const CosetShift& shift)
{
    std::uniform_int_distribution<int> deg(0, 4), pt(-2, 2), coef(-3, 3);
    Vec v(shift);
    for (int n = 0; n < 3; ++n) {
        auto parts = colored_partitions(lat.rank(), deg(rng));
        FockTerm t;
        t.parts = parts[std::uniform_int_distribution<std::size_t>(0, parts.size() - 1)(rng)];
        for (std::size_t i = 0; i < lat.rank(); ++i) t.point.push_back(pt(rng));
        v.add(t, Rational(coef(rng)));
    }
    return v;
}

} // namespace

TEST(FockTerm, CanonicalOrder)
{
    FockTerm t({{0, 1}, {1, 3}, {0, 3}, {0, 2}}, {0, 0});
    ASSERT_TRUE(t.is_canonical());
    EXPECT_EQ(t.parts, (Parts{{0, 3}, {1, 3}, {0, 2}, {0, 1}}));
    EXPECT_EQ(t.degree(), 9);
}

TEST(Heisenberg, AnnihilatesCreation)
{
    for (long k : {1, 2, 3}) {
        Lattice lat = Lattice::negative_rank1(k);
        Vec v = Vec::monomial(lat, {{0, 1}}, {0});
        EXPECT_EQ(heis_act(lat, {Rational(1)}, 1, v), Rational(-2 * k) * Vec::vacuum(lat));
    }
}

TEST(Heisenberg, ZeroModeMeasuresMomentum)
{
    Lattice lat = Lattice::negative_rank1(2);
    for (std::int64_t m = -3; m <= 3; ++m) {
        Vec e = Vec::exp(lat, {m});
        EXPECT_EQ(heis_act(lat, {Rational(1)}, 0, e), Rational(-4 * m) * e);
        EXPECT_TRUE(heis_act(lat, {Rational(1)}, 3, e).is_zero());
    }
}

TEST(Heisenberg, CommutatorRelation)
{
    std::mt19937_64 rng(3);
    for (const IntMatrix& g : {IntMatrix{{-2}}, IntMatrix{{-2, 1}, {1, -2}}, IntMatrix{{2, 0}, {0, -2}}}) {
        Lattice lat(g);
        const auto cosets = lat.dual_cosets();
        std::uniform_int_distribution<long> mode(-3, 3), c(-2, 2);
        for (int trial = 0; trial < 200; ++trial) {
            RatVec h(lat.rank()), hp(lat.rank());
            for (auto& x : h) x = Rational(c(rng));
            for (auto& x : hp) x = Rational(c(rng));
            long m = mode(rng), n = mode(rng);
            Vec v = random_vec(lat, rng, cosets[static_cast<std::size_t>(trial) % cosets.size()]);
            Vec lhs = heis_act(lat, h, m, heis_act(lat, hp, n, v)) - heis_act(lat, hp, n, heis_act(lat, h, m, v));
            Vec rhs(v.shift());
            if (m + n == 0) rhs = (lat.pairing(h, hp) * Rational(m)) * v;
            EXPECT_EQ(lhs, rhs) << "m=" << m << " n=" << n;
        }
    }
}

TEST(Weight, RankOneExponentials)
{
    for (long k : {1, 2, 3}) {
        Lattice lat = Lattice::negative_rank1(k);
        for (std::int64_t m = -3; m <= 3; ++m) {
            EXPECT_EQ(weight(lat, FockTerm({}, {m})), Rational(-k * m * m));
            EXPECT_EQ(weight(lat, FockTerm({{0, 6}}, {m})), Rational(-k * m * m + 6));
        }
        EXPECT_EQ(weight(lat, FockTerm({}, {0})), Rational(0));
    }
}

TEST(Weight, TwistedCoset)
{
    Lattice lat = Lattice::negative_rank1(1);
    CosetShift half{{Rational(1, 2)}};
    // <(m + 1/2)α, (m + 1/2)α>/2 = -(m + 1/2)^2
    EXPECT_EQ(weight(lat, FockTerm({}, {0}), half), Rational(-1, 4));
    EXPECT_EQ(weight(lat, FockTerm({{0, 1}}, {-1}), half), Rational(3, 4));
}

TEST(Vec, MixingCosetsThrows)
{
    Lattice lat = Lattice::negative_rank1(1);
    Vec a = Vec::vacuum(lat);
    Vec b(CosetShift{{Rational(1, 2)}}, FockTerm({}, {0}));
    EXPECT_THROW(a + b, CosetMismatch);
}

TEST(Vec, ZeroCoefficientsVanish)
{
    Lattice lat = Lattice::negative_rank1(1);
    Vec v = Vec::exp(lat, {1});
    v.add(FockTerm({}, {1}), Rational(-1));
    EXPECT_TRUE(v.is_zero());
    EXPECT_EQ(Rational(0) * Vec::exp(lat, {2}), Vec(lat.zero_shift()));
}

TEST(Vec, JsonRoundTrip)
{
    Lattice lat(IntMatrix{{-2, 1}, {1, -2}});
    std::mt19937_64 rng(5);
    for (const auto& shift : lat.dual_cosets())
        for (int i = 0; i < 20; ++i) {
            Vec v = random_vec(lat, rng, shift);
            EXPECT_EQ(vec_from_json(lat, to_json(v)), v);
        }
    auto bad = nlohmann::json::parse(R"({"coset":["1/3","0"],"terms":[]})");
    EXPECT_THROW(vec_from_json(lat, bad), std::invalid_argument);
    auto bad_part = nlohmann::json::parse(R"({"terms":[{"coeff":"1","parts":[[3,1]],"point":[0,0]}]})");
    EXPECT_THROW(vec_from_json(lat, bad_part), std::invalid_argument);
}

TEST(Vec, JsonSchema)
{
    Lattice lat = Lattice::negative_rank1(1);
    Vec v = Vec::monomial(lat, {{0, 2}, {0, 1}}, {1}, Rational(-3, 2));
    EXPECT_EQ(to_json(v).dump(),
              R"({"coset":["0"],"terms":[{"coeff":"-3/2","parts":[[1,2],[1,1]],"point":[1]}]})");
}

TEST(ColoredPartitions, CountsMatchPartitionNumbers)
{
    const std::size_t p[] = {1, 1, 2, 3, 5, 7, 11, 15, 22};
    for (int d = 0; d <= 8; ++d) EXPECT_EQ(colored_partitions(1, d).size(), p[d]);
    // two colours: coefficients of Π (1 - q^n)^{-2}
    const std::size_t p2[] = {1, 2, 5, 10, 20, 36, 65};
    for (int d = 0; d <= 6; ++d) EXPECT_EQ(colored_partitions(2, d).size(), p2[d]);
}

TEST(GradedBasis, WeightSixAndFiveCounts)
{
    Lattice lat = Lattice::negative_rank1(1);
    for (std::int64_t m = 1; m <= 3; ++m) {
        auto six = graded_basis(lat, BasisConstraints{{{m}, {-m}}, 6, 6});
        EXPECT_EQ(six.size(), 22u);
        EXPECT_EQ(projected_basis(lat, six, 1).size(), 11u);
        auto five = graded_basis(lat, BasisConstraints{{{m}, {-m}}, 5, 5});
        EXPECT_EQ(projected_basis(lat, five, 1).size(), 7u);
    }
    auto vac = graded_basis(lat, BasisConstraints{{{0}}, 0, 0});
    ASSERT_EQ(vac.size(), 1u);
    EXPECT_EQ(Vec(lat.zero_shift(), vac[0]), Vec::vacuum(lat));
}

TEST(GradedBasis, NoDuplicatesAndCanonical)
{
    Lattice lat(IntMatrix{{-2, 1}, {1, -2}});
    auto basis = graded_basis(lat, BasisConstraints{{{0, 0}, {1, 0}, {1, -1}}, 0, 5});
    std::set<FockTerm> seen(basis.begin(), basis.end());
    EXPECT_EQ(seen.size(), basis.size());
    for (const auto& t : basis) EXPECT_TRUE(t.is_canonical());
}
