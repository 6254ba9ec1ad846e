#include "voalab/c2lab.hpp"
#include "voalab/c2route.hpp"

#include "printed_table.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace voalab;

namespace {

// Laplace expansion along the first row; only for small matrices.
Rational cofactor_det(const RatMatrix& a)
{
    const std::size_t n = a.size();
    if (n == 0) return Rational(1);
    if (n == 1) return a[0][0];
    Rational out;
    for (std::size_t c = 0; c < n; ++c) {
        if (a[0][c].is_zero()) continue;
        RatMatrix minor;
        for (std::size_t r = 1; r < n; ++r) {
            RatVec row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(a[r][j]);
            minor.push_back(std::move(row));
        }
        Rational term = a[0][c] * cofactor_det(minor);
        out += c % 2 == 0 ? term : -term;
    }
    return out;
}

Vec combination_value(ModeEngine& eng, const Combination& comb, const CosetShift& shift)
{
    Vec out(shift);
    for (const auto& e : comb) out.axpy(e.coeff, eng.mode_product(e.u, -2, e.v));
    return out;
}

} // namespace

TEST(Table1, MatchesPrintedEntries)
{
    for (long m : {1, 2, 3})
        for (long k : {1, 2}) {
            Table1Matrix t = build_table1(m, k);
            EXPECT_EQ(t.rows, voalab::testing::printed_table1(m, k)) << "m=" << m << " k=" << k;
        }
    EXPECT_THROW(build_table1(0, 1), std::invalid_argument);
}

TEST(Table1, DeterminantValues)
{
    EXPECT_EQ(table1_det(1, 1), Rational(-12288));
    EXPECT_EQ(table1_det(2, 3), Rational(-5750784));
    EXPECT_EQ(cofactor_det(voalab::testing::printed_table1(2, 1)), table1_det_formula().evaluate(Rational(2), Rational(1)));
}

TEST(Determinant, BareissAgreesWithCofactorExpansion)
{
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<long> num(-6, 6), den(1, 4);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
        RatMatrix a(n, RatVec(n));
        for (auto& row : a)
            for (auto& x : row) x = trial % 3 == 0 ? Rational(num(rng)) : Rational(num(rng), den(rng));
        if (trial % 7 == 0 && n > 1) a[n - 1] = a[0];
        EXPECT_EQ(det_exact(a), cofactor_det(a));
    }
    EXPECT_EQ(det_exact(RatMatrix{}), Rational(1));
}

TEST(DetScan, CorruptedSampleIsWitnessed)
{
    const BiPoly f = table1_det_formula();
    auto corrupt = [&](long m, long k) {
        Rational v = f.evaluate(Rational(m), Rational(k));
        return (m == 3 && k == 2) ? v + Rational(1) : v;
    };
    std::vector<long> ms{1, 2, 3, 4, 5, 6}, ks{1, 2, 3, 4};
    auto res = det_identity_scan(ms, ks, corrupt);
    EXPECT_FALSE(res.pass);
    ASSERT_TRUE(res.witness);
    EXPECT_EQ(*res.witness, std::make_pair(3L, 2L));

    auto clean = det_identity_scan(ms, ks, [&](long m, long k) { return f.evaluate(Rational(m), Rational(k)); });
    EXPECT_TRUE(clean.pass);
    EXPECT_EQ(*clean.interpolant, f);

    // overdetermined grid with a degree-6 term does not fit degree bounds (5, 3)
    std::vector<long> ms7{1, 2, 3, 4, 5, 6, 7};
    auto high = det_identity_scan(ms7, ks, [&](long m, long k) {
        return f.evaluate(Rational(m), Rational(k)) + Rational(m * m * m * m * m * m);
    });
    EXPECT_FALSE(high.pass);
    EXPECT_FALSE(high.interpolant);
    EXPECT_THROW(det_identity_scan({1, 2, 3}, ks), std::invalid_argument);
}

TEST(SpanBasis, RankAndMembership)
{
    Lattice lat = Lattice::negative_rank1(1);
    Vec v = Vec::monomial(lat, {{0, 1}}, {1}) + Vec::exp(lat, {-1});
    SpanBasis s({v, Rational(2) * v});
    EXPECT_EQ(s.rank(), 1u);
    auto c = s.member(Rational(3) * v);
    ASSERT_TRUE(c);
    EXPECT_EQ((*c)[0] + Rational(2) * (*c)[1], Rational(3));

    SpanBasis empty;
    EXPECT_EQ(empty.rank(), 0u);
    EXPECT_FALSE(empty.member(v));
    EXPECT_TRUE(empty.member(Vec(lat.zero_shift())));

    StandardVectors sv(1, 2);
    SpanBasis g(sv.g());
    EXPECT_EQ(g.rank(), 11u);
    EXPECT_FALSE(g.member(sv.vacuum()));
    Vec twisted(CosetShift{{Rational(1, 2)}}, FockTerm({}, {0}));
    EXPECT_THROW(g.member(twisted), CosetMismatch);
}

TEST(SpanBasis, CoefficientsReconstructTarget)
{
    StandardVectors sv(2, 1);
    std::vector<Vec> gens = sv.g();
    gens.push_back(sv.g(1) + sv.g(3));
    SpanBasis s(gens);
    EXPECT_EQ(s.rank(), 11u);
    Vec target = Rational(3) * sv.g(2) - Rational(1, 2) * sv.g(11) + sv.g(5);
    auto c = s.member(target);
    ASSERT_TRUE(c);
    Vec back(sv.lattice().zero_shift());
    for (std::size_t i = 0; i < gens.size(); ++i) back.axpy((*c)[i], gens[i]);
    EXPECT_EQ(back, target);
}

TEST(Basis, RanksOfNamedFamilies)
{
    for (long m : {1, 2})
        for (long k : {1, 2}) {
            StandardVectors sv(k, m);
            EXPECT_EQ(SpanBasis(sv.g()).rank(), 11u);
            EXPECT_EQ(SpanBasis(sv.f()).rank(), 7u);
            EXPECT_EQ(SpanBasis(sv.h()).rank(), 3u);
            ModeEngine eng(sv.lattice());
            EXPECT_EQ(SpanBasis(table1_vectors(sv, eng)).rank(), 11u);
        }
}

TEST(Witness, LoweringAndVacuum)
{
    for (long k : {1, 2}) {
        EXPECT_TRUE(witness_vacuum(k).equal());
        for (long n : {2, 3}) {
            auto w = witness_E_lowering(n, k);
            EXPECT_TRUE(w.equal()) << w.name;
            EXPECT_EQ(w.isolated_coeff, Rational(-2 * k));
        }
    }
    EXPECT_THROW(witness_E_lowering(1, 1), std::invalid_argument);
}

TEST(C2Search, TranslationIsFound)
{
    StandardVectors sv(1, 1);
    const Lattice& lat = sv.lattice();
    ModeEngine eng(lat);
    Vec target = eng.virasoro_mode(-1, sv.E(1));
    auto res = c2_search(lat, target, C2Bounds{1, 2, 20000});
    ASSERT_TRUE(res.certificate);
    EXPECT_TRUE(res.replay_ok);
    EXPECT_EQ(replay(lat, *res.certificate), target);
    auto round = certificate_from_json(lat, to_json(*res.certificate));
    EXPECT_EQ(replay(lat, round), target);
}

TEST(C2Search, WeightSixVectorInsideBounds)
{
    StandardVectors sv(1, 1);
    auto res = c2_search(sv.lattice(), sv.g(5), C2Bounds{});
    ASSERT_TRUE(res.certificate);
    EXPECT_TRUE(res.replay_ok);
    EXPECT_GT(res.span_rank, 0u);
}

TEST(C2Search, RejectsMixedWeightTargets)
{
    StandardVectors sv(1, 1);
    EXPECT_THROW(c2_search(sv.lattice(), sv.g(1) + sv.f(1), C2Bounds{}), std::invalid_argument);
    EXPECT_THROW(c2_search(sv.lattice(), Vec(sv.lattice().zero_shift()), C2Bounds{}), std::invalid_argument);
}

TEST(C2Search, EmptyBoundsFindNothing)
{
    StandardVectors sv(1, 1);
    auto res = c2_search(sv.lattice(), sv.vacuum(), C2Bounds{0, 0, 100});
    EXPECT_FALSE(res.certificate);
}

TEST(Reduction, LoweringCertificates)
{
    for (long n : {2, 3}) {
        auto cert = reduction_certificate(1, n);
        ASSERT_TRUE(cert) << "n=" << n;
        StandardVectors sv(1, 1);
        EXPECT_EQ(cert->target, sv.E(n - 1));
        EXPECT_EQ(replay(sv.lattice(), *cert), sv.E(n - 1));
    }
}

TEST(Reduction, VacuumAtLargerK)
{
    auto cert = reduction_certificate(3, 0);
    ASSERT_TRUE(cert);
    StandardVectors sv(3, 1);
    EXPECT_EQ(replay(sv.lattice(), *cert), sv.vacuum());
}

TEST(Reduction, ModeActionOnCertificates)
{
    // u_n(a_{-2}b) = a_{-2}(u_n b) + Σ_i C(n,i)(u_i a)_{n-2-i} b, checked through apply_mode
    StandardVectors sv(1, 1);
    const Lattice& lat = sv.lattice();
    ModeEngine eng(lat);
    const Vec a = Vec::monomial(lat, {{0, 1}}, {1}) + Vec::exp(lat, {-1});
    const Vec b = Vec::monomial(lat, {{0, 2}}, {0});
    const Combination comb{CertificateEntry{a, b, Rational(1)}, CertificateEntry{sv.E(1), sv.J(), Rational(-2, 3)}};
    const Vec base = combination_value(eng, comb, lat.zero_shift());
    for (const Vec& u : {sv.omega(), sv.J(), sv.E(1), Vec::monomial(lat, {{0, 1}}, {0})})
        for (long n : {0, -1, -2}) {
            Combination out = apply_mode(eng, u, n, comb);
            EXPECT_EQ(combination_value(eng, out, lat.zero_shift()), eng.mode_product(u, n, base)) << "n=" << n;
            EXPECT_EQ(combination_value(eng, compact(out), lat.zero_shift()), eng.mode_product(u, n, base));
        }
    EXPECT_THROW(apply_mode(eng, sv.omega(), 1, comb), std::invalid_argument);
}

TEST(Plumbing, LiteralFactorialIsOffByOne)
{
    // (L(-1)v)_{-2} = 2 v_{-3}, so the divisor for n = 3 is 2!, not 1!
    ModeEngine eng(Lattice::negative_rank1(1));
    const Lattice& lat = eng.lattice();
    Vec v = Vec::exp(lat, {1}), u = Vec::monomial(lat, {{0, 1}}, {0});
    Vec lhs = eng.mode_product(v, -3, u);
    Vec t = eng.mode_product(translate(eng, v, 1), -2, u);
    ASSERT_FALSE(lhs.is_zero());
    EXPECT_EQ(lhs, Rational(1, 2) * t);
    EXPECT_NE(lhs, t);
}

TEST(Commutativity, LiteralFormFailsOnHeisenbergAndExponential)
{
    // a = α(-1)1, b = e^α: a_{-1}b - b_{-1}a = <α,α> α(-1)e^α, while Σ (-1)^{i+1}/i! L(-1)^i(b_i a) vanishes
    ModeEngine eng(Lattice::negative_rank1(1));
    const Lattice& lat = eng.lattice();
    Vec a = Vec::monomial(lat, {{0, 1}}, {0}), b = Vec::exp(lat, {1});
    Vec lhs = eng.mode_product(a, -1, b) - eng.mode_product(b, -1, a);
    EXPECT_EQ(lhs, Rational(-2) * Vec::monomial(lat, {{0, 1}}, {1}));
    Vec literal(lat.zero_shift()), corrected(lat.zero_shift());
    for (long i = 1; i <= 4; ++i) {
        const Rational c(Integer(i % 2 == 0 ? 1 : -1), factorial(static_cast<unsigned long>(i)));
        literal.axpy(-c, translate(eng, eng.mode_product(b, i, a), static_cast<int>(i)));
        corrected.axpy(c, translate(eng, eng.mode_product(b, i - 1, a), static_cast<int>(i)));
    }
    EXPECT_TRUE(literal.is_zero());
    EXPECT_EQ(corrected, lhs);
}
