#include "voalab/involution.hpp"
#include "voalab/vertex.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace voalab;

namespace {

// Σ_λ⊢j Π_n x_n^{k_n} / (n^{k_n} k_n!), enumerated from scratch.
SchurCache::Poly brute_force_schur(int j)
{
    SchurCache::Poly out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            Rational c(1);
            std::size_t i = 0;
            while (i < cur.size()) {
                std::size_t e = i;
                while (e < cur.size() && cur[e] == cur[i]) ++e;
                const long mult = static_cast<long>(e - i);
                c /= pow(Rational(cur[i]), mult) * Rational(factorial(static_cast<unsigned long>(mult)));
                i = e;
            }
            out[cur] = c;
            return;
        }
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            cur.push_back(p);
            rec(remaining - p, p);
            cur.pop_back();
        }
    };
    rec(j, j);
    return out;
}

// L(n) = 1/2 Σ_{i,l} G^{-1}_{il} Σ_j :α_i(j) α_l(n-j):, straight from the Heisenberg action.
Vec normal_ordered_virasoro(const Lattice& lat, long n, const Vec& v)
{
    const std::size_t d = lat.rank();
    const long deg = v.max_degree();
    Vec out(v.shift());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t l = 0; l < d; ++l) {
            const Rational g = lat.gram_inverse()[i][l];
            if (g.is_zero()) continue;
            const RatVec a = basis_vector(d, i), b = basis_vector(d, l);
            for (long j = n - deg - 2; j <= deg + 2; ++j) {
                const long jj = n - j;
                Vec term = j < 0 ? heis_act(lat, a, j, heis_act(lat, b, jj, v))
                                 : heis_act(lat, b, jj, heis_act(lat, a, j, v));
                out.axpy(g / Rational(2), term);
            }
        }
    return out;
}

Vec random_state(const Lattice& lat, std::mt19937_64& rng, const CosetShift& shift, int max_deg, int max_coord)
{
    std::uniform_int_distribution<int> deg(0, max_deg), pt(-max_coord, max_coord), coef(-3, 3);
    Vec v(shift);
    for (int n = 0; n < 2; ++n) {
        auto parts = colored_partitions(lat.rank(), deg(rng));
        FockTerm t;
        t.parts = parts[std::uniform_int_distribution<std::size_t>(0, parts.size() - 1)(rng)];
        for (std::size_t i = 0; i < lat.rank(); ++i) t.point.push_back(pt(rng));
        v.add(t, Rational(coef(rng)));
    }
    if (v.is_zero()) v.add(FockTerm({}, IntVec(lat.rank(), 0)), Rational(1));
    return v;
}

} // namespace

TEST(Schur, LowOrderValues)
{
    SchurCache cache;
    EXPECT_EQ(cache.get(0), (SchurCache::Poly{{{}, Rational(1)}}));
    EXPECT_EQ(cache.get(1), (SchurCache::Poly{{{1}, Rational(1)}}));
    EXPECT_EQ(cache.get(2), (SchurCache::Poly{{{2}, Rational(1, 2)}, {{1, 1}, Rational(1, 2)}}));
    EXPECT_THROW(cache.get(-1), std::invalid_argument);
}

TEST(Schur, MatchesPartitionFormula)
{
    SchurCache cache;
    for (int j = 0; j <= 10; ++j) EXPECT_EQ(cache.get(j), brute_force_schur(j)) << "j=" << j;
}

TEST(Schur, OperatorAgreesWithCreationExponential)
{
    Lattice lat(IntMatrix{{-2, 1}, {1, -4}});
    ModeEngine eng(lat);
    SchurCache cache;
    for (const IntVec& beta : {IntVec{1, 0}, IntVec{2, -1}, IntVec{0, 3}})
        for (int j = 0; j <= 6; ++j)
            EXPECT_EQ(schur_p(cache, j, to_rational(beta), 1).polynomial(), eng.creation_exponential(beta, j));
}

TEST(ModeProduct, HeisenbergPairing)
{
    for (long k : {1, 2, 3}) {
        ModeEngine eng(Lattice::negative_rank1(k));
        Vec a = Vec::monomial(eng.lattice(), {{0, 1}}, {0});
        EXPECT_EQ(eng.mode_product(a, 1, a), Rational(-2 * k) * Vec::vacuum(eng.lattice()));
        EXPECT_TRUE(eng.mode_product(a, 0, a).is_zero());
        EXPECT_TRUE(eng.mode_product(a, 2, a).is_zero());
    }
}

TEST(ModeProduct, ConformalWeightOfExponentials)
{
    for (long k : {1, 2, 3}) {
        ModeEngine eng(Lattice::negative_rank1(k));
        for (std::int64_t m = -3; m <= 3; ++m) {
            Vec e = Vec::exp(eng.lattice(), {m});
            EXPECT_EQ(eng.mode_product(eng.omega(), 1, e), Rational(-k * m * m) * e);
        }
    }
}

TEST(ModeProduct, TranslationOfF1)
{
    for (long k : {1, 2})
        for (long m : {1, 2, 3}) {
            StandardVectors sv(k, m);
            ModeEngine eng(sv.lattice());
            EXPECT_EQ(translate(eng, sv.f(1)), Rational(5) * sv.g(1) + Rational(m) * sv.g(2));
        }
}

TEST(ModeProduct, VacuumAndCentralCharge)
{
    for (const IntMatrix& g : {IntMatrix{{-2}}, IntMatrix{{-2, 1}, {1, -2}}, IntMatrix{{2, 0}, {0, -2}}}) {
        ModeEngine eng{Lattice(g)};
        Vec one = Vec::vacuum(eng.lattice());
        EXPECT_TRUE(eng.virasoro_mode(-1, one).is_zero());
        EXPECT_EQ(eng.virasoro_mode(2, eng.omega()), (eng.central_charge() / Rational(2)) * one);
        EXPECT_EQ(eng.central_charge(), Rational(static_cast<long>(g.size())));
        EXPECT_TRUE(eng.virasoro_mode(1, eng.omega()).is_zero());
        EXPECT_EQ(eng.virasoro_mode(0, eng.omega()), Rational(2) * eng.omega());
    }
}

TEST(ModeProduct, CreationProperty)
{
    std::mt19937_64 rng(17);
    for (const IntMatrix& g : {IntMatrix{{-2}}, IntMatrix{{-2, 1}, {1, -2}}}) {
        ModeEngine eng{Lattice(g)};
        Vec one = Vec::vacuum(eng.lattice());
        for (int i = 0; i < 25; ++i) {
            Vec u = random_state(eng.lattice(), rng, eng.lattice().zero_shift(), 3, 2);
            EXPECT_EQ(eng.mode_product(u, -1, one), u);
            for (long n = 0; n <= 3; ++n) EXPECT_TRUE(eng.mode_product(u, n, one).is_zero());
            EXPECT_EQ(eng.mode_product(one, -1, u), u);
        }
    }
}

TEST(ModeProduct, VirasoroMatchesNormalOrderedSum)
{
    std::mt19937_64 rng(23);
    for (const IntMatrix& g : {IntMatrix{{-2}}, IntMatrix{{-4}}, IntMatrix{{-2, 1}, {1, -2}}, IntMatrix{{2, 0}, {0, -2}}}) {
        ModeEngine eng{Lattice(g)};
        const Lattice& lat = eng.lattice();
        for (const auto& shift : lat.dual_cosets())
            for (int i = 0; i < 8; ++i) {
                Vec v = random_state(lat, rng, shift, 3, 1);
                for (long n = -2; n <= 3; ++n)
                    EXPECT_EQ(eng.virasoro_mode(n, v), normal_ordered_virasoro(lat, n, v)) << "n=" << n;
            }
    }
}

TEST(ModeProduct, TruncationBoundIsSharpUpperBound)
{
    std::mt19937_64 rng(29);
    ModeEngine eng(Lattice(IntMatrix{{-2, 1}, {1, -2}}));
    for (int i = 0; i < 30; ++i) {
        Vec u = random_state(eng.lattice(), rng, eng.lattice().zero_shift(), 2, 1);
        Vec w = random_state(eng.lattice(), rng, eng.lattice().zero_shift(), 2, 1);
        const long b = eng.truncation_bound(u, w);
        for (long n = b + 1; n <= b + 4; ++n) EXPECT_TRUE(eng.mode_product(u, n, w).is_zero());
    }
}

TEST(ModeProduct, NonIntegralExponentRejected)
{
    // 1/3 is outside the dual lattice, so z^{<β,λ>} has a fractional power
    ModeEngine eng(Lattice::negative_rank1(1));
    Vec w(CosetShift{{Rational(1, 3)}}, FockTerm({}, {0}));
    EXPECT_THROW(eng.exp_mode({1}, 0, w), NonIntegralExponent);
}

TEST(Jacobi, HeisenbergOnExponential)
{
    ModeEngine eng(Lattice::negative_rank1(1));
    Vec a = Vec::monomial(eng.lattice(), {{0, 1}}, {0});
    Vec e = Vec::exp(eng.lattice(), {1});
    EXPECT_TRUE(check_jacobi(eng, a, a, e, 0, 0, -2).holds());
}

TEST(Jacobi, RandomTriplesAcrossCosets)
{
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long> idx(-2, 1);
    for (const IntMatrix& g : {IntMatrix{{-2}}, IntMatrix{{-2, 1}, {1, -2}}, IntMatrix{{2, 0}, {0, -2}}}) {
        ModeEngine eng{Lattice(g)};
        const Lattice& lat = eng.lattice();
        const auto cosets = lat.dual_cosets();
        for (int i = 0; i < 12; ++i) {
            Vec u = random_state(lat, rng, lat.zero_shift(), 2, 1);
            Vec v = random_state(lat, rng, lat.zero_shift(), 2, 1);
            Vec w = random_state(lat, rng, cosets[static_cast<std::size_t>(i) % cosets.size()], 2, 1);
            const long p = idx(rng), q = idx(rng), r = idx(rng);
            auto sides = check_jacobi(eng, u, v, w, p, q, r);
            EXPECT_TRUE(sides.holds()) << "p=" << p << " q=" << q << " r=" << r;
        }
    }
}

TEST(Jacobi, FaultIsDetected)
{
    ModeEngine eng(Lattice::negative_rank1(1));
    eng.inject_fault(true);
    Vec a = Vec::monomial(eng.lattice(), {{0, 1}}, {0});
    Vec e = Vec::exp(eng.lattice(), {1});
    Vec b = Vec::monomial(eng.lattice(), {{0, 2}}, {-1});
    int broken = 0;
    for (long p = -2; p <= 1; ++p)
        for (long r = -2; r <= 1; ++r)
            if (!check_jacobi(eng, a, b, e, p, 0, r).holds()) ++broken;
    EXPECT_GT(broken, 0);
}

TEST(Memo, CachedAndUncachedAgree)
{
    ModeEngine cached(Lattice::negative_rank1(2)), plain(Lattice::negative_rank1(2));
    plain.set_memoize(false);
    StandardVectors sv(2, 1);
    for (long n = -3; n <= 2; ++n) {
        Vec a = cached.mode_product(sv.g(4), n, sv.f(2));
        Vec b = plain.mode_product(sv.g(4), n, sv.f(2));
        EXPECT_EQ(a, b);
    }
    EXPECT_GT(cached.cache_size(), 0u);
    cached.clear_cache();
    EXPECT_EQ(cached.cache_size(), 0u);
}

TEST(Tensor, SmallExamples)
{
    Lattice l1 = Lattice::negative_rank1(1), l2 = Lattice::negative_rank1(2);
    Vec a = Vec::exp(l2, {1});
    Vec b = Vec::monomial(l2, {{0, 1}}, {-1});
    Vec u = Vec::monomial(l1, {{0, 2}}, {1});
    EXPECT_TRUE(tensor_identity_check(l1, l2, a, b, u).holds());
    Vec a2 = Vec::monomial(l2, {{0, 1}, {0, 1}}, {0});
    EXPECT_TRUE(tensor_identity_check(l1, l2, a2, Vec::exp(l2, {2}), Vec::exp(l1, {-1})).holds());
}
