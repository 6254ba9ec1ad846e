#pragma once

// Mode products u_n w in lattice vertex algebras V_L acting on V_{L+λ}.
//
// The vertex operator of e^β is expanded term by term,
//   Y(e^β, z) = E^-(-β, z) E^+(-β, z) e_β z^β,
// and general states are reduced to it by peeling Heisenberg creation
// operators with the iterate formula
//   (γ(-n)x)_m w = Σ_{i≥0} C(n+i-1, i) [γ(-n-i) x_{m+i} w - (-1)^n x_{m-n-i} γ(i) w].
// Every sum is finite, so results are exact with no truncation parameter.

#include "voalab/fock.hpp"
#include "voalab/lattice.hpp"
#include "voalab/scalars.hpp"

#include <climits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace voalab {

struct PartsLess {
    bool operator()(const Parts& a, const Parts& b) const { return parts_less(a, b); }
};

/// Polynomial in creation operators: canonical part list -> coefficient.
using CreationPoly = std::map<Parts, Rational, PartsLess>;

/// Multiplies every term of v by the creation polynomial `poly`.
inline Vec apply_creation(const CreationPoly& poly, const Vec& v)
{
    Vec out(v.shift());
    for (const auto& [t, c] : v.terms())
        for (const auto& [mono, a] : poly) out.add(FockTerm{merge_parts(mono, t.parts), t.point}, a * c);
    return out;
}

/**
 * Polynomials p_j(x_1, x_2, ...) defined by
 *   exp(Σ_{n≥1} x_n z^n / n) = Σ_j p_j z^j,
 * stored over abstract variables as maps partition -> coefficient, where a
 * partition (descending list of n) stands for the monomial Π x_n.
 */
class SchurCache {
public:
    using Partition = std::vector<int>;
    using Poly = std::map<Partition, Rational>;

    SchurCache() { table_.push_back(Poly{{Partition{}, Rational(1)}}); }

    const Poly& get(int j)
    {
        if (j < 0) throw std::invalid_argument("negative Schur index");
        while (static_cast<int>(table_.size()) <= j) extend();
        return table_[static_cast<std::size_t>(j)];
    }

private:
    // j p_j = Σ_{n=1}^{j} x_n p_{j-n}
    void extend()
    {
        const int j = static_cast<int>(table_.size());
        Poly next;
        for (int n = 1; n <= j; ++n)
            for (const auto& [part, c] : table_[static_cast<std::size_t>(j - n)]) {
                Partition p = part;
                p.insert(std::upper_bound(p.begin(), p.end(), n, std::greater<int>()), n);
                auto [it, inserted] = next.try_emplace(std::move(p), c);
                if (!inserted) it->second += c;
            }
        for (auto& [p, c] : next) c /= Rational(j);
        table_.push_back(std::move(next));
    }

    std::vector<Poly> table_;
};

/// p_j with x_n ↦ sign·h(-n), realised as a creation polynomial.
class SchurOperator {
public:
    SchurOperator(SchurCache& cache, int j, const RatVec& h, int sign)
    {
        for (const auto& [partition, c] : cache.get(j)) {
            CreationPoly acc{{Parts{}, c}};
            for (int n : partition) {
                CreationPoly next;
                for (const auto& [mono, a] : acc)
                    for (std::size_t i = 0; i < h.size(); ++i) {
                        if (h[i].is_zero()) continue;
                        Parts p = merge_parts(mono, Parts{Part{static_cast<int>(i), n}});
                        Rational coef = a * h[i] * Rational(sign);
                        auto [it, inserted] = next.try_emplace(std::move(p), coef);
                        if (!inserted) it->second += coef;
                    }
                acc = std::move(next);
            }
            for (auto& [mono, a] : acc) {
                if (a.is_zero()) continue;
                auto [it, inserted] = poly_.try_emplace(mono, a);
                if (!inserted) it->second += a;
            }
        }
        std::erase_if(poly_, [](const auto& kv) { return kv.second.is_zero(); });
    }

    Vec operator()(const Vec& v) const { return apply_creation(poly_, v); }
    const CreationPoly& polynomial() const { return poly_; }

private:
    CreationPoly poly_;
};

inline SchurOperator schur_p(SchurCache& cache, int j, const RatVec& h, int sign)
{
    return SchurOperator(cache, j, h, sign);
}

/// Raised when z^{<β,γ+λ>} would have a non-integral exponent.
class NonIntegralExponent : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/**
 * Exact mode-product engine for a fixed lattice. Holds memo tables, so an
 * instance is not shared between threads; create one per worker.
 */
class ModeEngine {
public:
    explicit ModeEngine(Lattice lat) : lat_(std::move(lat)) { build_omega(); }

    const Lattice& lattice() const { return lat_; }
    const Vec& omega() const { return omega_; }
    /// Central charge asserted for V_L: the rank.
    Rational central_charge() const { return Rational(static_cast<long>(lat_.rank())); }

    void set_memoize(bool on) { memoize_ = on; }
    /// Negative control: perturbs the zero-mode term of the peeling recursion.
    void inject_fault(bool on)
    {
        fault_ = on;
        memo_.clear();
    }
    void clear_cache()
    {
        memo_.clear();
        exp_cache_.clear();
    }
    std::size_t cache_size() const { return memo_.size(); }

    /// Coefficient of z^{-n-1} in Y(e^β, z) w.
    Vec exp_mode(const IntVec& beta, long n, const Vec& w)
    {
        check_point(beta);
        Vec out(w.shift());
        for (const auto& [t, c] : w.terms()) out.axpy(c, exp_term(beta, n, t, w.shift()));
        return out;
    }

    /// u_n w for u ∈ V_L and w ∈ V_{L+λ}.
    Vec mode_product(const Vec& u, long n, const Vec& w)
    {
        if (!u.is_zero() && !u.shift().is_zero()) throw std::invalid_argument("left operand must lie in V_L");
        Vec out(w.shift());
        for (const auto& [ut, uc] : u.terms())
            for (const auto& [wt, wc] : w.terms()) out.axpy(uc * wc, term_product(ut, n, wt, w.shift()));
        return out;
    }

    /// L(n) v = ω_{n+1} v.
    Vec virasoro_mode(long n, const Vec& v) { return mode_product(omega_, n + 1, v); }

    /// Largest n for which u_n w can be nonzero (LONG_MIN when either is zero).
    long truncation_bound(const Vec& u, const Vec& w) const
    {
        long best = LONG_MIN;
        for (const auto& [ut, uc] : u.terms())
            for (const auto& [wt, wc] : w.terms()) best = std::max(best, term_bound(ut, wt, w.shift()));
        return best;
    }

    /// Heisenberg creation α_dir(-mode) applied to v.
    static Vec create(int dir, int mode, const Vec& v)
    {
        Vec out(v.shift());
        const Part np{dir, mode};
        for (const auto& [t, c] : v.terms()) {
            FockTerm nt;
            nt.point = t.point;
            nt.parts = t.parts;
            nt.parts.insert(std::upper_bound(nt.parts.begin(), nt.parts.end(), np, part_before), np);
            out.add(nt, c);
        }
        return out;
    }

    /// p_j(β) computed directly in creation space: j p_j = Σ_n β(-n) p_{j-n}.
    const CreationPoly& creation_exponential(const IntVec& beta, int j)
    {
        auto& table = exp_cache_[beta];
        if (table.empty()) table.push_back(CreationPoly{{Parts{}, Rational(1)}});
        while (static_cast<int>(table.size()) <= j) {
            const int jj = static_cast<int>(table.size());
            CreationPoly next;
            for (int n = 1; n <= jj; ++n)
                for (const auto& [mono, a] : table[static_cast<std::size_t>(jj - n)])
                    for (std::size_t i = 0; i < beta.size(); ++i) {
                        if (beta[i] == 0) continue;
                        Parts p = merge_parts(mono, Parts{Part{static_cast<int>(i), n}});
                        Rational coef = a * Rational(static_cast<long>(beta[i]));
                        auto [it, inserted] = next.try_emplace(std::move(p), coef);
                        if (!inserted) it->second += coef;
                    }
            const Rational inv(1, jj);
            std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
            for (auto& [mono, a] : next) a *= inv;
            table.push_back(std::move(next));
        }
        return table[static_cast<std::size_t>(j)];
    }

private:
    struct MemoKey {
        FockTerm u;
        long n;
        FockTerm w;
        RatVec shift;
        friend bool operator<(const MemoKey& a, const MemoKey& b)
        {
            if (a.n != b.n) return a.n < b.n;
            if (!(a.u == b.u)) return a.u < b.u;
            if (!(a.w == b.w)) return a.w < b.w;
            return a.shift < b.shift;
        }
    };

    void check_point(const IntVec& p) const
    {
        if (p.size() != lat_.rank()) throw DimensionMismatch("lattice point has wrong length");
    }

    void build_omega()
    {
        const std::size_t d = lat_.rank();
        const auto& ginv = lat_.gram_inverse();
        omega_ = Vec(lat_.zero_shift());
        const IntVec origin(d, 0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) {
                Rational c = i == j ? ginv[i][i] / Rational(2) : ginv[i][j];
                Parts p{Part{static_cast<int>(i), 1}, Part{static_cast<int>(j), 1}};
                omega_.add(FockTerm(std::move(p), origin), c);
            }
    }

    /// <β, γ+λ> as an integer.
    long z_exponent(const IntVec& beta, const FockTerm& w, const CosetShift& shift) const
    {
        RatVec g(lat_.rank());
        for (std::size_t i = 0; i < lat_.rank(); ++i) g[i] = Rational(static_cast<long>(w.point[i])) + shift.coords[i];
        Rational e = lat_.pairing(to_rational(beta), g);
        if (!e.is_integer())
            throw NonIntegralExponent("<beta, gamma + lambda> = " + e.to_string() + " is not an integer");
        return e.to_long();
    }

    long term_bound(const FockTerm& u, const FockTerm& w, const CosetShift& shift) const
    {
        return u.degree() + w.degree() - z_exponent(u.point, w, shift) - 1;
    }

    Vec exp_term(const IntVec& beta, long n, const FockTerm& w, const CosetShift& shift)
    {
        const long p0 = z_exponent(beta, w, shift);
        const IntVec pair_beta = lat_.dual_coords(beta); // <β, α_i>

        // E^+ turns each α_i(-j) into α_i(-j) - <β, α_i> z^{-j}.
        std::map<std::pair<long, Parts>, Rational, StateLess> states;
        states.emplace(std::make_pair(0L, Parts{}), Rational(1));
        for (const auto& part : w.parts) {
            std::map<std::pair<long, Parts>, Rational, StateLess> next;
            const long cb = pair_beta[static_cast<std::size_t>(part.dir)];
            for (const auto& [key, c] : states) {
                Parts kept = key.second;
                kept.push_back(part);
                accumulate(next, {key.first, std::move(kept)}, c);
                if (cb != 0) accumulate(next, {key.first + part.mode, key.second}, c * Rational(-cb));
            }
            states = std::move(next);
        }

        const int sign = lat_.epsilon(beta, w.point);
        IntVec target(beta.size());
        for (std::size_t i = 0; i < beta.size(); ++i) target[i] = beta[i] + w.point[i];

        Vec out(shift);
        for (const auto& [key, c] : states) {
            if (c.is_zero()) continue;
            const long j = -n - 1 - (p0 - key.first);
            if (j < 0) continue;
            for (const auto& [mono, a] : creation_exponential(beta, static_cast<int>(j)))
                out.add(FockTerm{merge_parts(mono, key.second), target}, Rational(sign) * a * c);
        }
        return out;
    }

    Vec term_product(const FockTerm& u, long n, const FockTerm& w, const CosetShift& shift)
    {
        if (u.parts.empty()) return exp_term(u.point, n, w, shift);
        if (n > term_bound(u, w, shift)) return Vec(shift);

        MemoKey key{u, n, w, shift.coords};
        if (memoize_) {
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }

        const Part lead = u.parts.front();
        const int n1 = lead.mode;
        FockTerm x;
        x.point = u.point;
        x.parts.assign(u.parts.begin() + 1, u.parts.end());

        Vec out(shift);
        // γ(-n1-i) x_{n+i} w
        const long bound = term_bound(x, w, shift);
        for (long i = 0; n + i <= bound; ++i) {
            Vec inner = term_product(x, n + i, w, shift);
            if (inner.is_zero()) continue;
            out.axpy(binomial(n1 + i - 1, i), create(lead.dir, n1 + static_cast<int>(i), inner));
        }
        // -(-1)^{n1} x_{n-n1-i} γ(i) w
        const Rational outer_sign(n1 % 2 == 0 ? -1 : 1);
        {
            RatVec g(lat_.rank());
            for (std::size_t i = 0; i < lat_.rank(); ++i)
                g[i] = Rational(static_cast<long>(w.point[i])) + shift.coords[i];
            Rational zero_mode = lat_.dual_coords(g)[static_cast<std::size_t>(lead.dir)];
            if (fault_) zero_mode += Rational(1);
            if (!zero_mode.is_zero()) out.axpy(outer_sign * zero_mode, term_product(x, n - n1, w, shift));
        }
        int max_mode = w.parts.empty() ? 0 : w.parts.front().mode;
        for (int i = 1; i <= max_mode; ++i) {
            Vec lowered(shift);
            for (std::size_t idx = 0; idx < w.parts.size(); ++idx) {
                const Part& p = w.parts[idx];
                if (p.mode != i) continue;
                const auto g = lat_.gram_entry(static_cast<std::size_t>(lead.dir), static_cast<std::size_t>(p.dir));
                if (g == 0) continue;
                FockTerm nt;
                nt.point = w.point;
                nt.parts = w.parts;
                nt.parts.erase(nt.parts.begin() + static_cast<long>(idx));
                lowered.add(nt, Rational(static_cast<long>(g) * i));
            }
            if (lowered.is_zero()) continue;
            const Rational c = outer_sign * binomial(n1 + i - 1, i);
            for (const auto& [t, a] : lowered.terms()) out.axpy(c * a, term_product(x, n - n1 - i, t, shift));
        }

        if (memoize_) memo_.emplace(std::move(key), out);
        return out;
    }

    struct StateLess {
        bool operator()(const std::pair<long, Parts>& a, const std::pair<long, Parts>& b) const
        {
            if (a.first != b.first) return a.first < b.first;
            return parts_less(a.second, b.second);
        }
    };

    static void accumulate(std::map<std::pair<long, Parts>, Rational, StateLess>& m, std::pair<long, Parts> key,
                           const Rational& c)
    {
        auto [it, inserted] = m.try_emplace(std::move(key), c);
        if (!inserted) it->second += c;
    }

    Lattice lat_;
    Vec omega_;
    bool memoize_ = true;
    bool fault_ = false;
    std::map<MemoKey, Vec> memo_;
    std::map<IntVec, std::vector<CreationPoly>> exp_cache_;
};

/// L(-1)^count v.
inline Vec translate(ModeEngine& eng, const Vec& v, int count = 1)
{
    Vec out = v;
    for (int i = 0; i < count; ++i) out = eng.virasoro_mode(-1, out);
    return out;
}

struct JacobiSides {
    Vec lhs;
    Vec rhs;
    bool holds() const { return lhs == rhs; }
};

/**
 * One coefficient of the Borcherds identity:
 *   Σ_i C(p,i) (u_{r+i} v)_{p+q-i} w
 *     = Σ_i (-1)^i C(r,i) [u_{p+r-i} v_{q+i} w - (-1)^r v_{q+r-i} u_{p+i} w].
 * The left side goes through iterates, the right side through compositions.
 */
inline JacobiSides check_jacobi(ModeEngine& eng, const Vec& u, const Vec& v, const Vec& w, long p, long q, long r)
{
    JacobiSides out{Vec(w.shift()), Vec(w.shift())};

    const long uv = eng.truncation_bound(u, v);
    if (uv != LONG_MIN)
        for (long i = 0; r + i <= uv; ++i) {
            if (p >= 0 && i > p) break;
            Rational c = binomial(p, i);
            if (c.is_zero()) continue;
            Vec iterate = eng.mode_product(u, r + i, v);
            out.lhs.axpy(c, eng.mode_product(iterate, p + q - i, w));
        }

    const long vw = eng.truncation_bound(v, w);
    if (vw != LONG_MIN)
        for (long i = 0; q + i <= vw; ++i) {
            if (r >= 0 && i > r) break;
            Rational c = binomial(r, i) * Rational(i % 2 == 0 ? 1 : -1);
            Vec inner = eng.mode_product(v, q + i, w);
            out.rhs.axpy(c, eng.mode_product(u, p + r - i, inner));
        }
    const long uw = eng.truncation_bound(u, w);
    if (uw != LONG_MIN) {
        const Rational rsign(r % 2 == 0 ? 1 : -1);
        for (long i = 0; p + i <= uw; ++i) {
            if (r >= 0 && i > r) break;
            Rational c = binomial(r, i) * Rational(i % 2 == 0 ? 1 : -1);
            Vec inner = eng.mode_product(u, p + i, w);
            out.rhs.axpy(-rsign * c, eng.mode_product(v, q + r - i, inner));
        }
    }
    return out;
}

/// Orthogonal sum L1 ⊕ L2 with the block-diagonal Gram matrix.
inline Lattice orthogonal_sum(const Lattice& a, const Lattice& b)
{
    const std::size_t da = a.rank(), db = b.rank();
    IntMatrix g(da + db, IntVec(da + db, 0));
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) g[i][j] = a.gram()[i][j];
    for (std::size_t i = 0; i < db; ++i)
        for (std::size_t j = 0; j < db; ++j) g[da + i][da + j] = b.gram()[i][j];
    return Lattice(std::move(g));
}

/// Embeds a zero-shift vector of a summand into the orthogonal sum; `offset`
/// is the first coordinate of the summand and `total` the full rank.
inline Vec embed(const Vec& v, std::size_t offset, std::size_t total)
{
    Vec out(CosetShift{RatVec(total)});
    for (const auto& [t, c] : v.terms()) {
        FockTerm nt;
        nt.point.assign(total, 0);
        for (std::size_t i = 0; i < t.point.size(); ++i) nt.point[offset + i] = t.point[i];
        for (const auto& p : t.parts) nt.parts.push_back(Part{p.dir + static_cast<int>(offset), p.mode});
        std::sort(nt.parts.begin(), nt.parts.end(), part_before);
        out.add(nt, c);
    }
    return out;
}

/// x ⊗ y inside V_{L1 ⊕ L2} for embedded factors with disjoint support.
inline Vec tensor(const Vec& x, const Vec& y)
{
    Vec out(x.shift());
    for (const auto& [tx, cx] : x.terms())
        for (const auto& [ty, cy] : y.terms()) {
            FockTerm t;
            t.parts = merge_parts(tx.parts, ty.parts);
            t.point.resize(tx.point.size());
            for (std::size_t i = 0; i < t.point.size(); ++i) t.point[i] = tx.point[i] + ty.point[i];
            out.add(t, cx * cy);
        }
    return out;
}

struct TensorCheck {
    Vec lhs; // (ι2 a)_{-2} (ι1 u ⊗ ι2 b), computed in V_{L1⊕L2}
    Vec rhs; // ι1 u ⊗ ι2 (a_{-2} b), computed in V_{L2}
    bool holds() const { return lhs == rhs; }
};

/// Checks (ι2 a)_{-2}(ι1 u ⊗ ι2 b) = ι1 u ⊗ ι2(a_{-2} b) for a, b ∈ V_{L2}, u ∈ V_{L1}.
inline TensorCheck tensor_identity_check(const Lattice& l1, const Lattice& l2, const Vec& a, const Vec& b,
                                         const Vec& u)
{
    const std::size_t total = l1.rank() + l2.rank();
    ModeEngine big(orthogonal_sum(l1, l2));
    ModeEngine small(l2);
    Vec ia = embed(a, l1.rank(), total);
    Vec ib = embed(b, l1.rank(), total);
    Vec iu = embed(u, 0, total);
    TensorCheck out;
    out.lhs = big.mode_product(ia, -2, tensor(iu, ib));
    out.rhs = tensor(iu, embed(small.mode_product(a, -2, b), l1.rank(), total));
    return out;
}

} // namespace voalab
