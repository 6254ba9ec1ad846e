#pragma once

// C2 certificates for E^{n-1} and the vacuum of V_L^+, L = Zα with
// <α,α> = -2k, assembled along the chain
//   E_{-2kn}α(-1)F^n  ->  E^{n-1},    E_{-2k-1}E  ->  1.
// Every step is an exact identity between (u)_{-2}v products; the final
// certificate is replayed with a fresh engine before it is returned.

#include "voalab/c2lab.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace voalab {

using Combination = std::vector<CertificateEntry>;

inline void append(Combination& dst, const Combination& src, const Rational& scale)
{
    if (scale.is_zero()) return;
    for (const auto& e : src) dst.push_back(CertificateEntry{e.u, e.v, e.coeff * scale});
}

/// Merges entries sharing the left factor (up to scale): Σ c_i u_{-2}v_i = u_{-2}(Σ c_i v_i).
inline Combination compact(const Combination& comb)
{
    std::map<std::string, std::pair<Vec, Vec>> groups;
    std::vector<std::string> order;
    for (const auto& e : comb) {
        if (e.u.is_zero() || e.v.is_zero() || e.coeff.is_zero()) continue;
        const Rational lead = e.u.terms().begin()->second;
        Vec u = lead.inverse() * e.u;
        std::string key = to_string(u);
        auto it = groups.find(key);
        if (it == groups.end()) {
            it = groups.emplace(key, std::make_pair(u, Vec(e.v.shift()))).first;
            order.push_back(key);
        }
        it->second.second.axpy(e.coeff * lead, e.v);
    }
    Combination out;
    for (const auto& key : order) {
        auto& [u, v] = groups.at(key);
        if (!v.is_zero()) out.push_back(CertificateEntry{u, v, Rational(1)});
    }
    return out;
}

/// Certificate of u_n x from one of x, for n <= 0:
/// u_n(a_{-2}b) = a_{-2}(u_n b) + Σ_{i≥0} C(n,i) (u_i a)_{n-2-i} b,
/// with x_{-j}b = (L(-1)^{j-2}x)_{-2}b / (j-1)!.
inline Combination apply_mode(ModeEngine& eng, const Vec& u, long n, const Combination& comb)
{
    if (n > 0) throw std::invalid_argument("C2 is only stable under u_n for n <= 0");
    Combination out;
    for (const auto& e : comb) {
        Vec ub = eng.mode_product(u, n, e.v);
        if (!ub.is_zero()) out.push_back(CertificateEntry{e.u, std::move(ub), e.coeff});
        const long top = eng.truncation_bound(u, e.u);
        for (long i = 0; i <= top; ++i) {
            Vec ua = eng.mode_product(u, i, e.u);
            if (ua.is_zero()) continue;
            const long shift = i - n; // (u_i a)_{-2-shift}
            Vec x = translate(eng, ua, static_cast<int>(shift));
            x *= Rational(Integer(1), factorial(static_cast<unsigned long>(shift + 1)));
            out.push_back(CertificateEntry{std::move(x), e.v, e.coeff * binomial(n, i)});
        }
    }
    return out;
}

/// θ-fixed vectors spanning the Fock-degree-d part of V_L^+ at points ±m
/// (m = 0 gives M(1)^+).
class PlusComponents {
public:
    explicit PlusComponents(const Lattice& lat) : lat_(lat) {}

    const std::vector<Vec>& operator()(long m, int degree)
    {
        auto key = std::make_pair(m, degree);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        BasisConstraints cons{{IntVec{m}}, degree, degree};
        return cache_[key] = projected_basis(lat_, graded_basis(lat_, cons), 1);
    }

private:
    const Lattice& lat_;
    std::map<std::pair<long, int>, std::vector<Vec>> cache_;
};

/**
 * Writes target ∈ V_L^+ (supported on points ±m, one Fock degree d) through
 * products that stay on ±m: u_{-2}v and v_{-2}u with u ∈ M(1)^+ of Fock
 * degree <= max_heis and v ∈ V_L^+(m).
 */
inline std::optional<Combination> point_preserving_certificate(ModeEngine& eng, PlusComponents& comps,
                                                               const Vec& target, long m,
                                                               int max_heis = std::numeric_limits<int>::max())
{
    if (target.is_zero()) return Combination{};
    const int d = target.terms().begin()->first.degree();
    for (const auto& [t, c] : target.terms())
        if (t.degree() != d || (t.point[0] != m && t.point[0] != -m))
            throw std::invalid_argument("target must sit on one (point, degree) component");

    std::vector<Vec> products;
    std::vector<std::pair<const Vec*, const Vec*>> pairs;
    auto add = [&](const Vec& u, const Vec& v) {
        Vec p = eng.mode_product(u, -2, v);
        if (p.is_zero()) return;
        products.push_back(std::move(p));
        pairs.emplace_back(&u, &v);
    };
    for (int a = 0; a <= std::min(d - 1, max_heis); ++a) {
        const auto& heis = comps(0, a);
        const auto& charged = comps(m, d - 1 - a);
        for (const auto& h : heis)
            for (const auto& v : charged) {
                if (a > 0) add(h, v);
                add(v, h);
            }
    }
    auto coeffs = SpanBasis(products).member(target);
    if (!coeffs) return std::nullopt;
    Combination out;
    for (std::size_t i = 0; i < coeffs->size(); ++i)
        if (!(*coeffs)[i].is_zero()) out.push_back(CertificateEntry{*pairs[i].first, *pairs[i].second, (*coeffs)[i]});
    return out;
}

class ReductionRoute {
public:
    explicit ReductionRoute(long k) : sv_(k, 1), eng_(sv_.lattice()), comps_(sv_.lattice()) {}

    const StandardVectors& vectors() const { return sv_; }

    /// Certificate of E^{n-1} from E_{-2kn}α(-1)F^n, n >= 2.
    std::optional<Combination> lowering(long n)
    {
        const Witness& w = witness(n);
        auto tail = by_component(w.rest, n + 1);
        if (!tail) return std::nullopt;
        // E^{n-1} = (x_{-2}y - rest) / (-2k)
        const long k = sv_.k();
        Combination out{CertificateEntry{w.x, w.y, Rational(-1, 2 * k)}};
        append(out, *tail, Rational(1, 2 * k));
        return out;
    }

    /// Certificate of the vacuum from E_{-2k-1}E.
    std::optional<Combination> vacuum()
    {
        const long k = sv_.k();
        const Vec e = sv_.E(1);
        Vec x = translate(eng_, e, static_cast<int>(2 * k - 1));
        x *= Rational(Integer(1), factorial(static_cast<unsigned long>(2 * k)));
        Vec rest = eng_.mode_product(e, -2 * k - 1, e);
        rest.axpy(Rational(-2), sv_.vacuum());
        auto tail = by_component(rest, 2);
        if (!tail) tail = raised(rest, 2);
        if (!tail) return std::nullopt;
        // 1 = (x_{-2}E - rest) / 2
        Combination out{CertificateEntry{x, e, Rational(1, 2)}};
        append(out, *tail, Rational(-1, 2));
        return out;
    }

private:
    /// E_{-2kn}α(-1)F^n = x_{-2}y = rest - 2k E^{n-1}, rest supported on ±(n+1).
    struct Witness {
        Vec x, y, rest;
    };

    const Witness& witness(long n)
    {
        if (auto it = witnesses_.find(n); it != witnesses_.end()) return it->second;
        const long j = 2 * sv_.k() * n;
        Witness w;
        w.y = ModeEngine::create(0, 1, sv_.F(n));
        w.x = translate(eng_, sv_.E(1), static_cast<int>(j - 2));
        w.x *= Rational(Integer(1), factorial(static_cast<unsigned long>(j - 1)));
        w.rest = eng_.mode_product(sv_.E(1), -j, w.y);
        w.rest.axpy(Rational(2 * sv_.k()), sv_.E(n - 1));
        return witnesses_.emplace(n, std::move(w)).first->second;
    }

    /// Splits `v` (supported on ±m) by Fock degree and certifies each piece.
    std::optional<Combination> by_component(const Vec& v, long m)
    {
        std::map<int, Vec> pieces;
        for (const auto& [t, c] : v.terms()) {
            if (t.point[0] != m && t.point[0] != -m) return std::nullopt;
            pieces.try_emplace(t.degree(), v.shift()).first->second.add(t, c);
        }
        Combination out;
        for (const auto& [d, piece] : pieces) {
            // small Heisenberg factors usually suffice and are much cheaper
            auto part = point_preserving_certificate(eng_, comps_, piece, m, 4);
            if (!part) part = point_preserving_certificate(eng_, comps_, piece, m);
            if (!part) return std::nullopt;
            append(out, *part, Rational(1));
        }
        return out;
    }

    /**
     * Certifies v ∈ V_L^+(m) by writing it as Σ c_i W_i E^m for Virasoro words
     * W_i, then substituting E^m = (x_{-2}y - rest)/(-2k): the words act on the
     * single product x_{-2}y through apply_mode, and Σ c_i W_i rest stays on
     * ±(m+2) where it is certified directly.
     */
    std::optional<Combination> raised(const Vec& v, long m)
    {
        const Witness& w = witness(m + 1);
        std::map<int, Vec> pieces;
        for (const auto& [t, c] : v.terms()) pieces.try_emplace(t.degree(), v.shift()).first->second.add(t, c);
        const Vec em = sv_.E(m);
        const Vec& om = eng_.omega();
        const Rational scale(-1, 2 * sv_.k());

        Combination out;
        for (const auto& [d, piece] : pieces) {
            auto words = bounded_partitions(d);
            auto act = [&](const std::vector<int>& word, Vec x) {
                for (auto it = word.rbegin(); it != word.rend(); ++it) x = eng_.virasoro_mode(-*it, x);
                return x;
            };
            std::vector<Vec> images;
            for (const auto& word : words) images.push_back(act(word, em));
            auto coeffs = SpanBasis(images).member(piece);
            if (!coeffs) return std::nullopt;
            Vec moved_rest(w.rest.shift());
            for (std::size_t i = 0; i < coeffs->size(); ++i) {
                const Rational& c = (*coeffs)[i];
                if (c.is_zero()) continue;
                Combination head{CertificateEntry{w.x, w.y, Rational(1)}};
                for (auto it = words[i].rbegin(); it != words[i].rend(); ++it) head = apply_mode(eng_, om, 1 - *it, head);
                append(out, head, c * scale);
                moved_rest.axpy(c, act(words[i], w.rest));
            }
            auto tail = by_component(moved_rest, m + 2);
            if (!tail) return std::nullopt;
            append(out, *tail, -scale);
        }
        return out;
    }

    /// Partitions of d, fewest parts first.
    static std::vector<std::vector<int>> bounded_partitions(int d)
    {
        std::vector<std::vector<int>> out;
        std::vector<int> cur;
        std::function<void(int, int)> rec = [&](int left, int largest) {
            if (left == 0) {
                out.push_back(cur);
                return;
            }
            for (int p = std::min(left, largest); p >= 1; --p) {
                cur.push_back(p);
                rec(left - p, p);
                cur.pop_back();
            }
        };
        rec(d, d);
        std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
        return out;
    }

    StandardVectors sv_;
    ModeEngine eng_;
    PlusComponents comps_;
    std::map<long, Witness> witnesses_;
};

/// Certificate for E^{n-1} (n >= 2) or, with n = 0, for the vacuum.
inline std::optional<SpanCertificate> reduction_certificate(long k, long n)
{
    ReductionRoute route(k);
    const auto& sv = route.vectors();
    auto comb = n == 0 ? route.vacuum() : route.lowering(n);
    if (!comb) return std::nullopt;
    SpanCertificate cert;
    cert.target = n == 0 ? sv.vacuum() : sv.E(n - 1);
    cert.combination = compact(*comb);
    if (!(replay(sv.lattice(), cert) == cert.target)) throw EngineInconsistency("reduction certificate failed to replay");
    return cert;
}

} // namespace voalab
