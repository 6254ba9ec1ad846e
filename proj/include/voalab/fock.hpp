#pragma once

// State spaces V_{L+λ} = M(1) ⊗ C[L+λ]: canonical monomials, sparse rational
// vectors over them, the Heisenberg action and the weight grading.

#include "voalab/lattice.hpp"
#include "voalab/scalars.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace voalab {

/// One creation operator α_dir(-mode), mode >= 1. Directions are 0-based
/// internally and 1-based in JSON.
struct Part {
    int dir = 0;
    int mode = 1;
    friend bool operator==(const Part&, const Part&) = default;
};

/// Canonical order: mode descending, then direction ascending.
inline bool part_before(const Part& a, const Part& b)
{
    return a.mode != b.mode ? a.mode > b.mode : a.dir < b.dir;
}

using Parts = std::vector<Part>;

inline bool parts_less(const Parts& a, const Parts& b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const Part& x, const Part& y) {
        return x.mode != y.mode ? x.mode < y.mode : x.dir < y.dir;
    });
}

inline Parts merge_parts(const Parts& a, const Parts& b)
{
    Parts out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), part_before);
    return out;
}

inline int fock_degree(const Parts& p)
{
    int d = 0;
    for (const auto& x : p) d += x.mode;
    return d;
}

/// Basis monomial α_{i1}(-n1)...α_{ir}(-nr) ⊗ e^{point+λ}; λ lives on the Vec.
struct FockTerm {
    Parts parts;
    IntVec point;

    FockTerm() = default;
    FockTerm(Parts p, IntVec pt) : parts(std::move(p)), point(std::move(pt))
    {
        std::sort(parts.begin(), parts.end(), part_before);
    }

    int degree() const { return fock_degree(parts); }

    bool is_canonical() const
    {
        for (const auto& p : parts)
            if (p.mode < 1 || p.dir < 0) return false;
        return std::is_sorted(parts.begin(), parts.end(), part_before);
    }

    friend bool operator==(const FockTerm&, const FockTerm&) = default;
    friend bool operator<(const FockTerm& a, const FockTerm& b)
    {
        if (a.point != b.point) return a.point < b.point;
        return parts_less(a.parts, b.parts);
    }
};

/// Weight Σ n_i + <γ+λ, γ+λ>/2 of a monomial in V_{L+λ}.
inline Rational weight(const Lattice& lat, const FockTerm& t, const CosetShift& shift)
{
    RatVec g(lat.rank());
    for (std::size_t i = 0; i < lat.rank(); ++i) g[i] = Rational(static_cast<long>(t.point[i])) + shift.coords[i];
    return Rational(t.degree()) + lat.pairing(g, g) / Rational(2);
}

inline Rational weight(const Lattice& lat, const FockTerm& t)
{
    return weight(lat, t, lat.zero_shift());
}

class CosetMismatch : public std::invalid_argument {
public:
    CosetMismatch() : std::invalid_argument("vectors live in different cosets of L") {}
};

/**
 * Finite rational combination of FockTerms, all in the same coset L+λ.
 * Terms are stored in a std::map so iteration (and JSON output) is
 * deterministic; zero coefficients are never stored.
 */
class Vec {
public:
    using Map = std::map<FockTerm, Rational>;

    Vec() = default;
    explicit Vec(CosetShift shift) : shift_(std::move(shift)) {}
    Vec(CosetShift shift, const FockTerm& t, const Rational& c = Rational(1)) : shift_(std::move(shift))
    {
        add(t, c);
    }

    static Vec vacuum(const Lattice& lat) { return Vec(lat.zero_shift(), FockTerm({}, IntVec(lat.rank(), 0))); }

    /// The vector e^{point} (zero shift).
    static Vec exp(const Lattice& lat, IntVec point) { return Vec(lat.zero_shift(), FockTerm({}, std::move(point))); }

    /// Monomial parts ⊗ e^{point} (zero shift).
    static Vec monomial(const Lattice& lat, Parts parts, IntVec point, const Rational& c = Rational(1))
    {
        return Vec(lat.zero_shift(), FockTerm(std::move(parts), std::move(point)), c);
    }

    const CosetShift& shift() const { return shift_; }
    const Map& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coeff(const FockTerm& t) const
    {
        auto it = terms_.find(t);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add(const FockTerm& t, const Rational& c)
    {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(t, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    /// this += c * other
    void axpy(const Rational& c, const Vec& other)
    {
        if (c.is_zero() || other.is_zero()) return;
        adopt_shift(other);
        for (const auto& [t, x] : other.terms_) add(t, c * x);
    }

    Vec& operator+=(const Vec& o)
    {
        axpy(Rational(1), o);
        return *this;
    }
    Vec& operator-=(const Vec& o)
    {
        axpy(Rational(-1), o);
        return *this;
    }
    Vec& operator*=(const Rational& c)
    {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [t, x] : terms_) x *= c;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(const Rational& c, Vec v) { return v *= c; }
    friend Vec operator-(Vec v) { return v *= Rational(-1); }

    friend bool operator==(const Vec& a, const Vec& b)
    {
        if (a.terms_.empty() && b.terms_.empty()) return true;
        return a.shift_ == b.shift_ && a.terms_ == b.terms_;
    }

    /// Largest total Fock degree among terms (-1 for the zero vector).
    int max_degree() const
    {
        int d = -1;
        for (const auto& [t, c] : terms_) d = std::max(d, t.degree());
        return d;
    }

private:
    void adopt_shift(const Vec& other)
    {
        if (shift_.coords.empty()) {
            shift_ = other.shift_;
            return;
        }
        if (!(shift_ == other.shift_)) throw CosetMismatch();
    }

    CosetShift shift_;
    Map terms_;
};

/// Heisenberg mode h(n) on a single monomial; h is given through its
/// pairings hd[i] = <h, α_i>.
inline void heis_act_term(const RatVec& h, const RatVec& hd, long n, const FockTerm& t, const Rational& c,
                          const CosetShift& shift, Vec& out)
{
    const std::size_t d = h.size();
    if (n < 0) {
        for (std::size_t i = 0; i < d; ++i) {
            if (h[i].is_zero()) continue;
            Parts p = t.parts;
            Part np{static_cast<int>(i), static_cast<int>(-n)};
            p.insert(std::upper_bound(p.begin(), p.end(), np, part_before), np);
            FockTerm nt;
            nt.parts = std::move(p);
            nt.point = t.point;
            out.add(nt, c * h[i]);
        }
    } else if (n == 0) {
        Rational s;
        for (std::size_t i = 0; i < d; ++i) {
            if (hd[i].is_zero()) continue;
            s += hd[i] * (Rational(static_cast<long>(t.point[i])) + shift.coords[i]);
        }
        out.add(t, c * s);
    } else {
        for (std::size_t idx = 0; idx < t.parts.size(); ++idx) {
            const Part& p = t.parts[idx];
            if (p.mode != n || hd[static_cast<std::size_t>(p.dir)].is_zero()) continue;
            FockTerm nt;
            nt.point = t.point;
            nt.parts = t.parts;
            nt.parts.erase(nt.parts.begin() + static_cast<long>(idx));
            out.add(nt, c * hd[static_cast<std::size_t>(p.dir)] * Rational(n));
        }
    }
}

/// h(n) v for h ∈ h (lattice coordinates); c acts as 1.
inline Vec heis_act(const Lattice& lat, const RatVec& h, long n, const Vec& v)
{
    if (h.size() != lat.rank()) throw DimensionMismatch("Heisenberg vector has wrong length");
    RatVec hd = lat.dual_coords(h);
    Vec out(v.shift());
    for (const auto& [t, c] : v.terms()) heis_act_term(h, hd, n, t, c, v.shift(), out);
    return out;
}

inline RatVec basis_vector(std::size_t rank, std::size_t i, const Rational& scale = Rational(1))
{
    RatVec v(rank);
    v[i] = scale;
    return v;
}

inline RatVec to_rational(const IntVec& x)
{
    RatVec r;
    r.reserve(x.size());
    for (auto v : x) r.emplace_back(static_cast<long>(v));
    return r;
}

struct BasisConstraints {
    std::vector<IntVec> points;
    int min_degree = 0;
    int max_degree = 0;
};

/// All monomials of Fock degree exactly `degree` in `rank` colours, in
/// descending-lexicographic order of their canonical part lists.
inline std::vector<Parts> colored_partitions(std::size_t rank, int degree)
{
    std::vector<Parts> out;
    Parts cur;
    std::function<void(int, Part)> rec = [&](int remaining, Part bound) {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        for (int mode = std::min(remaining, bound.mode); mode >= 1; --mode) {
            int first_dir = mode == bound.mode ? bound.dir : 0;
            for (int dir = first_dir; dir < static_cast<int>(rank); ++dir) {
                cur.push_back(Part{dir, mode});
                rec(remaining - mode, Part{dir, mode});
                cur.pop_back();
            }
        }
    };
    rec(degree, Part{0, degree});
    return out;
}

/// Every canonical monomial with a listed lattice point and Fock degree in
/// [min_degree, max_degree]; ordered by point list, then degree, then parts.
inline std::vector<FockTerm> graded_basis(const Lattice& lat, const BasisConstraints& cons)
{
    std::vector<FockTerm> out;
    for (const auto& pt : cons.points) {
        if (pt.size() != lat.rank()) throw DimensionMismatch("basis point has wrong length");
        for (int deg = cons.min_degree; deg <= cons.max_degree; ++deg)
            for (auto& p : colored_partitions(lat.rank(), deg)) {
                FockTerm t;
                t.parts = std::move(p);
                t.point = pt;
                out.push_back(std::move(t));
            }
    }
    return out;
}

// ---- JSON interchange -------------------------------------------------------

inline nlohmann::json to_json(const Rational& r) { return r.to_string(); }

inline nlohmann::json to_json(const Vec& v)
{
    nlohmann::json coset = nlohmann::json::array();
    for (const auto& c : v.shift().coords) coset.push_back(c.to_string());
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [t, c] : v.terms()) {
        nlohmann::json parts = nlohmann::json::array();
        for (const auto& p : t.parts) parts.push_back({p.dir + 1, p.mode});
        terms.push_back({{"coeff", c.to_string()}, {"parts", parts}, {"point", t.point}});
    }
    return {{"coset", coset}, {"terms", terms}};
}

inline Rational rational_from_json(const nlohmann::json& j)
{
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw std::invalid_argument("expected rational string or integer");
}

inline Vec vec_from_json(const Lattice& lat, const nlohmann::json& j)
{
    CosetShift shift = lat.zero_shift();
    if (j.contains("coset")) {
        const auto& cs = j.at("coset");
        if (cs.size() != lat.rank()) throw DimensionMismatch("coset has wrong length");
        for (std::size_t i = 0; i < lat.rank(); ++i) shift.coords[i] = rational_from_json(cs[i]);
        if (!lat.in_dual(shift.coords)) throw std::invalid_argument("coset shift is not in the dual lattice");
    }
    Vec v(shift);
    for (const auto& t : j.at("terms")) {
        Parts parts;
        for (const auto& p : t.at("parts")) {
            int dir = p.at(0).get<int>() - 1;
            int mode = p.at(1).get<int>();
            if (dir < 0 || dir >= static_cast<int>(lat.rank()) || mode < 1)
                throw std::invalid_argument("invalid part in Vec JSON");
            parts.push_back(Part{dir, mode});
        }
        IntVec point = t.at("point").get<IntVec>();
        if (point.size() != lat.rank()) throw DimensionMismatch("term point has wrong length");
        v.add(FockTerm(std::move(parts), std::move(point)), rational_from_json(t.at("coeff")));
    }
    return v;
}

/// Compact human-readable rendering, e.g. "5*a1(-6)e^(1) - a1(-5)a1(-1)e^(-1)".
inline std::string to_string(const Vec& v)
{
    if (v.is_zero()) return "0";
    std::string out;
    for (const auto& [t, c] : v.terms()) {
        std::string mono;
        for (const auto& p : t.parts) mono += "a" + std::to_string(p.dir + 1) + "(-" + std::to_string(p.mode) + ")";
        bool origin = std::all_of(t.point.begin(), t.point.end(), [](auto x) { return x == 0; });
        if (!origin || mono.empty()) {
            std::string pt;
            for (std::size_t i = 0; i < t.point.size(); ++i) pt += (i ? "," : "") + std::to_string(t.point[i]);
            mono += (origin && mono.empty()) ? std::string("1") : "e^(" + pt + ")";
        }
        Rational mag = c.sign() < 0 ? -c : c;
        std::string body = mag == Rational(1) ? mono : mag.to_string() + "*" + mono;
        if (out.empty())
            out = (c.sign() < 0 ? "-" : "") + body;
        else
            out += (c.sign() < 0 ? " - " : " + ") + body;
    }
    return out;
}

} // namespace voalab
