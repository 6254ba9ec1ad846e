#pragma once

// The involution θ of V_L (and of V_{L+λ} when 2λ ∈ L), eigenspace
// projections, and the standard vectors of the rank-one lattice Zα with
// <α,α> = -2k.

#include "voalab/fock.hpp"
#include "voalab/lattice.hpp"
#include "voalab/scalars.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace voalab {

class UnsupportedCoset : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/**
 * θ(β_1(-n_1)...β_r(-n_r) e^{β+λ}) = (-1)^r c_{2λ} ε(β, 2λ) β_1(-n_1)...β_r(-n_r) e^{-β-λ}.
 *
 * For λ = 0 this is the usual lift of -1. For λ ≠ 0 the coset must satisfy
 * 2λ ∈ L and ε(2λ, 2λ) = +1, in which case c_{2λ} = +1.
 */
class ThetaAction {
public:
    ThetaAction(const Lattice& lat, const CosetShift& shift) : lat_(&lat), shift_(shift)
    {
        if (shift.coords.size() != lat.rank()) throw DimensionMismatch("coset shift has wrong length");
        two_lambda_.assign(lat.rank(), 0);
        for (std::size_t i = 0; i < lat.rank(); ++i) {
            Rational t = shift.coords[i] * Rational(2);
            if (!t.is_integer())
                throw UnsupportedCoset("theta does not preserve this coset: 2*lambda is not in L");
            two_lambda_[i] = t.to_long();
        }
        if (lat.epsilon(two_lambda_, two_lambda_) != 1)
            throw UnsupportedCoset("epsilon(2 lambda, 2 lambda) = -1 needs an irrational square root");
    }

    Vec operator()(const Vec& v) const
    {
        if (!v.is_zero() && !(v.shift() == shift_)) throw CosetMismatch();
        Vec out(shift_);
        for (const auto& [t, c] : v.terms()) {
            FockTerm nt;
            nt.parts = t.parts;
            nt.point.resize(t.point.size());
            for (std::size_t i = 0; i < t.point.size(); ++i) nt.point[i] = -t.point[i] - two_lambda_[i];
            int sign = (t.parts.size() % 2 == 0) ? 1 : -1;
            sign *= lat_->epsilon(t.point, two_lambda_);
            out.add(nt, Rational(sign) * c);
        }
        return out;
    }

private:
    const Lattice* lat_;
    CosetShift shift_;
    IntVec two_lambda_;
};

inline Vec theta(const Lattice& lat, const Vec& v)
{
    if (v.is_zero()) return v;
    return ThetaAction(lat, v.shift())(v);
}

/// (v ± θv)/2.
inline Vec project(const Lattice& lat, const Vec& v, int sign)
{
    Vec tv = theta(lat, v);
    Vec out = v;
    out.axpy(Rational(sign >= 0 ? 1 : -1), tv);
    out *= Rational(1, 2);
    return out;
}

/**
 * Distinct θ-eigenvectors obtained by projecting each monomial of `basis`;
 * a monomial and its θ-image give the same vector up to sign, so only the
 * first one met is kept.
 */
inline std::vector<Vec> projected_basis(const Lattice& lat, const std::vector<FockTerm>& basis, int sign)
{
    std::vector<Vec> out;
    std::map<FockTerm, bool> seen;
    const CosetShift zero = lat.zero_shift();
    for (const auto& t : basis) {
        if (seen.count(t)) continue;
        Vec v(zero, t);
        Vec tv = theta(lat, v);
        for (const auto& [img, c] : tv.terms()) seen[img] = true;
        seen[t] = true;
        Vec p = project(lat, v, sign);
        if (!p.is_zero()) out.push_back(std::move(p));
    }
    return out;
}

/// Named vectors of V_L^+ for L = Zα, <α,α> = -2k.
class StandardVectors {
public:
    StandardVectors(long k, long m) : k_(k), m_(m), lat_(Lattice::negative_rank1(k))
    {
        if (k < 1 || m < 1) throw std::invalid_argument("k and m must be positive");
        const Vec e = E(m);
        const Vec f = F(m);
        auto a = [](std::initializer_list<int> modes) {
            Parts p;
            for (int n : modes) p.push_back(Part{0, n});
            return p;
        };
        g_ = {on(a({6}), f),          on(a({5, 1}), e),       on(a({4, 2}), e),    on(a({4, 1, 1}), f),
              on(a({3, 3}), e),       on(a({3, 2, 1}), f),    on(a({3, 1, 1, 1}), e), on(a({2, 2, 2}), f),
              on(a({2, 2, 1, 1}), e), on(a({2, 1, 1, 1, 1}), f), on(a({1, 1, 1, 1, 1, 1}), e)};
        f_ = {on(a({5}), f),       on(a({4, 1}), e),    on(a({3, 2}), e),          on(a({3, 1, 1}), f),
              on(a({2, 2, 1}), f), on(a({2, 1, 1, 1}), e), on(a({1, 1, 1, 1, 1}), f)};
        h_ = {on(a({3}), f), on(a({2, 1}), e), on(a({1, 1, 1}), f)};
    }

    long k() const { return k_; }
    long m() const { return m_; }
    const Lattice& lattice() const { return lat_; }

    /// E^n = e^{nα} + e^{-nα}
    Vec E(long n) const { return Vec::exp(lat_, {n}) + Vec::exp(lat_, {-n}); }
    /// F^n = e^{nα} - e^{-nα}
    Vec F(long n) const { return Vec::exp(lat_, {n}) - Vec::exp(lat_, {-n}); }

    /// J = 1/(4k²) α(-1)⁴ + 1/k α(-3)α(-1) - 3/(4k) α(-2)²
    Vec J() const
    {
        Vec out = Vec::monomial(lat_, {{0, 1}, {0, 1}, {0, 1}, {0, 1}}, {0}, Rational(1, 4 * k_ * k_));
        out += Vec::monomial(lat_, {{0, 3}, {0, 1}}, {0}, Rational(1, k_));
        out += Vec::monomial(lat_, {{0, 2}, {0, 2}}, {0}, Rational(-3, 4 * k_));
        return out;
    }

    /// ω = -1/(4k) α(-1)²
    Vec omega() const { return Vec::monomial(lat_, {{0, 1}, {0, 1}}, {0}, Rational(-1, 4 * k_)); }

    Vec vacuum() const { return Vec::vacuum(lat_); }

    const std::vector<Vec>& g() const { return g_; }
    const std::vector<Vec>& f() const { return f_; }
    const std::vector<Vec>& h() const { return h_; }

    /// 1-based accessors matching the usual labels g1..g11, f1..f7, h1..h3.
    const Vec& g(std::size_t i) const { return g_.at(i - 1); }
    const Vec& f(std::size_t i) const { return f_.at(i - 1); }
    const Vec& h(std::size_t i) const { return h_.at(i - 1); }

    /// Resolves names such as "g4", "f7", "h2", "E", "F", "J", "omega", "vacuum".
    Vec by_name(const std::string& name) const
    {
        if (name == "E") return E(m_);
        if (name == "F") return F(m_);
        if (name == "J") return J();
        if (name == "omega") return omega();
        if (name == "vacuum" || name == "1") return vacuum();
        if (name.size() >= 2) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(name.substr(1));
            } catch (const std::exception&) {
                idx = 0;
            }
            const std::vector<Vec>* list = name[0] == 'g' ? &g_ : name[0] == 'f' ? &f_ : name[0] == 'h' ? &h_ : nullptr;
            if (list && idx >= 1 && idx <= list->size()) return (*list)[idx - 1];
        }
        throw std::invalid_argument("unknown vector name: " + name);
    }

private:
    Vec on(const Parts& p, const Vec& base) const
    {
        Vec out(lat_.zero_shift());
        for (const auto& [t, c] : base.terms()) out.add(FockTerm(merge_parts(p, t.parts), t.point), c);
        return out;
    }

    long k_;
    long m_;
    Lattice lat_;
    std::vector<Vec> g_, f_, h_;
};

} // namespace voalab
