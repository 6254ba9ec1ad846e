#pragma once

// Even non-degenerate lattices, their bimultiplicative cocycle and the
// discriminant cosets L°/L.

#include "voalab/scalars.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace voalab {

using IntVec = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVec>;

enum class Signature { PositiveDefinite, NegativeDefinite, Indefinite };

inline const char* to_string(Signature s)
{
    switch (s) {
    case Signature::PositiveDefinite: return "positive-definite";
    case Signature::NegativeDefinite: return "negative-definite";
    case Signature::Indefinite: return "indefinite";
    }
    return "?";
}

class LatticeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};
class NotSquareError : public LatticeError {
public:
    NotSquareError() : LatticeError("gram matrix is not square") {}
};
class NotSymmetricError : public LatticeError {
public:
    NotSymmetricError() : LatticeError("gram matrix is not symmetric") {}
};
class OddDiagonalError : public LatticeError {
public:
    explicit OddDiagonalError(std::size_t i)
        : LatticeError("gram diagonal entry " + std::to_string(i) + " is odd; lattice is not even") {}
};
class SingularGramError : public LatticeError {
public:
    SingularGramError() : LatticeError("gram matrix is singular") {}
};
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Rational vector λ in lattice coordinates with Gλ integral (an element of L°).
struct CosetShift {
    RatVec coords;
    bool is_zero() const
    {
        for (const auto& c : coords)
            if (!c.is_zero()) return false;
        return true;
    }
    friend bool operator==(const CosetShift&, const CosetShift&) = default;
};

/// Sign table ε(α_i, α_j) on basis pairs, extended bimultiplicatively.
class Cocycle {
public:
    Cocycle() = default;
    /// Standard choice: ε(α_i, α_j) = (-1)^{G_ij} for i > j, +1 otherwise.
    explicit Cocycle(const IntMatrix& gram)
    {
        const std::size_t d = gram.size();
        odd_.assign(d, std::vector<bool>(d, false));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < i; ++j) odd_[i][j] = (gram[i][j] % 2) != 0;
    }

    int operator()(const IntVec& a, const IntVec& b) const
    {
        int parity = 0;
        for (std::size_t i = 0; i < odd_.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (odd_[i][j]) parity ^= static_cast<int>(((a[i] % 2) != 0) && ((b[j] % 2) != 0));
        return parity ? -1 : 1;
    }

    int basis_sign(std::size_t i, std::size_t j) const { return odd_[i][j] ? -1 : 1; }

private:
    std::vector<std::vector<bool>> odd_;
};

namespace detail {

inline Integer int_det(const IntMatrix& g)
{
    // Bareiss over Integer.
    const std::size_t n = g.size();
    std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = Integer(static_cast<long>(g[i][j]));
    Integer prev(1);
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return Integer(0);
        if (p != c) {
            std::swap(a[p], a[c]);
            sign = -sign;
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            for (std::size_t j = c + 1; j < n; ++j) a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) / prev;
            a[i][c] = 0;
        }
        prev = a[c][c];
    }
    return sign * a[n - 1][n - 1];
}

/// Counts positive and negative pivots of a congruence diagonalization.
inline std::pair<std::size_t, std::size_t> inertia(const IntMatrix& g)
{
    const std::size_t n = g.size();
    RatMatrix a(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(static_cast<long>(g[i][j]));
    std::size_t pos = 0, neg = 0;
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t p = t;
        while (p < n && a[p][p].is_zero()) ++p;
        if (p == n) {
            // No diagonal pivot left: combine e_i <- e_i + e_j for some nonzero off-diagonal entry.
            std::size_t bi = n, bj = n;
            for (std::size_t i = t; i < n && bi == n; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (i != j && !a[i][j].is_zero()) {
                        bi = i;
                        bj = j;
                        break;
                    }
            if (bi == n) break; // remaining block is zero (singular)
            for (std::size_t c = 0; c < n; ++c) a[bi][c] += a[bj][c];
            for (std::size_t r = 0; r < n; ++r) a[r][bi] += a[r][bj];
            p = bi;
        }
        if (p != t) {
            std::swap(a[p], a[t]);
            for (auto& row : a) std::swap(row[p], row[t]);
        }
        const Rational piv = a[t][t];
        (piv.sign() > 0 ? pos : neg)++;
        for (std::size_t i = t + 1; i < n; ++i) {
            if (a[i][t].is_zero()) continue;
            Rational f = a[i][t] / piv;
            for (std::size_t j = t; j < n; ++j) a[i][j] -= f * a[t][j];
            for (std::size_t j = t; j < n; ++j) a[j][i] = a[i][j];
        }
    }
    return {pos, neg};
}

inline RatMatrix rational_inverse(const IntMatrix& g)
{
    const std::size_t n = g.size();
    RatMatrix a(n, RatVec(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(static_cast<long>(g[i][j]));
        a[i][n + i] = Rational(1);
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c].is_zero()) ++p;
        if (p == n) throw SingularGramError();
        std::swap(a[p], a[c]);
        Rational inv = a[c][c].inverse();
        for (auto& x : a[c]) x *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c].is_zero()) continue;
            Rational f = a[i][c];
            for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    RatMatrix out(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = a[i][n + j];
    return out;
}

/// Smith normal form D = U G V; returns the diagonal of D and the column
/// transform V.
struct SmithForm {
    IntVec diagonal;
    IntMatrix right;
};

inline SmithForm smith_normal_form(IntMatrix a)
{
    const std::size_t n = a.size();
    IntMatrix v(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1;

    auto col_op = [&](std::size_t dst, std::size_t src, std::int64_t f) { // col dst -= f * col src
        for (std::size_t r = 0; r < n; ++r) {
            a[r][dst] -= f * a[r][src];
            v[r][dst] -= f * v[r][src];
        }
    };
    auto row_op = [&](std::size_t dst, std::size_t src, std::int64_t f) {
        for (std::size_t c = 0; c < n; ++c) a[dst][c] -= f * a[src][c];
    };
    auto swap_cols = [&](std::size_t x, std::size_t y) {
        for (std::size_t r = 0; r < n; ++r) {
            std::swap(a[r][x], a[r][y]);
            std::swap(v[r][x], v[r][y]);
        }
    };

    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // Move the smallest nonzero entry of the trailing block to (t, t).
            std::size_t bi = n, bj = n;
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (a[i][j] != 0 && (bi == n || std::llabs(a[i][j]) < std::llabs(a[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == n) throw SingularGramError();
            std::swap(a[bi], a[t]);
            swap_cols(bj, t);
            bool clean = true;
            for (std::size_t i = t + 1; i < n; ++i) {
                row_op(i, t, a[i][t] / a[t][t]);
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                col_op(j, t, a[t][j] / a[t][t]);
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // Divisibility: fold any offending row into row t and repeat.
            bool divides = true;
            for (std::size_t i = t + 1; i < n && divides; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        for (std::size_t c = 0; c < n; ++c) a[t][c] += a[i][c];
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
    }
    SmithForm out;
    for (std::size_t i = 0; i < n; ++i) out.diagonal.push_back(std::llabs(a[i][i]));
    out.right = std::move(v);
    return out;
}

} // namespace detail

/**
 * Rank-d even lattice given by its Gram matrix in a fixed Z-basis.
 *
 * All vectors of h = C ⊗ L are expressed in basis coordinates; the pairing is
 * x^T G y.
 */
class Lattice {
public:
    explicit Lattice(IntMatrix gram) : gram_(std::move(gram))
    {
        const std::size_t d = gram_.size();
        if (d == 0) throw LatticeError("gram matrix is empty");
        for (const auto& row : gram_)
            if (row.size() != d) throw NotSquareError();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (gram_[i][j] != gram_[j][i]) throw NotSymmetricError();
        for (std::size_t i = 0; i < d; ++i)
            if (gram_[i][i] % 2 != 0) throw OddDiagonalError(i);
        det_ = detail::int_det(gram_);
        if (det_ == 0) throw SingularGramError();
        auto [pos, neg] = detail::inertia(gram_);
        signature_ = neg == 0 ? Signature::PositiveDefinite
                              : (pos == 0 ? Signature::NegativeDefinite : Signature::Indefinite);
        inverse_ = detail::rational_inverse(gram_);
        cocycle_ = Cocycle(gram_);
    }

    /// Shorthand for the rank-one lattice Zα with <α,α> = -2k.
    static Lattice negative_rank1(std::int64_t k) { return Lattice(IntMatrix{{-2 * k}}); }

    static Lattice from_json(const nlohmann::json& j)
    {
        if (!j.contains("gram")) throw LatticeError("lattice JSON lacks a \"gram\" field");
        return Lattice(j.at("gram").get<IntMatrix>());
    }
    static Lattice from_file(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        return from_json(nlohmann::json::parse(in));
    }

    std::size_t rank() const { return gram_.size(); }
    const IntMatrix& gram() const { return gram_; }
    const RatMatrix& gram_inverse() const { return inverse_; }
    const Integer& determinant() const { return det_; }
    Signature signature() const { return signature_; }
    const Cocycle& cocycle() const { return cocycle_; }

    std::int64_t gram_entry(std::size_t i, std::size_t j) const { return gram_[i][j]; }

    Rational pairing(const RatVec& x, const RatVec& y) const
    {
        check_dim(x.size());
        check_dim(y.size());
        Rational total;
        for (std::size_t i = 0; i < rank(); ++i) {
            if (x[i].is_zero()) continue;
            Rational row;
            for (std::size_t j = 0; j < rank(); ++j)
                if (gram_[i][j] != 0) row += Rational(static_cast<long>(gram_[i][j])) * y[j];
            total += x[i] * row;
        }
        return total;
    }

    std::int64_t pairing(const IntVec& x, const IntVec& y) const
    {
        check_dim(x.size());
        check_dim(y.size());
        std::int64_t total = 0;
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j) total += x[i] * gram_[i][j] * y[j];
        return total;
    }

    /// <x, α_i> for every basis vector α_i, i.e. the vector Gx.
    IntVec dual_coords(const IntVec& x) const
    {
        check_dim(x.size());
        IntVec out(rank(), 0);
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j) out[i] += gram_[i][j] * x[j];
        return out;
    }
    RatVec dual_coords(const RatVec& x) const
    {
        check_dim(x.size());
        RatVec out(rank());
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j)
                if (gram_[i][j] != 0) out[i] += Rational(static_cast<long>(gram_[i][j])) * x[j];
        return out;
    }

    int epsilon(const IntVec& a, const IntVec& b) const
    {
        check_dim(a.size());
        check_dim(b.size());
        return cocycle_(a, b);
    }

    /// True when <λ, α_i> is an integer for every basis vector.
    bool in_dual(const RatVec& lambda) const
    {
        for (const auto& c : dual_coords(lambda))
            if (!c.is_integer()) return false;
        return true;
    }

    CosetShift zero_shift() const { return CosetShift{RatVec(rank())}; }

    static constexpr std::int64_t kMaxDiscriminant = 1'000'000;

    /**
     * Representatives of L°/L, one per coset, via the Smith normal form of G.
     * The zero coset comes first; all coordinates lie in [0, 1).
     */
    std::vector<CosetShift> dual_cosets() const
    {
        Integer absdet = abs(det_);
        if (absdet > kMaxDiscriminant)
            throw std::length_error("|det G| = " + absdet.get_str() + " exceeds the coset-enumeration guard");
        auto snf = detail::smith_normal_form(gram_);
        const std::size_t d = rank();
        std::vector<CosetShift> out;
        IntVec c(d, 0);
        for (;;) {
            RatVec lambda(d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    if (snf.right[i][j] != 0 && c[j] != 0)
                        lambda[i] += Rational(static_cast<long>(snf.right[i][j] * c[j]), static_cast<long>(snf.diagonal[j]));
            for (auto& x : lambda) x -= Rational(x.floor());
            out.push_back(CosetShift{std::move(lambda)});
            std::size_t pos = d;
            while (pos > 0) {
                --pos;
                if (++c[pos] < snf.diagonal[pos]) break;
                c[pos] = 0;
                if (pos == 0) return out;
            }
            if (d == 0) return out;
        }
    }

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.gram_ == b.gram_; }

private:
    void check_dim(std::size_t n) const
    {
        if (n != rank())
            throw DimensionMismatch("vector of length " + std::to_string(n) + " for rank " + std::to_string(rank()));
    }

    IntMatrix gram_;
    Integer det_;
    Signature signature_ = Signature::Indefinite;
    RatMatrix inverse_;
    Cocycle cocycle_;
};

} // namespace voalab
