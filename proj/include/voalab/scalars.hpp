#pragma once

// Exact rational arithmetic and bivariate polynomial interpolation.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace voalab {

using Integer = mpz_class;

/// Raised on division by an exact zero.
class DivisionByZero : public std::domain_error {
public:
    DivisionByZero() : std::domain_error("division by zero") {}
};

/**
 * Arbitrary-precision rational number, always kept in lowest terms with a
 * positive denominator. Thin value wrapper over GMP's mpq_class so that
 * division by zero raises instead of trapping.
 */
class Rational {
public:
    Rational() = default;
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(n) {}
    Rational(long long n) : v_(static_cast<long>(n)) {}
    Rational(const Integer& n) : v_(n) {}
    Rational(const Integer& num, const Integer& den)
    {
        if (den == 0) throw DivisionByZero();
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    /// Parses "p", "-p" or "p/q".
    static Rational parse(std::string_view text)
    {
        std::string s(text);
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational(Integer(s));
            return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("malformed rational: " + s);
        }
    }

    Integer numerator() const { return v_.get_num(); }
    Integer denominator() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    /// Floor as an Integer.
    Integer floor() const
    {
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q;
    }

    /// Integral value as a machine integer; throws if not integral or too large.
    long to_long() const
    {
        if (!is_integer() || !v_.get_num().fits_slong_p())
            throw std::domain_error("rational " + to_string() + " is not a machine integer");
        return v_.get_num().get_si();
    }

    std::string to_string() const
    {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    Rational inverse() const
    {
        if (is_zero()) throw DivisionByZero();
        return Rational(mpq_class(1) / v_);
    }

    Rational operator-() const { return Rational(mpq_class(-v_)); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero()) throw DivisionByZero();
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    mpq_class v_;
};

using RatVec = std::vector<Rational>;
using RatMatrix = std::vector<RatVec>;

inline Rational pow(Rational base, unsigned exp)
{
    Rational r(1);
    while (exp) {
        if (exp & 1U) r *= base;
        base *= base;
        exp >>= 1U;
    }
    return r;
}

/// Generalized binomial coefficient C(top, i) for any integer top and i >= 0.
inline Rational binomial(long top, long i)
{
    if (i < 0) return Rational(0);
    Integer num(1), den(1);
    for (long j = 0; j < i; ++j) {
        num *= Integer(top - j);
        den *= Integer(j + 1);
    }
    return Rational(num, den);
}

inline Integer factorial(unsigned long n)
{
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

/// Thrown when interpolation samples do not fit the requested degree bounds.
class DegreeBoundTooSmall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Sparse polynomial in two variables (m, k) with rational coefficients.
 * Keys are exponent pairs (deg_m, deg_k); zero coefficients are never stored.
 */
class BiPoly {
public:
    using Exponents = std::pair<int, int>;

    BiPoly() = default;

    static BiPoly monomial(int dm, int dk, const Rational& c)
    {
        BiPoly p;
        p.add(dm, dk, c);
        return p;
    }

    void add(int dm, int dk, const Rational& c)
    {
        if (dm < 0 || dk < 0) throw std::invalid_argument("negative exponent");
        if (c.is_zero()) return;
        auto [it, inserted] = coeffs_.try_emplace({dm, dk}, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    Rational coeff(int dm, int dk) const
    {
        auto it = coeffs_.find({dm, dk});
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    Rational evaluate(const Rational& m, const Rational& k) const
    {
        Rational total;
        for (const auto& [e, c] : coeffs_)
            total += c * pow(m, static_cast<unsigned>(e.first)) * pow(k, static_cast<unsigned>(e.second));
        return total;
    }

    const std::map<Exponents, Rational>& terms() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    friend bool operator==(const BiPoly&, const BiPoly&) = default;

    friend BiPoly operator+(BiPoly a, const BiPoly& b)
    {
        for (const auto& [e, c] : b.coeffs_) a.add(e.first, e.second, c);
        return a;
    }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b)
    {
        BiPoly r;
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_) r.add(ea.first + eb.first, ea.second + eb.second, ca * cb);
        return r;
    }

    /// Human-readable form such as "-6144*m^5*k^3 - 6144*m^3*k^2".
    std::string to_string() const
    {
        if (coeffs_.empty()) return "0";
        std::string out;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            const auto& [e, c] = *it;
            std::string mono;
            auto var = [&](const char* name, int d) {
                if (d == 0) return;
                if (!mono.empty()) mono += "*";
                mono += name;
                if (d > 1) mono += "^" + std::to_string(d);
            };
            var("m", e.first);
            var("k", e.second);
            Rational mag = c.sign() < 0 ? -c : c;
            std::string coef = mag.to_string();
            std::string body = mono.empty() ? coef : (mag == Rational(1) ? mono : coef + "*" + mono);
            if (out.empty())
                out = (c.sign() < 0 ? "-" : "") + body;
            else
                out += (c.sign() < 0 ? " - " : " + ") + body;
        }
        return out;
    }

private:
    std::map<Exponents, Rational> coeffs_;
};

namespace detail {

/// Gauss-Jordan solve of an (over)determined system; throws on inconsistency
/// or rank deficiency.
inline RatVec solve_exact(RatMatrix a, RatVec rhs)
{
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        std::swap(rhs[p], rhs[r]);
        Rational inv = a[r][c].inverse();
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        rhs[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Rational f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
            rhs[i] -= f * rhs[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (!rhs[i].is_zero()) throw DegreeBoundTooSmall("degree bound too small: samples are inconsistent");
    if (r < cols) throw std::invalid_argument("sample grid does not determine the interpolant");
    RatVec x(cols);
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
    return x;
}

} // namespace detail

struct BiSample {
    long m;
    long k;
    Rational value;
};

/**
 * Recovers the unique polynomial of degree <= dm in m and <= dk in k passing
 * through every sample. Extra samples beyond the (dm+1)(dk+1) unknowns are
 * checked for consistency.
 */
inline BiPoly interpolate_bipoly(const std::vector<BiSample>& samples, int dm, int dk)
{
    if (dm < 0 || dk < 0) throw std::invalid_argument("negative degree bound");
    const std::size_t unknowns = static_cast<std::size_t>(dm + 1) * static_cast<std::size_t>(dk + 1);
    if (samples.size() < unknowns) throw std::invalid_argument("not enough samples for degree bounds");
    RatMatrix a;
    RatVec rhs;
    for (const auto& s : samples) {
        RatVec row;
        row.reserve(unknowns);
        for (int i = 0; i <= dm; ++i)
            for (int j = 0; j <= dk; ++j)
                row.push_back(pow(Rational(s.m), static_cast<unsigned>(i)) * pow(Rational(s.k), static_cast<unsigned>(j)));
        a.push_back(std::move(row));
        rhs.push_back(s.value);
    }
    RatVec coeffs = detail::solve_exact(std::move(a), std::move(rhs));
    BiPoly p;
    std::size_t idx = 0;
    for (int i = 0; i <= dm; ++i)
        for (int j = 0; j <= dk; ++j) p.add(i, j, coeffs[idx++]);
    return p;
}

} // namespace voalab
