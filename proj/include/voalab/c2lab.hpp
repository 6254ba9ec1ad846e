#pragma once

// Exact span/membership computations over Q, the 11x11 weight-six matrix for
// Zα with <α,α> = -2k, its determinant, explicit C2 witnesses and a bounded
// search for C2 certificates.

#include "voalab/fock.hpp"
#include "voalab/involution.hpp"
#include "voalab/lattice.hpp"
#include "voalab/scalars.hpp"
#include "voalab/vertex.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace voalab {

/**
 * Reduced row echelon form of a list of vectors. Columns are FockTerms in
 * their canonical order; each row remembers how it was built from the
 * original generators so that membership queries return coefficients with
 * respect to those generators.
 */
class SpanBasis {
public:
    SpanBasis() = default;
    explicit SpanBasis(std::vector<Vec> generators) : generators_(std::move(generators))
    {
        for (std::size_t g = 0; g < generators_.size(); ++g) {
            const Vec& v = generators_[g];
            if (v.is_zero()) continue;
            if (!shift_)
                shift_ = v.shift();
            else if (!(*shift_ == v.shift()))
                throw CosetMismatch();
            Row r{v.terms(), {{g, Rational(1)}}};
            insert(std::move(r));
        }
    }

    std::size_t rank() const { return rows_.size(); }
    const std::vector<Vec>& generators() const { return generators_; }

    /// Pivot columns in row order.
    std::vector<FockTerm> pivots() const
    {
        std::vector<FockTerm> out;
        for (const auto& r : rows_) out.push_back(r.vec.begin()->first);
        return out;
    }

    /// Coefficients c with Σ c_g generators[g] = target, or nullopt.
    std::optional<RatVec> member(const Vec& target) const
    {
        if (target.is_zero()) return RatVec(generators_.size());
        if (shift_ && !(*shift_ == target.shift())) throw CosetMismatch();
        Row r{target.terms(), {}};
        // Rows contain no pivot column but their own, so one pass suffices.
        std::vector<std::pair<std::size_t, Rational>> hits;
        for (const auto& [t, c] : r.vec) {
            auto it = pivot_row_.find(t);
            if (it != pivot_row_.end()) hits.emplace_back(it->second, c);
        }
        for (const auto& [row, c] : hits) subtract(r, rows_[row], c);
        if (!r.vec.empty()) return std::nullopt;
        RatVec out(generators_.size());
        for (const auto& [g, a] : r.comb) out[g] = -a;
        return out;
    }

private:
    struct Row {
        Vec::Map vec;
        std::map<std::size_t, Rational> comb;
    };

    static void subtract(Row& dst, const Row& src, const Rational& c)
    {
        for (const auto& [t, a] : src.vec) {
            auto [it, inserted] = dst.vec.try_emplace(t, -c * a);
            if (!inserted) {
                it->second -= c * a;
                if (it->second.is_zero()) dst.vec.erase(it);
            }
        }
        for (const auto& [g, a] : src.comb) {
            auto [it, inserted] = dst.comb.try_emplace(g, -c * a);
            if (!inserted) {
                it->second -= c * a;
                if (it->second.is_zero()) dst.comb.erase(it);
            }
        }
    }

    void insert(Row r)
    {
        std::vector<std::pair<std::size_t, Rational>> hits;
        for (const auto& [t, c] : r.vec) {
            auto it = pivot_row_.find(t);
            if (it != pivot_row_.end()) hits.emplace_back(it->second, c);
        }
        for (const auto& [row, c] : hits) subtract(r, rows_[row], c);
        if (r.vec.empty()) return;
        const FockTerm pivot = r.vec.begin()->first;
        const Rational inv = r.vec.begin()->second.inverse();
        for (auto& [t, c] : r.vec) c *= inv;
        for (auto& [g, c] : r.comb) c *= inv;
        for (auto& other : rows_) {
            auto it = other.vec.find(pivot);
            if (it == other.vec.end()) continue;
            const Rational c = it->second;
            subtract(other, r, c);
        }
        pivot_row_[pivot] = rows_.size();
        rows_.push_back(std::move(r));
    }

    std::vector<Vec> generators_;
    std::optional<CosetShift> shift_;
    std::vector<Row> rows_;
    std::map<FockTerm, std::size_t> pivot_row_;
};

inline SpanBasis reduce(std::vector<Vec> vectors) { return SpanBasis(std::move(vectors)); }

inline std::optional<RatVec> member(const Vec& target, const SpanBasis& basis) { return basis.member(target); }

/// Determinant by fraction-free (Bareiss) elimination.
inline Rational det_exact(RatMatrix a)
{
    const std::size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw std::invalid_argument("determinant of a non-square matrix");
    if (n == 0) return Rational(1);
    Rational prev(1);
    int sign = 1;
    for (std::size_t c = 0; c + 1 < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c].is_zero()) ++p;
        if (p == n) return Rational(0);
        if (p != c) {
            std::swap(a[p], a[c]);
            sign = -sign;
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            for (std::size_t j = c + 1; j < n; ++j) a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) / prev;
            a[i][c] = Rational(0);
        }
        prev = a[c][c];
    }
    return Rational(sign) * a[n - 1][n - 1];
}

/// The engine produced a vector that should lie in a known span and does not.
class EngineInconsistency : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Table1Matrix {
    long m = 0;
    long k = 0;
    RatMatrix rows; ///< 11 rows, coordinates in the g-basis
    std::vector<Vec> vectors; ///< the vectors each row expresses

    static constexpr const char* row_labels[11] = {"L(-1)f1", "L(-1)f2", "L(-1)f3", "L(-1)f4",
                                                   "L(-1)f5", "L(-1)f6", "L(-1)f7", "2kL(-3)h1",
                                                   "2kL(-3)h2", "2kL(-3)h3", "(a(-1)^4 1)_{-3}E^m"};
};

/// Vectors L(-1)f_i, 2k L(-3)h_j and (α(-1)⁴1)_{-3} E^m, in that order.
inline std::vector<Vec> table1_vectors(const StandardVectors& sv, ModeEngine& eng)
{
    std::vector<Vec> out;
    for (const auto& f : sv.f()) out.push_back(eng.virasoro_mode(-1, f));
    for (const auto& h : sv.h()) out.push_back(Rational(2 * sv.k()) * eng.virasoro_mode(-3, h));
    const Vec a4 = Vec::monomial(sv.lattice(), {{0, 1}, {0, 1}, {0, 1}, {0, 1}}, {0});
    out.push_back(eng.mode_product(a4, -3, sv.E(sv.m())));
    return out;
}

inline Table1Matrix build_table1(long m, long k)
{
    if (m < 1 || k < 1) throw std::invalid_argument("m and k must be positive");
    StandardVectors sv(k, m);
    ModeEngine eng(sv.lattice());
    Table1Matrix out;
    out.m = m;
    out.k = k;
    out.vectors = table1_vectors(sv, eng);
    SpanBasis g(sv.g());
    for (std::size_t i = 0; i < out.vectors.size(); ++i) {
        auto coords = g.member(out.vectors[i]);
        if (!coords)
            throw EngineInconsistency(std::string("row ") + Table1Matrix::row_labels[i] +
                                      " is not in the span of g1..g11");
        out.rows.push_back(std::move(*coords));
    }
    return out;
}

/// The closed form -6144 m^3 k^2 (m^2 k + 1) = -6144 m^5 k^3 - 6144 m^3 k^2.
inline BiPoly table1_det_formula()
{
    BiPoly p;
    p.add(5, 3, Rational(-6144));
    p.add(3, 2, Rational(-6144));
    return p;
}

struct DetScanResult {
    std::vector<BiSample> samples;
    std::optional<BiPoly> interpolant;
    bool pass = false;
    std::optional<std::pair<long, long>> witness; ///< first (m,k) disagreeing with the formula
    std::string message;
};

using DetProvider = std::function<Rational(long m, long k)>;

inline Rational table1_det(long m, long k) { return det_exact(build_table1(m, k).rows); }

/**
 * Samples det A on the grid, interpolates with degree bounds (5, 3) and
 * compares the interpolant structurally with the closed form.
 */
inline DetScanResult det_identity_scan(const std::vector<long>& m_range, const std::vector<long>& k_range,
                                       const DetProvider& provider = table1_det)
{
    if (m_range.size() < 6 || k_range.size() < 4) throw std::invalid_argument("det scan needs at least a 6x4 grid");
    DetScanResult out;
    const BiPoly formula = table1_det_formula();
    for (long m : m_range)
        for (long k : k_range) {
            out.samples.push_back(BiSample{m, k, provider(m, k)});
            if (!out.witness && out.samples.back().value != formula.evaluate(Rational(m), Rational(k)))
                out.witness = std::make_pair(m, k);
        }
    try {
        out.interpolant = interpolate_bipoly(out.samples, 5, 3);
    } catch (const DegreeBoundTooSmall& e) {
        out.message = e.what();
        return out;
    }
    out.pass = *out.interpolant == formula && !out.witness;
    out.message = out.pass ? "interpolant equals -6144*m^3*k^2*(m^2*k + 1)"
                           : "interpolant " + out.interpolant->to_string() + " differs from the closed form";
    return out;
}

struct WitnessReport {
    std::string name;
    Vec engine;    ///< value computed by the mode engine
    Vec assembled; ///< closed-form right-hand side built from Schur polynomials
    Vec residual;  ///< engine - assembled
    Rational isolated_coeff; ///< coefficient of the isolated summand in the engine result
    Rational expected_isolated;
    bool equal() const { return residual.is_zero() && isolated_coeff == expected_isolated; }
};

/// E_{-2kn} α(-1)F^n with E = E^1, against the closed form whose last summand
/// is -2k E^{n-1}.
inline WitnessReport witness_E_lowering(long n, long k)
{
    if (n < 2 || k < 1) throw std::invalid_argument("lowering witness needs n >= 2 and k >= 1");
    StandardVectors sv(k, 1);
    const Lattice& lat = sv.lattice();
    ModeEngine eng(lat);
    SchurCache cache;
    const RatVec alpha{Rational(1)};

    WitnessReport r;
    r.name = "E_{-2kn} a(-1)F^n, n=" + std::to_string(n) + ", k=" + std::to_string(k);
    const Vec a1F = ModeEngine::create(0, 1, sv.F(n));
    r.engine = eng.mode_product(sv.E(1), -2 * k * n, a1F);

    const int j = static_cast<int>(4 * n * k);
    const Vec up = Vec::exp(lat, {n + 1});
    const Vec down = Vec::exp(lat, {-(n + 1)});
    const Vec a1up = ModeEngine::create(0, 1, up);
    const Vec a1down = ModeEngine::create(0, 1, down);
    r.assembled = schur_p(cache, j - 1, alpha, 1)(a1up);
    r.assembled -= schur_p(cache, j - 1, alpha, -1)(a1down);
    r.assembled.axpy(Rational(2 * k), schur_p(cache, j, alpha, 1)(up));
    r.assembled.axpy(Rational(2 * k), schur_p(cache, j, alpha, -1)(down));
    r.assembled.axpy(Rational(-2 * k), sv.E(n - 1));
    r.residual = r.engine - r.assembled;
    r.isolated_coeff = r.engine.coeff(FockTerm({}, {n - 1}));
    r.expected_isolated = Rational(-2 * k);
    return r;
}

/// E_{-2k-1}E against p_{4k}(α)e^{2α} + p_{4k}(-α)e^{-2α} + 2·1.
inline WitnessReport witness_vacuum(long k)
{
    if (k < 1) throw std::invalid_argument("vacuum witness needs k >= 1");
    StandardVectors sv(k, 1);
    const Lattice& lat = sv.lattice();
    ModeEngine eng(lat);
    SchurCache cache;
    const RatVec alpha{Rational(1)};

    WitnessReport r;
    r.name = "E_{-2k-1}E, k=" + std::to_string(k);
    r.engine = eng.mode_product(sv.E(1), -2 * k - 1, sv.E(1));
    const int j = static_cast<int>(4 * k);
    r.assembled = schur_p(cache, j, alpha, 1)(Vec::exp(lat, {2}));
    r.assembled += schur_p(cache, j, alpha, -1)(Vec::exp(lat, {-2}));
    r.assembled.axpy(Rational(2), sv.vacuum());
    r.residual = r.engine - r.assembled;
    r.isolated_coeff = r.engine.coeff(FockTerm({}, {0}));
    r.expected_isolated = Rational(2);
    return r;
}

struct C2Bounds {
    long max_point = 2;  ///< max |coordinate| of lattice points of u and v
    int max_degree = 4;  ///< max Fock degree of u and v
    std::size_t max_pairs = 20000;
};

struct CertificateEntry {
    Vec u;
    Vec v;
    Rational coeff;
};

struct SpanCertificate {
    Vec target;
    std::vector<CertificateEntry> combination;
};

struct C2SearchResult {
    std::optional<SpanCertificate> certificate;
    C2Bounds bounds;
    std::size_t pairs_tried = 0;
    std::size_t span_rank = 0;
    bool replay_ok = false;
};

/// Σ c_i (u_i)_{-2} v_i recomputed with a fresh engine.
inline Vec replay(const Lattice& lat, const SpanCertificate& cert)
{
    ModeEngine eng(lat);
    Vec total(cert.target.shift());
    for (const auto& e : cert.combination) total.axpy(e.coeff, eng.mode_product(e.u, -2, e.v));
    return total;
}

namespace detail {

inline void enumerate_points(std::size_t rank, long bound, IntVec& cur, std::vector<IntVec>& out)
{
    if (cur.size() == rank) {
        out.push_back(cur);
        return;
    }
    for (long x = -bound; x <= bound; ++x) {
        cur.push_back(x);
        enumerate_points(rank, bound, cur, out);
        cur.pop_back();
    }
}

inline IntVec parity_class(const IntVec& p)
{
    IntVec out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = ((p[i] % 2) + 2) % 2;
    return out;
}

} // namespace detail

/// Homogeneous weight of v, or nullopt if v is zero or mixes weights.
inline std::optional<Rational> homogeneous_weight(const Lattice& lat, const Vec& v)
{
    std::optional<Rational> w;
    for (const auto& [t, c] : v.terms()) {
        Rational x = weight(lat, t, v.shift());
        if (w && *w != x) return std::nullopt;
        w = x;
    }
    return w;
}

/**
 * Looks for target = Σ c_i (u_i)_{-2} v_i with u_i, v_i ranging over the
 * θ-fixed vectors built from monomials inside `bounds`. A negative answer
 * only means no certificate exists inside the bounds.
 */
inline C2SearchResult c2_search(const Lattice& lat, const Vec& target, const C2Bounds& bounds)
{
    C2SearchResult out;
    out.bounds = bounds;
    if (!target.shift().is_zero() && !target.is_zero()) throw std::invalid_argument("c2 search works inside V_L");
    auto tw = homogeneous_weight(lat, target);
    if (!tw) throw std::invalid_argument("c2 search target must be nonzero and homogeneous");

    std::set<IntVec> classes;
    for (const auto& [t, c] : target.terms()) classes.insert(detail::parity_class(t.point));

    std::vector<IntVec> points;
    IntVec cur;
    detail::enumerate_points(lat.rank(), bounds.max_point, cur, points);
    BasisConstraints cons{points, 0, bounds.max_degree};
    std::vector<Vec> plus = projected_basis(lat, graded_basis(lat, cons), 1);

    struct Gen {
        Vec v;
        Rational w;
        IntVec point;
        bool is_vacuum;
    };
    std::vector<Gen> gens;
    for (auto& v : plus) {
        const FockTerm& t = v.terms().begin()->first;
        bool vac = t.parts.empty() && std::all_of(t.point.begin(), t.point.end(), [](auto x) { return x == 0; });
        Rational w = weight(lat, t);
        gens.push_back(Gen{std::move(v), w, t.point, vac});
    }

    ModeEngine eng(lat);
    std::vector<Vec> products;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < gens.size(); ++a) {
        if (gens[a].is_vacuum) continue;
        for (std::size_t b = 0; b < gens.size(); ++b) {
            if (gens[a].w + gens[b].w + Rational(1) != *tw) continue;
            IntVec sum(lat.rank());
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = gens[a].point[i] + gens[b].point[i];
            if (!classes.count(detail::parity_class(sum))) continue;
            if (out.pairs_tried >= bounds.max_pairs) break;
            ++out.pairs_tried;
            Vec prod = eng.mode_product(gens[a].v, -2, gens[b].v);
            if (prod.is_zero()) continue;
            products.push_back(std::move(prod));
            pairs.emplace_back(a, b);
        }
    }
    SpanBasis span(products);
    out.span_rank = span.rank();
    auto coeffs = span.member(target);
    if (!coeffs) return out;

    SpanCertificate cert;
    cert.target = target;
    for (std::size_t i = 0; i < coeffs->size(); ++i) {
        if ((*coeffs)[i].is_zero()) continue;
        cert.combination.push_back(
            CertificateEntry{gens[pairs[i].first].v, gens[pairs[i].second].v, (*coeffs)[i]});
    }
    out.replay_ok = replay(lat, cert) == target;
    if (!out.replay_ok) throw EngineInconsistency("C2 certificate failed to replay");
    out.certificate = std::move(cert);
    return out;
}

inline nlohmann::json to_json(const SpanCertificate& c)
{
    nlohmann::json comb = nlohmann::json::array();
    for (const auto& e : c.combination)
        comb.push_back({{"u", to_json(e.u)}, {"v", to_json(e.v)}, {"coeff", e.coeff.to_string()}});
    return {{"target", to_json(c.target)}, {"combination", comb}};
}

inline SpanCertificate certificate_from_json(const Lattice& lat, const nlohmann::json& j)
{
    SpanCertificate c;
    c.target = vec_from_json(lat, j.at("target"));
    for (const auto& e : j.at("combination"))
        c.combination.push_back(CertificateEntry{vec_from_json(lat, e.at("u")), vec_from_json(lat, e.at("v")),
                                                 rational_from_json(e.at("coeff"))});
    return c;
}

inline nlohmann::json matrix_to_json(const RatMatrix& a)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : a) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& x : r) row.push_back(x.to_string());
        rows.push_back(row);
    }
    return rows;
}

inline RatMatrix matrix_from_json(const nlohmann::json& j)
{
    RatMatrix a;
    for (const auto& r : j) {
        RatVec row;
        for (const auto& x : r) row.push_back(rational_from_json(x));
        a.push_back(std::move(row));
    }
    return a;
}

/// Golden-file form: {"m": .., "k": .., "matrix": [[...]]}.
inline nlohmann::json to_json(const Table1Matrix& t)
{
    return {{"m", t.m}, {"k", t.k}, {"matrix", matrix_to_json(t.rows)}};
}

} // namespace voalab
