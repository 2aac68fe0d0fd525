#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "sidonlab/counting.hpp"
#include "sidonlab/errors.hpp"
#include "sidonlab/field.hpp"
#include "sidonlab/rational.hpp"
#include "sidonlab/sidon_set.hpp"

namespace sidonlab {

namespace detail {

inline double fourth_root(double x) { return std::sqrt(std::sqrt(x)); }

/* residue <= sqrt(rhs_num / rhs_den), residue exact. Decided by squaring in
   128-bit integers whenever the products fit, long double otherwise. */
inline bool within_sqrt_bound(const Rational& residue, unsigned __int128 rhs_num,
                              unsigned __int128 rhs_den) {
    if (residue.is_negative() || residue.is_zero()) return true;
    const unsigned __int128 n = static_cast<unsigned __int128>(residue.num());
    const unsigned __int128 d = static_cast<unsigned __int128>(residue.den());
    constexpr unsigned __int128 kMax = ~static_cast<unsigned __int128>(0);
    if (rhs_den <= kMax / n / n && rhs_num <= kMax / d / d) {
        return n * n * rhs_den <= rhs_num * d * d;
    }
    const long double lhs = static_cast<long double>(residue.num()) /
                            static_cast<long double>(residue.den());
    return lhs * lhs <= static_cast<long double>(rhs_num) /
                            static_cast<long double>(rhs_den);
}

} // namespace detail

// --- point-line incidences ---------------------------------------------------

/* Points and nonzero-slope lines over F_q. Lines are (slope, intercept) for
   y = slope*x + intercept; slope 0 is rejected because the logarithmic Sidon
   encoding has no image for it. */
class IncidenceInstance {
public:
    IncidenceInstance(FieldPtr field,
                      std::vector<std::pair<std::uint64_t, std::uint64_t>> points,
                      std::vector<std::pair<std::uint64_t, std::uint64_t>> lines)
        : field_(std::move(field)), points_(std::move(points)), lines_(std::move(lines)) {
        const std::uint64_t q = field_->q();
        for (auto& [x, y] : points_) {
            if (x >= q || y >= q) throw DomainError("point coordinate out of range");
        }
        for (auto& [slope, intercept] : lines_) {
            if (slope >= q || intercept >= q) throw DomainError("line coefficient out of range");
            if (slope == 0) throw SlopeError("zero-slope line not admitted");
        }
        std::sort(points_.begin(), points_.end());
        points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
        std::sort(lines_.begin(), lines_.end());
        lines_.erase(std::unique(lines_.begin(), lines_.end()), lines_.end());
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& points() const { return points_; }
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& lines() const { return lines_; }

private:
    FieldPtr field_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> points_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> lines_;
};

struct IncidenceReport {
    std::uint64_t incidences = 0;        // I(P, L), all points
    std::uint64_t zero_x_incidences = 0; // incidences on points with x = 0
    Rational main_term;                  // |P||L|/q
    double normalized_error = 0.0;       // (I - |P||L|/q) / sqrt(|P||L|q)
    double error_bound = 2.0;            // desk-scale constant
    bool within = true;
    CountReport log_encoding;            // Sidon-set count over the x != 0 part
};

/* Exact incidence count by testing y = slope*x + intercept over all pairs,
   plus the same count routed through the logarithmic Sidon encoding for the
   points with nonzero x (the encoding cannot see x = 0). */
inline IncidenceReport incidence_experiment(const IncidenceInstance& inst,
                                            std::uint64_t ceiling = kDefaultCeiling) {
    const auto& f = *inst.field();
    const std::uint64_t q = f.q();
    check_capacity(inst.points().size() * inst.lines().size(), ceiling, "incidence scan");

    IncidenceReport rep;
    for (const auto& [px, py] : inst.points()) {
        for (const auto& [slope, intercept] : inst.lines()) {
            if (f.add(f.mul(slope, px), intercept) == py) {
                ++rep.incidences;
                if (px == 0) ++rep.zero_x_incidences;
            }
        }
    }
    const std::uint64_t pl = inst.points().size() * inst.lines().size();
    rep.main_term = Rational(static_cast<std::int64_t>(pl), static_cast<std::int64_t>(q));
    if (pl > 0) {
        rep.normalized_error =
            (static_cast<double>(rep.incidences) - rep.main_term.to_double()) /
            std::sqrt(static_cast<double>(pl) * static_cast<double>(q));
    }
    rep.within = std::fabs(rep.normalized_error) <= rep.error_bound;

    // incidence (slope, intercept) ~ (px, py) with px != 0  <=>  b + b' in A
    // for A = {(x, g^x)}, b = (log slope, -intercept), b' = (log px, py)
    const SidonSet welch = construct_welch(inst.field(), f.generator());
    const auto logs = f.log_table(f.generator_code());
    std::vector<std::uint64_t> b_idx, bp_idx;
    for (const auto& [slope, intercept] : inst.lines())
        b_idx.push_back(static_cast<std::uint64_t>(logs[slope]) * q + f.neg(intercept));
    for (const auto& [px, py] : inst.points())
        if (px != 0) bp_idx.push_back(static_cast<std::uint64_t>(logs[px]) * q + py);
    const ElementSet b(welch.group(), std::move(b_idx));
    const ElementSet bp(welch.group(), std::move(bp_idx));
    rep.log_encoding = theta_report(welch, b, bp, PairCountStrategy::Auto, ceiling);
    return rep;
}

// --- difference cover {g^x - g^y} --------------------------------------------

struct DifferenceCoverReport {
    std::uint64_t prime = 0;
    std::uint64_t generator_code = 0;
    std::uint64_t m_min = 0;
    double ratio = 0.0; // m_min / p^{3/4}
};

/* Smallest M with {g^x - g^y : 0 <= x, y <= M} = F_p, grown incrementally;
   each step adds only the differences involving the new power. */
inline DifferenceCoverReport difference_cover_min(const FieldPtr& f, const FieldElement& g) {
    if (f->k() != 1) throw DomainError("difference cover is defined over prime fields");
    if (f->q() < 3) throw DomainError("difference cover needs p >= 3");
    if (!f->is_generator_code(g.code()))
        throw NotGeneratorError("difference cover requires a generator");
    const std::uint64_t p = f->q();

    std::vector<bool> covered(p, false);
    covered[0] = true;
    std::uint64_t count = 1;
    std::vector<std::uint64_t> powers{1};
    std::uint64_t m = 0;
    while (count < p) {
        ++m;
        const std::uint64_t fresh = f->mul(powers.back(), g.code());
        for (std::uint64_t old : powers) {
            for (std::uint64_t d : {f->sub(fresh, old), f->sub(old, fresh)}) {
                if (!covered[d]) { covered[d] = true; ++count; }
            }
        }
        powers.push_back(fresh);
    }
    DifferenceCoverReport rep;
    rep.prime = p;
    rep.generator_code = g.code();
    rep.m_min = m;
    const double dp = static_cast<double>(p);
    rep.ratio = static_cast<double>(m) / (std::sqrt(dp) * detail::fourth_root(dp));
    return rep;
}

// --- sum-product inequalities ------------------------------------------------

struct SumProductReport {
    std::uint64_t product_size = 0; // |A1 A2|        (shifted: |(A1+1) A2|)
    std::uint64_t sum_size = 0;     // |A1 + A3|      (shifted: |A1 A3|)
    std::uint64_t lhs = 0;          // |A1|
    double rhs = 0.0;
    bool holds = true;
};

namespace detail {

/* |A1| <= PS/q + sqrt(q PS / (|A2||A3|)) with PS = product_size * sum_size;
   the witness inequality shared by the three sum-product checks. */
inline SumProductReport sum_product_verdict(std::uint64_t q, std::uint64_t a1,
                                            std::uint64_t a2, std::uint64_t a3,
                                            std::uint64_t product_size,
                                            std::uint64_t sum_size) {
    SumProductReport rep;
    rep.product_size = product_size;
    rep.sum_size = sum_size;
    rep.lhs = a1;
    const std::uint64_t ps = product_size * sum_size;
    const Rational residue = Rational(static_cast<std::int64_t>(a1)) -
                             Rational(static_cast<std::int64_t>(ps), static_cast<std::int64_t>(q));
    rep.holds = within_sqrt_bound(residue,
                                  static_cast<unsigned __int128>(q) * ps,
                                  static_cast<unsigned __int128>(a2) * a3);
    rep.rhs = static_cast<double>(ps) / static_cast<double>(q) +
              std::sqrt(static_cast<double>(q) * static_cast<double>(ps) /
                        (static_cast<double>(a2) * static_cast<double>(a3)));
    return rep;
}

inline void require_nonempty(const FieldSubset& s, const char* name) {
    if (s.is_empty()) throw EmptySetError(std::string(name) + " must be nonempty");
}
inline void require_unit_subset(const FieldSubset& s, const char* name) {
    if (s.contains_zero())
        throw ZeroElementError(std::string(name) + " must avoid zero");
}

} // namespace detail

// max(|A1 A2|, |A1 + A3|) witness inequality; A1, A2 in F_q^*, A3 in F_q.
inline SumProductReport sum_product_check(const FieldSubset& a1, const FieldSubset& a2,
                                          const FieldSubset& a3,
                                          std::uint64_t ceiling = kDefaultCeiling) {
    detail::check_same_field(a1, a2);
    detail::check_same_field(a1, a3);
    detail::require_nonempty(a1, "A1");
    detail::require_nonempty(a2, "A2");
    detail::require_nonempty(a3, "A3");
    detail::require_unit_subset(a1, "A1");
    detail::require_unit_subset(a2, "A2");
    const std::uint64_t prod = field_productset(a1, a2, ceiling).size();
    const std::uint64_t sum = field_sumset(a1, a3, ceiling).size();
    return detail::sum_product_verdict(a1.field()->q(), a1.size(), a2.size(), a3.size(),
                                       prod, sum);
}

// max(|(A1+1) A2|, |A1 A3|) variant; A1, A2, A3 in F_q^* and -1 not in A1.
inline SumProductReport shifted_product_check(const FieldSubset& a1, const FieldSubset& a2,
                                              const FieldSubset& a3,
                                              std::uint64_t ceiling = kDefaultCeiling) {
    detail::check_same_field(a1, a2);
    detail::check_same_field(a1, a3);
    detail::require_nonempty(a1, "A1");
    detail::require_nonempty(a2, "A2");
    detail::require_nonempty(a3, "A3");
    detail::require_unit_subset(a1, "A1");
    detail::require_unit_subset(a2, "A2");
    detail::require_unit_subset(a3, "A3");
    const auto& f = *a1.field();
    if (a1.contains(f.neg(1)))
        throw DomainError("A1 must avoid -1 so that A1 + 1 stays in the unit group");
    const std::uint64_t prod = field_productset(a1.shifted(1), a2, ceiling).size();
    const std::uint64_t sum = field_productset(a1, a3, ceiling).size();
    return detail::sum_product_verdict(f.q(), a1.size(), a2.size(), a3.size(), prod, sum);
}

struct PolynomialSumReport {
    std::uint64_t p_image_sum_size = 0; // |p(A1) + A2|
    std::uint64_t r_image_sum_size = 0; // |r(A1) + A3|
    std::uint64_t lhs = 0;              // |A1|
    std::uint64_t intersection = 0;     // |A cap (p(A1) x r(A1))|
    bool injective_on_a1 = true;
    double rhs = 0.0;
    bool holds = true;
};

// max(|p(A1) + A2|, |r(A1) + A3|) variant through the parabolic set.
inline PolynomialSumReport polynomial_sum_check(const FieldPtr& f, const Polynomial& p_poly,
                                                const Polynomial& r_poly,
                                                const FieldSubset& a1, const FieldSubset& a2,
                                                const FieldSubset& a3,
                                                std::uint64_t ceiling = kDefaultCeiling) {
    detail::check_same_field(a1, a2);
    detail::check_same_field(a1, a3);
    detail::require_nonempty(a1, "A1");
    detail::require_nonempty(a2, "A2");
    detail::require_nonempty(a3, "A3");
    const SidonSet parabola = construct_parabolic(f, p_poly, r_poly);
    // the inequality is a statement about a Sidon set; admissible pairs can
    // still fail the property (constant r, characteristic 2), so check it
    if (!verify_sidon(parabola, ceiling).is_sidon)
        throw DomainError("the polynomial pair does not produce a Sidon set here");
    const std::uint64_t q = f->q();

    const FieldSubset p_image = a1.mapped(
        [&](std::uint64_t c) { return detail::eval_in_field(*f, p_poly, c); });
    const FieldSubset r_image = a1.mapped(
        [&](std::uint64_t c) { return detail::eval_in_field(*f, r_poly, c); });

    PolynomialSumReport rep;
    rep.lhs = a1.size();
    rep.p_image_sum_size = field_sumset(p_image, a2, ceiling).size();
    rep.r_image_sum_size = field_sumset(r_image, a3, ceiling).size();

    // x -> (p(x), r(x)) restricted to A1; global injectivity already holds
    // for any set the parabolic constructor accepted
    std::vector<std::uint64_t> pairs;
    for (std::uint64_t c : a1.codes()) {
        pairs.push_back(detail::eval_in_field(*f, p_poly, c) * q +
                        detail::eval_in_field(*f, r_poly, c));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    rep.injective_on_a1 = pairs.size() == a1.size();

    // |A cap B| for B = p(A1) x r(A1)
    for (std::uint64_t x = 0; x < q; ++x) {
        if (p_image.contains(detail::eval_in_field(*f, p_poly, x)) &&
            r_image.contains(detail::eval_in_field(*f, r_poly, x)))
            ++rep.intersection;
    }

    const std::uint64_t ps = rep.p_image_sum_size * rep.r_image_sum_size;
    const Rational residue = Rational(static_cast<std::int64_t>(rep.lhs)) -
                             Rational(static_cast<std::int64_t>(ps), static_cast<std::int64_t>(q));
    rep.holds = detail::within_sqrt_bound(residue,
                                          static_cast<unsigned __int128>(q) * ps,
                                          static_cast<unsigned __int128>(a2.size()) * a3.size());
    rep.rhs = static_cast<double>(ps) / static_cast<double>(q) +
              std::sqrt(static_cast<double>(q) * static_cast<double>(ps) /
                        (static_cast<double>(a2.size()) * static_cast<double>(a3.size())));
    return rep;
}

// --- fibered equation counting -----------------------------------------------

/* An indexed family x -> X(x) of subsets of F_q with total mass
   sum_x |X(x)|. Fiber keys and values are element codes. */
class FiberedFamily {
public:
    FiberedFamily(FieldPtr base, std::map<std::uint64_t, std::vector<std::uint64_t>> fibers)
        : base_(std::move(base)), fibers_(std::move(fibers)) {
        mass_ = 0;
        for (auto& [key, values] : fibers_) {
            if (key >= base_->q()) throw DomainError("fiber key out of range");
            for (auto v : values) {
                if (v >= base_->q()) throw DomainError("fiber value out of range");
            }
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            mass_ += values.size();
        }
    }

    const FieldPtr& base() const { return base_; }
    const std::map<std::uint64_t, std::vector<std::uint64_t>>& fibers() const {
        return fibers_;
    }
    std::uint64_t mass() const { return mass_; }

    static FiberedFamily constant(const FieldPtr& base, const FieldSubset& keys,
                                  const FieldSubset& value_set) {
        std::map<std::uint64_t, std::vector<std::uint64_t>> fibers;
        for (std::uint64_t k : keys.codes()) fibers[k] = value_set.codes();
        return FiberedFamily(base, std::move(fibers));
    }

private:
    FieldPtr base_;
    std::map<std::uint64_t, std::vector<std::uint64_t>> fibers_;
    std::uint64_t mass_;
};

enum class FiberedKind {
    SquareOfSum, // x' + y' = (x + y)^2
    Product,     // x' + y' = x y         (keys in F_q^*)
    Hyperbola,   // x y - x' y' = 1       (keys and values in F_q^*)
};

/* Exact solution count S of the kind's equation with x' in X(x), y' in Y(y),
   reported against the exact main term |A| T / |G| of the underlying Sidon
   set, theta = (S - main)/sqrt(qT), bound 1 + max(0,delta)|B'|/|G|. */
inline CountReport fibered_solution_count(FiberedKind kind, const FiberedFamily& xf,
                                          const FiberedFamily& yf,
                                          std::uint64_t ceiling = kDefaultCeiling) {
    const FieldPtr& f = xf.base();
    if (!f->same_structure(*yf.base()))
        throw FieldMismatchError("fibered families over different fields");
    const std::uint64_t q = f->q();

    const bool unit_keys = kind != FiberedKind::SquareOfSum;
    const bool unit_values = kind == FiberedKind::Hyperbola;
    for (const auto* fam : {&xf, &yf}) {
        for (const auto& [key, values] : fam->fibers()) {
            if (unit_keys && key == 0)
                throw DomainError("fiber keys must lie in the unit group");
            if (unit_values && !values.empty() && values.front() == 0)
                throw DomainError("fiber values must lie in the unit group");
        }
    }

    // squaring is additive in characteristic 2, so {(x, x^2)} is not a Sidon
    // set there and the bound below has no backing
    if (kind == FiberedKind::SquareOfSum && f->p() == 2 && q > 2)
        throw DomainError("the squared-sum count requires odd characteristic");

    SidonSet sidon = [&] {
        switch (kind) {
            case FiberedKind::SquareOfSum:
                return construct_parabolic(f, Polynomial::x(f->p()),
                                           Polynomial(f->p(), {0, 0, 1}));
            case FiberedKind::Product:
                return construct_welch(f, f->generator());
            case FiberedKind::Hyperbola:
            default:
                return construct_golomb(f, f->generator(), f->generator(), f->one(),
                                        GolombSign::Minus);
        }
    }();

    std::vector<std::uint32_t> logs;
    if (kind != FiberedKind::SquareOfSum) logs = f->log_table(f->generator_code());

    auto encode = [&](std::uint64_t key, std::uint64_t value) -> std::uint64_t {
        switch (kind) {
            case FiberedKind::SquareOfSum:
                return key * q + value;
            case FiberedKind::Product:
                return static_cast<std::uint64_t>(logs[key]) * q + value;
            case FiberedKind::Hyperbola:
            default:
                return static_cast<std::uint64_t>(logs[key]) * (q - 1) + logs[value];
        }
    };

    auto pack = [&](const FiberedFamily& fam) {
        std::vector<std::uint64_t> idx;
        idx.reserve(fam.mass());
        for (const auto& [key, values] : fam.fibers())
            for (std::uint64_t v : values) idx.push_back(encode(key, v));
        return ElementSet(sidon.group(), std::move(idx));
    };
    const ElementSet b = pack(xf);
    const ElementSet bp = pack(yf);

    const std::uint64_t order = sidon.group()->order();
    const double delta = sidon.delta();
    CountReport rep;
    rep.sizes = {sidon.size(), b.size(), bp.size(), order, delta};
    rep.theta_bound = 1.0 + std::max(0.0, delta) * static_cast<double>(bp.size()) /
                                static_cast<double>(order);
    if (b.is_empty() || bp.is_empty()) {
        rep.main_term = Rational(0);
        return rep;
    }
    rep.count = pair_count(sidon, b, bp, PairCountStrategy::Auto, ceiling);
    rep.main_term =
        Rational(static_cast<std::int64_t>(sidon.size() * b.size() * bp.size()),
                 static_cast<std::int64_t>(order));
    const std::uint64_t t = b.size() * bp.size();
    rep.theta = (static_cast<double>(rep.count) - rep.main_term.to_double()) /
                std::sqrt(static_cast<double>(q) * static_cast<double>(t));
    rep.within_bound = std::fabs(rep.theta) <= rep.theta_bound;
    return rep;
}

// --- named equation corollaries ----------------------------------------------

enum class NamedEquation {
    SquareSum,  // x1 + x2 = (x3 + x4)^2
    ProductSum, // x1 x2 = x3 + x4        (x1, x2 in F_q^*)
    Bilinear,   // x2 x3 - x1 x4 = 1      (x1, x2 in F_q^*)
    Shkredov,   // exists (x, y): x + y in X1, x y in X2
};

struct EquationReport {
    CountReport report;
    // Shkredov only: solution existence and whether |X1||X2| > 2q held.
    std::optional<bool> exists;
    std::optional<bool> hypothesis_met;
};

namespace detail {

/* Count of (x1, x2, z) with (x1/2)^2 - x2 = z^2, which is in bijection with
   the pairs (x, y) satisfying x + y in X1, x y in X2 via x1 = x+y,
   z = (x-y)/2. Needs odd q. */
inline EquationReport shkredov_count(const FieldPtr& f, const FieldSubset& x1,
                                     const FieldSubset& x2) {
    if (f->p() == 2)
        throw EvenCharacteristicError("the Shkredov count divides by 2; q must be odd");
    const std::uint64_t q = f->q();
    std::vector<std::uint32_t> sqrt_count(q, 0);
    for (std::uint64_t z = 0; z < q; ++z) ++sqrt_count[f->mul(z, z)];
    const std::uint64_t half = f->inv(2);

    std::uint64_t s = 0;
    for (std::uint64_t c1 : x1.codes()) {
        const std::uint64_t h = f->mul(c1, half);
        const std::uint64_t h2 = f->mul(h, h);
        for (std::uint64_t c2 : x2.codes()) s += sqrt_count[f->sub(h2, c2)];
    }

    EquationReport out;
    out.report.count = s;
    const std::uint64_t m = x1.size() * x2.size();
    out.report.main_term = Rational(static_cast<std::int64_t>(m));
    out.report.sizes = {0, x1.size(), x2.size(), q, 0.0};
    out.report.theta_bound = 1.0;
    if (m > 0) {
        out.report.theta = (static_cast<double>(s) - static_cast<double>(m)) /
                           std::sqrt(2.0 * static_cast<double>(m) * static_cast<double>(q));
    }
    out.report.within_bound = std::fabs(out.report.theta) <= out.report.theta_bound;
    out.exists = s > 0;
    out.hypothesis_met = m > 2 * q;
    return out;
}

} // namespace detail

/* The corollaries' solution counts, realized as indicator-fibered instances
   of fibered_solution_count. X3/X4 are ignored by the Shkredov variant. */
inline EquationReport named_equation_count(NamedEquation eq, const FieldSubset& x1,
                                           const FieldSubset& x2, const FieldSubset& x3,
                                           const FieldSubset& x4,
                                           std::uint64_t ceiling = kDefaultCeiling) {
    detail::check_same_field(x1, x2);
    const FieldPtr& f = x1.field();
    switch (eq) {
        case NamedEquation::SquareSum: {
            detail::check_same_field(x1, x3);
            detail::check_same_field(x1, x4);
            EquationReport out;
            out.report = fibered_solution_count(
                FiberedKind::SquareOfSum, FiberedFamily::constant(f, x3, x1),
                FiberedFamily::constant(f, x4, x2), ceiling);
            return out;
        }
        case NamedEquation::ProductSum: {
            detail::check_same_field(x1, x3);
            detail::check_same_field(x1, x4);
            if (x1.contains_zero() || x2.contains_zero())
                throw DomainError("X1 and X2 must lie in the unit group");
            EquationReport out;
            out.report = fibered_solution_count(
                FiberedKind::Product, FiberedFamily::constant(f, x1, x3),
                FiberedFamily::constant(f, x2, x4), ceiling);
            return out;
        }
        case NamedEquation::Bilinear: {
            detail::check_same_field(x1, x3);
            detail::check_same_field(x1, x4);
            if (x1.contains_zero() || x2.contains_zero())
                throw DomainError("X1 and X2 must lie in the unit group");
            // X(x) = x X3 on X1^{-1}, Y(y) = -y X4 on X2^{-1} turns
            // x' + y' = x y into x2 x3 - x1 x4 = 1
            std::map<std::uint64_t, std::vector<std::uint64_t>> xf, yf;
            for (std::uint64_t c : x1.codes()) {
                const std::uint64_t key = f->inv(c);
                auto& fiber = xf[key];
                for (std::uint64_t t : x3.codes()) fiber.push_back(f->mul(key, t));
            }
            for (std::uint64_t c : x2.codes()) {
                const std::uint64_t key = f->inv(c);
                auto& fiber = yf[key];
                for (std::uint64_t t : x4.codes())
                    fiber.push_back(f->neg(f->mul(key, t)));
            }
            EquationReport out;
            out.report = fibered_solution_count(FiberedKind::Product,
                                                FiberedFamily(f, std::move(xf)),
                                                FiberedFamily(f, std::move(yf)), ceiling);
            return out;
        }
        case NamedEquation::Shkredov:
        default:
            return detail::shkredov_count(f, x1, x2);
    }
}

// --- Fermat equation on power subgroups --------------------------------------

struct FermatReport {
    std::uint64_t q = 0;
    unsigned r = 0, s = 0;
    std::vector<std::uint64_t> subgroup_q;  // Q  = {x^r}
    std::vector<std::uint64_t> subgroup_qp; // Q' = {y^s}
    std::uint64_t count = 0;                // |{(x,y) in Q x Q' : x + y = 1}|
    Rational main_term;                     // |Q||Q'|/q
    double error_bound = 0.0;               // 2 sqrt(q)
    bool within = true;
    bool has_nontrivial = false;
    bool guaranteed = false; // |Q||Q'|/q > 2 sqrt(q), which forces count > 0
};

inline FermatReport fermat_subgroup(const FieldPtr& f, unsigned r, unsigned s) {
    if (r < 1 || s < 1) throw DomainError("exponents must be >= 1");
    const std::uint64_t q = f->q();
    const std::uint64_t n = q - 1;
    auto power_subgroup = [&](unsigned e) {
        const std::uint64_t d = std::gcd(static_cast<std::uint64_t>(e), n);
        const std::uint64_t step = f->pow(f->generator_code(), static_cast<std::int64_t>(d));
        std::vector<std::uint64_t> out;
        out.reserve(n / d);
        std::uint64_t cur = 1;
        for (std::uint64_t i = 0; i < n / d; ++i) {
            out.push_back(cur);
            cur = f->mul(cur, step);
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    FermatReport rep;
    rep.q = q;
    rep.r = r;
    rep.s = s;
    rep.subgroup_q = power_subgroup(r);
    rep.subgroup_qp = power_subgroup(s);
    for (std::uint64_t a : rep.subgroup_q) {
        const std::uint64_t need = f->sub(1, a);
        if (std::binary_search(rep.subgroup_qp.begin(), rep.subgroup_qp.end(), need))
            ++rep.count;
    }
    const std::uint64_t qq = rep.subgroup_q.size() * rep.subgroup_qp.size();
    rep.main_term = Rational(static_cast<std::int64_t>(qq), static_cast<std::int64_t>(q));
    rep.error_bound = 2.0 * std::sqrt(static_cast<double>(q));

    // |count - |Q||Q'|/q| <= 2 sqrt(q), exactly: (count q - |Q||Q'|)^2 <= 4 q^3
    const __int128 diff = static_cast<__int128>(rep.count) * q - static_cast<__int128>(qq);
    rep.within = diff * diff <= static_cast<__int128>(4) * q * q * q;
    rep.has_nontrivial = rep.count > 0;
    // |Q||Q'| > 2 q^{3/2}  <=>  (|Q||Q'|)^2 > 4 q^3
    rep.guaranteed =
        static_cast<__int128>(qq) * qq > static_cast<__int128>(4) * q * q * q;
    return rep;
}

// --- interval statistics -----------------------------------------------------

/* A cyclic interval {start, start+1, ..., start+length-1} mod modulus. */
struct IntervalSpec {
    std::uint64_t start = 0;
    std::uint64_t length = 1;
    std::uint64_t modulus = 1;

    IntervalSpec(std::uint64_t start_, std::uint64_t length_, std::uint64_t modulus_)
        : start(start_), length(length_), modulus(modulus_) {
        if (modulus == 0) throw DomainError("interval modulus must be positive");
        if (length < 1 || length > modulus)
            throw DomainError("interval length must satisfy 1 <= length <= modulus");
        if (start >= modulus) throw DomainError("interval start out of range");
    }

    bool contains(std::uint64_t x) const {
        return (x + modulus - start) % modulus < length;
    }
    std::uint64_t nth(std::uint64_t i) const { return (start + i) % modulus; }
};

struct IntervalReport {
    std::uint64_t count = 0;   // |{(x,y) in I x J : g^x - g^y = lambda}|
    Rational main_term;        // |I||J|/p
    unsigned r = 1;
    double bound = 0.0; // 4^r ((|I||J|/p^{3/2})^{1/r} + 1) sqrt(p)
    bool within = true;
};

inline IntervalReport interval_distribution(const FieldPtr& f, const FieldElement& g,
                                            const IntervalSpec& i_spec,
                                            const IntervalSpec& j_spec,
                                            const FieldElement& lambda, unsigned r) {
    if (f->k() != 1) throw DomainError("interval distribution is defined over prime fields");
    if (lambda.is_zero()) throw LambdaZeroError("lambda must be nonzero");
    if (r < 1) throw DomainError("r must be >= 1");
    const std::uint64_t p = f->q();
    if (i_spec.modulus != p - 1 || j_spec.modulus != p - 1)
        throw DomainError("intervals must live in Z_{p-1}");
    if (!f->is_generator_code(g.code()))
        throw NotGeneratorError("interval distribution requires a generator");

    const auto logs = f->log_table(g.code());
    IntervalReport rep;
    rep.r = r;
    std::uint64_t gx = f->pow(g.code(), static_cast<std::int64_t>(i_spec.start));
    for (std::uint64_t i = 0; i < i_spec.length; ++i) {
        const std::uint64_t w = f->sub(gx, lambda.code()); // g^y = g^x - lambda
        if (w != 0 && j_spec.contains(logs[w])) ++rep.count;
        gx = f->mul(gx, g.code());
    }
    const std::uint64_t ij = i_spec.length * j_spec.length;
    rep.main_term = Rational(static_cast<std::int64_t>(ij), static_cast<std::int64_t>(p));
    const double dp = static_cast<double>(p);
    const double density = static_cast<double>(ij) / (dp * std::sqrt(dp));
    rep.bound = std::pow(4.0, static_cast<double>(r)) *
                (std::pow(density, 1.0 / static_cast<double>(r)) + 1.0) * std::sqrt(dp);
    rep.within = std::fabs(static_cast<double>(rep.count) - rep.main_term.to_double()) <=
                 rep.bound;
    return rep;
}

enum class ImageKind {
    Square, // |{x in I : x^2 in J}|
    Exp,    // |{x in I : g^x in J}|
};

/* The closing-remark counts, realized as |A cap (I x J)| for the parabolic
   (square) or logarithmic (exp) Sidon set; reported as a discrepancy. */
inline DiscrepancyReport interval_image_count(const FieldPtr& f, ImageKind kind,
                                              const IntervalSpec& i_spec,
                                              const IntervalSpec& j_spec) {
    if (f->k() != 1) throw DomainError("interval image counts are defined over prime fields");
    const std::uint64_t p = f->q();
    if (j_spec.modulus != p) throw DomainError("J must live in Z_p");

    std::uint64_t count = 0;
    if (kind == ImageKind::Square) {
        if (i_spec.modulus != p) throw DomainError("I must live in Z_p for the square map");
        for (std::uint64_t i = 0; i < i_spec.length; ++i) {
            const std::uint64_t x = i_spec.nth(i);
            if (j_spec.contains(f->mul(x, x))) ++count;
        }
    } else {
        if (i_spec.modulus != p - 1)
            throw DomainError("I must live in Z_{p-1} for the exponential map");
        const std::uint64_t g = f->generator_code();
        std::uint64_t gx = f->pow(g, static_cast<std::int64_t>(i_spec.start));
        for (std::uint64_t i = 0; i < i_spec.length; ++i) {
            if (j_spec.contains(gx)) ++count;
            gx = f->mul(gx, g);
        }
    }

    DiscrepancyReport rep;
    rep.intersection = count;
    // both realizations have |A|/|G| = 1/p
    rep.discrepancy =
        Rational(static_cast<std::int64_t>(count)) -
        Rational(static_cast<std::int64_t>(i_spec.length * j_spec.length),
                 static_cast<std::int64_t>(p));
    return rep;
}

} // namespace sidonlab
