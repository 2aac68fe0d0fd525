#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sidonlab/errors.hpp"
#include "sidonlab/group.hpp"

namespace sidonlab {

enum class GolombSign { Plus, Minus };

struct ParabolicConstruction {
    Polynomial p_poly;
    Polynomial r_poly;
};
struct WelchConstruction {
    std::uint64_t generator_code;
};
struct GolombConstruction {
    std::uint64_t g1_code;
    std::uint64_t g2_code;
    std::uint64_t lambda_code;
    GolombSign sign;
};
struct ExplicitConstruction {};

using SidonConstruction = std::variant<ParabolicConstruction, WelchConstruction,
                                       GolombConstruction, ExplicitConstruction>;

/* A candidate Sidon set: element set plus how it was built. delta() is the
   deficiency sqrt(|G|) - |A|; delta_sign() decides its sign exactly on
   integers, with no floating point involved. */
class SidonSet {
public:
    SidonSet(GroupPtr group, ElementSet elements, SidonConstruction construction,
             FieldPtr base_field)
        : group_(std::move(group)), elements_(std::move(elements)),
          construction_(std::move(construction)), base_field_(std::move(base_field)) {}

    static SidonSet explicit_set(const GroupPtr& group,
                                 const std::vector<GroupElement>& elems) {
        return SidonSet(group, ElementSet::from_elements(group, elems),
                        ExplicitConstruction{}, nullptr);
    }

    const GroupPtr& group() const { return group_; }
    const ElementSet& elements() const { return elements_; }
    std::vector<GroupElement> elements_list() const { return elements_.elements(); }
    const SidonConstruction& construction() const { return construction_; }

    // Field the construction lives over; null for explicit sets.
    const FieldPtr& base_field() const { return base_field_; }

    std::uint64_t size() const { return elements_.size(); }

    double delta() const {
        const std::uint64_t g = group_->order();
        const std::uint64_t s = isqrt(g);
        double root = (s * s == g) ? static_cast<double>(s)
                                   : std::sqrt(static_cast<double>(g));
        return root - static_cast<double>(size());
    }

    // sign of sqrt(|G|) - |A|: -1, 0 or +1, decided by comparing |A|^2 to |G|.
    int delta_sign() const {
        const std::uint64_t a2 = size() * size();
        if (a2 == group_->order()) return 0;
        return a2 < group_->order() ? 1 : -1;
    }

    SidonSet translated(const GroupElement& t) const {
        if (!t.group()->same_structure(*group_))
            throw GroupMismatchError("translation by element of a different group");
        return SidonSet(group_, elements_.translated(t.index()), ExplicitConstruction{},
                        base_field_);
    }

    static std::uint64_t isqrt(std::uint64_t n) {
        auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
        while (r > 0 && r * r > n) --r;
        while ((r + 1) * (r + 1) <= n) ++r;
        return r;
    }

private:
    GroupPtr group_;
    ElementSet elements_;
    SidonConstruction construction_;
    FieldPtr base_field_;
};

struct SidonVerdict {
    bool is_sidon = false;
    // (a, a', b, b') with a - a' = b - b' != 0 and {a,a'} != {b,b'}; present
    // exactly when is_sidon is false.
    std::optional<std::array<GroupElement, 4>> witness;
};

inline double sidon_delta(const SidonSet& a) { return a.delta(); }

/* Exhaustive check of the defining property: every nonzero difference is
   realized by at most one unordered pair. O(|A|^2) tallying. */
inline SidonVerdict verify_sidon(const SidonSet& a,
                                 std::uint64_t ceiling = kDefaultCeiling) {
    const auto& idx = a.elements().indices();
    const std::uint64_t n = idx.size();
    check_capacity(n * n, ceiling, "Sidon verification");
    const auto& g = *a.group();

    // difference index -> packed (i, j) of the first ordered pair seen
    std::unordered_map<std::uint64_t, std::uint64_t> first_pair;
    first_pair.reserve(n * n);
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const std::uint64_t d = g.sub_indices(idx[i], idx[j]);
            auto [it, inserted] = first_pair.emplace(d, (i << 32) | j);
            if (inserted) continue;
            const std::uint64_t pi = it->second >> 32, pj = it->second & 0xffffffffULL;
            if ((pi == i && pj == j) || (pi == j && pj == i)) continue; // same unordered pair
            SidonVerdict verdict;
            verdict.is_sidon = false;
            verdict.witness = {{g.element_at(idx[pi]), g.element_at(idx[pj]),
                                g.element_at(idx[i]), g.element_at(idx[j])}};
            return verdict;
        }
    }
    return SidonVerdict{true, std::nullopt};
}

namespace detail {

// Lift a prime-subfield polynomial to field coefficients and evaluate at x.
inline std::uint64_t eval_in_field(const Field& f, const Polynomial& poly,
                                   std::uint64_t x_code) {
    std::uint64_t acc = 0;
    const auto& c = poly.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) {
        acc = f.add(f.mul(acc, x_code), c[i] % f.p());
    }
    return acc;
}

/* Admissibility of a polynomial pair: degrees at most 2 and p - mu*r
   non-constant for every mu in F_q (checked exhaustively). */
inline void check_polynomial_pair(const Field& f, const Polynomial& p_poly,
                                  const Polynomial& r_poly) {
    if (p_poly.degree() > 2)
        throw DegreeError("first polynomial has degree > 2");
    if (r_poly.degree() > 2)
        throw DegreeError("second polynomial has degree > 2");
    if (p_poly.characteristic() != f.p() || r_poly.characteristic() != f.p())
        throw DomainError("polynomial characteristic does not match the field");
    // coefficient i of p - mu*r in F_q is p_i - mu*r_i (subfield lift)
    const std::uint64_t p1 = p_poly.coeff(1) % f.p(), p2 = p_poly.coeff(2) % f.p();
    const std::uint64_t r1 = r_poly.coeff(1) % f.p(), r2 = r_poly.coeff(2) % f.p();
    for (std::uint64_t mu = 0; mu < f.q(); ++mu) {
        const bool lin_zero = f.sub(p1, f.mul(mu, r1)) == 0;
        const bool quad_zero = f.sub(p2, f.mul(mu, r2)) == 0;
        if (lin_zero && quad_zero) {
            throw DegenerateFamilyError(
                "p - mu*r is constant for mu with code " + std::to_string(mu));
        }
    }
}

} // namespace detail

/* {(p(x), r(x)) : x in F_q} inside F_q x F_q. Requires the pair to be
   admissible and the evaluation map injective; |A| = q and delta = 0. */
inline SidonSet construct_parabolic(const FieldPtr& f, const Polynomial& p_poly,
                                    const Polynomial& r_poly) {
    detail::check_polynomial_pair(*f, p_poly, r_poly);
    auto group = AmbientGroup::create({FieldDescriptor{f}, FieldDescriptor{f}});
    const std::uint64_t q = f->q();
    std::vector<std::uint64_t> idx;
    idx.reserve(q);
    for (std::uint64_t x = 0; x < q; ++x) {
        const std::uint64_t u = detail::eval_in_field(*f, p_poly, x);
        const std::uint64_t v = detail::eval_in_field(*f, r_poly, x);
        idx.push_back(u * q + v);
    }
    ElementSet elems(group, std::move(idx));
    if (elems.size() != q) {
        throw DegenerateFamilyError(
            "evaluation map x -> (p(x), r(x)) is not injective");
    }
    return SidonSet(group, std::move(elems),
                    ParabolicConstruction{p_poly, r_poly}, f);
}

// {(x, g^x) : x in Z_{q-1}} inside Z_{q-1} x F_q; |A| = q - 1.
inline SidonSet construct_welch(const FieldPtr& f, const FieldElement& g) {
    if (!f->is_generator_code(g.code()))
        throw NotGeneratorError("Welch construction requires a generator");
    const std::uint64_t q = f->q();
    auto group = AmbientGroup::create(
        {CyclicDescriptor{q - 1}, FieldDescriptor{f}});
    std::vector<std::uint64_t> idx;
    idx.reserve(q - 1);
    std::uint64_t cur = 1;
    for (std::uint64_t x = 0; x + 1 < q; ++x) {
        idx.push_back(x * q + cur);
        cur = f->mul(cur, g.code());
    }
    return SidonSet(group, ElementSet(group, std::move(idx)),
                    WelchConstruction{g.code()}, f);
}

/* {(x, y) : g1^x +- g2^y = lambda} inside Z_{q-1} x Z_{q-1}; |A| = q - 2
   for every lambda != 0. */
inline SidonSet construct_golomb(const FieldPtr& f, const FieldElement& g1,
                                 const FieldElement& g2, const FieldElement& lambda,
                                 GolombSign sign) {
    if (lambda.is_zero()) throw LambdaZeroError("Golomb construction needs lambda != 0");
    if (!f->is_generator_code(g1.code()) || !f->is_generator_code(g2.code()))
        throw NotGeneratorError("Golomb construction requires two generators");
    const std::uint64_t q = f->q();
    auto group = AmbientGroup::create(
        {CyclicDescriptor{q - 1}, CyclicDescriptor{q - 1}});
    const auto logs = f->log_table(g2.code());
    std::vector<std::uint64_t> idx;
    idx.reserve(q - 2);
    std::uint64_t cur = 1; // g1^x
    for (std::uint64_t x = 0; x + 1 < q; ++x) {
        // g2^y = lambda - g1^x   (plus)   or   g2^y = g1^x - lambda   (minus)
        const std::uint64_t rhs = sign == GolombSign::Plus
                                      ? f->sub(lambda.code(), cur)
                                      : f->sub(cur, lambda.code());
        if (rhs != 0) idx.push_back(x * (q - 1) + logs[rhs]);
        cur = f->mul(cur, g1.code());
    }
    return SidonSet(group, ElementSet(group, std::move(idx)),
                    GolombConstruction{g1.code(), g2.code(), lambda.code(), sign}, f);
}

} // namespace sidonlab
