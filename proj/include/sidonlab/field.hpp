#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sidonlab/errors.hpp"
#include "sidonlab/polynomial.hpp"

namespace sidonlab {

class Field;
class FieldElement;
using FieldPtr = std::shared_ptr<const Field>;

/* Arithmetic in F_q, q = p^k. Elements are addressed by their code in
   [0, q): the residue itself for k = 1, the base-p packing of the reduced
   polynomial coefficients (constant term least significant) for k > 1.
   Code order is the canonical enumeration order everywhere in the library.

   A Field is immutable once created; the generator is found on first use
   and cached under a once-flag, so shared instances are safe to use from
   any number of threads. */
class Field : public std::enable_shared_from_this<Field> {
public:
    /* For k > 1 with no modulus supplied, picks the monic irreducible of
       degree k whose non-leading coefficient code is smallest; a supplied
       modulus is normalized to monic and verified irreducible. */
    static FieldPtr create(std::uint64_t p, unsigned k = 1,
                           std::optional<Polynomial> modulus = std::nullopt) {
        if (!is_prime(p)) {
            throw PrimalityError("field characteristic " + std::to_string(p) +
                                 " is not prime");
        }
        if (k < 1) throw DomainError("extension degree must be >= 1");
        std::uint64_t q = 1;
        for (unsigned i = 0; i < k; ++i) {
            if (q > (std::uint64_t{1} << 31) / p)
                throw CapacityError("field size p^k exceeds 2^31");
            q *= p;
        }
        std::optional<Polynomial> mod;
        if (k == 1) {
            if (modulus.has_value())
                throw ModulusError("prime field takes no modulus polynomial");
        } else if (modulus.has_value()) {
            Polynomial m = modulus->monic();
            if (m.characteristic() != p)
                throw ModulusError("modulus characteristic does not match p");
            if (m.degree() != static_cast<int>(k))
                throw ModulusError("modulus degree " + std::to_string(m.degree()) +
                                   " != extension degree " + std::to_string(k));
            if (!m.is_irreducible())
                throw ModulusError("modulus polynomial is reducible");
            mod = std::move(m);
        } else {
            mod = smallest_irreducible(p, k);
        }
        return FieldPtr(new Field(p, k, q, std::move(mod)));
    }

    std::uint64_t p() const { return p_; }
    unsigned k() const { return k_; }
    std::uint64_t q() const { return q_; }
    const std::optional<Polynomial>& modulus() const { return modulus_; }

    bool same_structure(const Field& o) const {
        return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_;
    }

    // --- code-level arithmetic -------------------------------------------

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        if (k_ == 1) return (a + b) % p_;
        return digitwise(a, b, /*subtract=*/false);
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        if (k_ == 1) return (a + p_ - b % p_) % p_;
        return digitwise(a, b, /*subtract=*/true);
    }
    std::uint64_t neg(std::uint64_t a) const { return sub(0, a); }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        if (k_ == 1) return a % p_ * (b % p_) % p_;
        Polynomial prod = decode(a) * decode(b);
        return encode(prod.mod(*modulus_));
    }

    std::uint64_t inv(std::uint64_t a) const {
        if (a % q_ == 0) throw ZeroDivisionError("inverse of zero field element");
        if (k_ == 1) return Polynomial::mod_inverse(a, p_);
        // extended Euclid over Z_p[x]
        Polynomial r0 = *modulus_, r1 = decode(a);
        Polynomial t0 = Polynomial::zero(p_), t1 = Polynomial::one(p_);
        while (!r1.is_zero()) {
            // divide r0 by r1: quotient built degree by degree
            Polynomial q_poly = Polynomial::zero(p_);
            Polynomial rem = r0;
            const std::uint64_t lead_inv = Polynomial::mod_inverse(r1.leading(), p_);
            while (!rem.is_zero() && rem.degree() >= r1.degree()) {
                std::size_t shift = static_cast<std::size_t>(rem.degree() - r1.degree());
                std::vector<std::uint64_t> mono(shift + 1, 0);
                mono[shift] = rem.leading() * lead_inv % p_;
                Polynomial term(p_, std::move(mono));
                q_poly = q_poly + term;
                rem = rem - term * r1;
            }
            Polynomial next_r = rem;
            Polynomial next_t = t0 - q_poly * t1;
            r0 = r1; r1 = next_r;
            t0 = t1; t1 = next_t;
        }
        // r0 is the gcd, a unit since the modulus is irreducible
        std::uint64_t scale = Polynomial::mod_inverse(r0.leading(), p_);
        return encode(t0.scaled(scale).mod(*modulus_));
    }

    std::uint64_t div(std::uint64_t a, std::uint64_t b) const {
        return mul(a, inv(b));
    }

    // Square-and-multiply; negative exponents require a nonzero base.
    std::uint64_t pow(std::uint64_t base, std::int64_t e) const {
        base %= q_;
        if (e < 0) {
            base = inv(base); // throws ZeroDivisionError for base 0
            // -e would overflow for INT64_MIN; reduce mod group order first
            std::uint64_t mag = static_cast<std::uint64_t>(-(e + 1)) + 1;
            return pow_unsigned(base, mag);
        }
        return pow_unsigned(base, static_cast<std::uint64_t>(e));
    }

    // --- generator and discrete logarithm --------------------------------

    // Distinct prime factors of q - 1.
    const std::vector<std::uint64_t>& unit_order_factors() const {
        std::call_once(factor_once_, [this] {
            std::uint64_t n = q_ - 1;
            for (std::uint64_t d = 2; d * d <= n; ++d) {
                if (n % d == 0) {
                    factors_.push_back(d);
                    while (n % d == 0) n /= d;
                }
            }
            if (n > 1) factors_.push_back(n);
        });
        return factors_;
    }

    bool is_generator_code(std::uint64_t a) const {
        if (a % q_ == 0) return false;
        if (q_ == 2) return true; // the unit group is trivial
        for (std::uint64_t ell : unit_order_factors()) {
            if (pow_unsigned(a, (q_ - 1) / ell) == 1) return false;
        }
        return true;
    }

    // Smallest generator in code order; cached. For q = 2 this is 1.
    std::uint64_t generator_code() const {
        std::call_once(gen_once_, [this] {
            for (std::uint64_t c = 1; c < q_; ++c) {
                if (is_generator_code(c)) { generator_code_ = c; return; }
            }
            throw Error("no generator found (unreachable for a valid field)");
        });
        return generator_code_;
    }

    /* Baby-step giant-step: g^result = a, result in [0, q-1). O(sqrt q)
       time and space. */
    std::uint64_t discrete_log_codes(std::uint64_t g, std::uint64_t a) const {
        a %= q_;
        if (a == 0) throw LogOfZeroError("discrete log of zero");
        if (!is_generator_code(g))
            throw NotGeneratorError("base element is not a generator");
        const std::uint64_t n = q_ - 1;
        if (n == 1) return 0;
        std::uint64_t m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
        std::unordered_map<std::uint64_t, std::uint64_t> baby;
        baby.reserve(m * 2);
        std::uint64_t cur = 1;
        for (std::uint64_t j = 0; j < m; ++j) {
            baby.emplace(cur, j);
            cur = mul(cur, g);
        }
        const std::uint64_t giant = inv(cur); // g^{-m}
        std::uint64_t gamma = a;
        for (std::uint64_t i = 0; i * m <= n; ++i) {
            auto it = baby.find(gamma);
            if (it != baby.end()) return (i * m + it->second) % n;
            gamma = mul(gamma, giant);
        }
        throw NotGeneratorError("discrete log not found"); // unreachable for generators
    }

    /* Full logarithm table under generator g: table[code(g^x)] = x.
       O(q) time and memory; the bulk experiments use it instead of
       per-element baby-step giant-step. */
    std::vector<std::uint32_t> log_table(std::uint64_t g) const {
        if (!is_generator_code(g))
            throw NotGeneratorError("log table base is not a generator");
        std::vector<std::uint32_t> table(q_, 0);
        std::uint64_t cur = 1;
        for (std::uint64_t x = 0; x + 1 < q_; ++x) {
            table[cur] = static_cast<std::uint32_t>(x);
            cur = mul(cur, g);
        }
        return table;
    }

    // --- element encoding -------------------------------------------------

    Polynomial decode(std::uint64_t code) const {
        code %= q_;
        std::vector<std::uint64_t> c;
        c.reserve(k_);
        while (code > 0) { c.push_back(code % p_); code /= p_; }
        return Polynomial(p_, std::move(c));
    }

    std::uint64_t encode(const Polynomial& poly) const {
        std::uint64_t code = 0;
        const auto& c = poly.coeffs();
        for (std::size_t i = c.size(); i-- > 0;) code = code * p_ + c[i];
        return code;
    }

    FieldElement element(std::uint64_t code) const;
    FieldElement zero() const;
    FieldElement one() const;
    FieldElement generator() const;

    static bool is_prime(std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

private:
    Field(std::uint64_t p, unsigned k, std::uint64_t q, std::optional<Polynomial> mod)
        : p_(p), k_(k), q_(q), modulus_(std::move(mod)) {}

    std::uint64_t digitwise(std::uint64_t a, std::uint64_t b, bool subtract) const {
        std::uint64_t out = 0, place = 1;
        for (unsigned i = 0; i < k_; ++i) {
            std::uint64_t da = a % p_, db = b % p_;
            a /= p_; b /= p_;
            std::uint64_t d = subtract ? (da + p_ - db) % p_ : (da + db) % p_;
            out += d * place;
            place *= p_;
        }
        return out;
    }

    std::uint64_t pow_unsigned(std::uint64_t base, std::uint64_t e) const {
        std::uint64_t acc = 1;
        base %= q_;
        while (e > 0) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

    static Polynomial smallest_irreducible(std::uint64_t p, unsigned k) {
        std::uint64_t count = 1;
        for (unsigned i = 0; i < k; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            std::vector<std::uint64_t> c(k + 1, 0);
            std::uint64_t rem = code;
            for (unsigned i = 0; i < k; ++i) { c[i] = rem % p; rem /= p; }
            c[k] = 1;
            Polynomial cand(p, std::move(c));
            if (cand.is_irreducible()) return cand;
        }
        throw Error("no irreducible polynomial found (unreachable)");
    }

    std::uint64_t p_;
    unsigned k_;
    std::uint64_t q_;
    std::optional<Polynomial> modulus_;

    mutable std::once_flag gen_once_;
    mutable std::uint64_t generator_code_ = 0;
    mutable std::once_flag factor_once_;
    mutable std::vector<std::uint64_t> factors_;
};

/* Value handle onto an element of a shared Field. Immutable. Mixed-field
   operands are rejected structurally (same p, k and modulus), so elements
   survive serialization round trips. */
class FieldElement {
public:
    FieldElement(FieldPtr field, std::uint64_t code)
        : field_(std::move(field)), code_(code % field_->q()) {}

    const FieldPtr& field() const { return field_; }
    std::uint64_t code() const { return code_; }
    bool is_zero() const { return code_ == 0; }

    std::vector<std::uint64_t> coeffs() const {
        std::vector<std::uint64_t> c(field_->k(), 0);
        std::uint64_t rem = code_;
        for (unsigned i = 0; i < field_->k(); ++i) { c[i] = rem % field_->p(); rem /= field_->p(); }
        return c;
    }

    FieldElement operator+(const FieldElement& o) const {
        check(o); return FieldElement(field_, field_->add(code_, o.code_));
    }
    FieldElement operator-(const FieldElement& o) const {
        check(o); return FieldElement(field_, field_->sub(code_, o.code_));
    }
    FieldElement operator*(const FieldElement& o) const {
        check(o); return FieldElement(field_, field_->mul(code_, o.code_));
    }
    FieldElement operator/(const FieldElement& o) const {
        check(o); return FieldElement(field_, field_->div(code_, o.code_));
    }
    FieldElement operator-() const { return FieldElement(field_, field_->neg(code_)); }
    FieldElement inv() const { return FieldElement(field_, field_->inv(code_)); }
    FieldElement pow(std::int64_t e) const { return FieldElement(field_, field_->pow(code_, e)); }

    bool operator==(const FieldElement& o) const {
        return field_->same_structure(*o.field_) && code_ == o.code_;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

private:
    void check(const FieldElement& o) const {
        if (!field_->same_structure(*o.field_))
            throw FieldMismatchError("elements of different fields");
    }

    FieldPtr field_;
    std::uint64_t code_;
};

inline FieldElement Field::element(std::uint64_t code) const {
    return FieldElement(shared_from_this(), code);
}
inline FieldElement Field::zero() const { return element(0); }
inline FieldElement Field::one() const { return element(1); }
inline FieldElement Field::generator() const { return element(generator_code()); }

// Discrete log with element-level validation: g must generate, a must be nonzero.
inline std::uint64_t discrete_log(const FieldElement& g, const FieldElement& a) {
    if (!g.field()->same_structure(*a.field()))
        throw FieldMismatchError("discrete log across different fields");
    return g.field()->discrete_log_codes(g.code(), a.code());
}

inline FieldElement find_generator(const FieldPtr& f) { return f->generator(); }

} // namespace sidonlab
