#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "sidonlab/errors.hpp"

namespace sidonlab {

/* Dense polynomial over Z_p, coefficients stored low degree first and always
   fully reduced. The zero polynomial has an empty coefficient vector and
   degree() == -1. */
class Polynomial {
public:
    Polynomial(std::uint64_t p, std::vector<std::uint64_t> coeffs)
        : p_(p), coeffs_(std::move(coeffs)) {
        if (p_ < 2) throw DomainError("Polynomial: characteristic must be >= 2");
        for (auto& c : coeffs_) c %= p_;
        trim();
    }

    static Polynomial zero(std::uint64_t p) { return Polynomial(p, {}); }
    static Polynomial one(std::uint64_t p) { return Polynomial(p, {1}); }
    static Polynomial x(std::uint64_t p) { return Polynomial(p, {0, 1}); }

    std::uint64_t characteristic() const { return p_; }
    const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    std::uint64_t coeff(std::size_t i) const {
        return i < coeffs_.size() ? coeffs_[i] : 0;
    }
    std::uint64_t leading() const { return is_zero() ? 0 : coeffs_.back(); }
    bool is_monic() const { return leading() == 1; }

    Polynomial operator+(const Polynomial& o) const {
        check_char(o);
        std::vector<std::uint64_t> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = (coeff(i) + o.coeff(i)) % p_;
        return Polynomial(p_, std::move(c));
    }
    Polynomial operator-(const Polynomial& o) const {
        check_char(o);
        std::vector<std::uint64_t> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = (coeff(i) + p_ - o.coeff(i)) % p_;
        return Polynomial(p_, std::move(c));
    }
    Polynomial operator*(const Polynomial& o) const {
        check_char(o);
        if (is_zero() || o.is_zero()) return zero(p_);
        std::vector<std::uint64_t> c(coeffs_.size() + o.coeffs_.size() - 1, 0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
                c[i + j] = (c[i + j] + coeffs_[i] * o.coeffs_[j]) % p_;
        return Polynomial(p_, std::move(c));
    }
    Polynomial scaled(std::uint64_t s) const {
        std::vector<std::uint64_t> c(coeffs_);
        for (auto& v : c) v = v * (s % p_) % p_;
        return Polynomial(p_, std::move(c));
    }

    // Remainder of *this divided by a nonzero divisor.
    Polynomial mod(const Polynomial& divisor) const {
        check_char(divisor);
        if (divisor.is_zero()) throw ZeroDivisionError("Polynomial::mod: zero divisor");
        std::vector<std::uint64_t> r(coeffs_);
        const auto& d = divisor.coeffs_;
        const std::uint64_t lead_inv = mod_inverse(divisor.leading(), p_);
        while (r.size() >= d.size() && !r.empty()) {
            std::uint64_t factor = r.back() * lead_inv % p_;
            std::size_t shift = r.size() - d.size();
            if (factor != 0) {
                for (std::size_t i = 0; i < d.size(); ++i)
                    r[shift + i] = (r[shift + i] + p_ - factor * d[i] % p_) % p_;
            }
            r.pop_back();
            while (!r.empty() && r.back() == 0) r.pop_back();
        }
        return Polynomial(p_, std::move(r));
    }

    Polynomial monic() const {
        if (is_zero() || is_monic()) return *this;
        return scaled(mod_inverse(leading(), p_));
    }

    std::uint64_t eval(std::uint64_t point) const {
        point %= p_;
        std::uint64_t acc = 0;
        for (std::size_t i = coeffs_.size(); i-- > 0;)
            acc = (acc * point + coeffs_[i]) % p_;
        return acc;
    }

    /* Exhaustive trial division by all monic polynomials of degree 1..deg/2.
       Only intended for the desk-scale fields this library targets. */
    bool is_irreducible() const {
        const int deg = degree();
        if (deg <= 0) return false;
        if (deg == 1) return true;
        for (int d = 1; 2 * d <= deg; ++d) {
            std::uint64_t count = 1;
            for (int i = 0; i < d; ++i) count *= p_;
            for (std::uint64_t code = 0; code < count; ++code) {
                std::vector<std::uint64_t> c(d + 1, 0);
                std::uint64_t rem = code;
                for (int i = 0; i < d; ++i) { c[i] = rem % p_; rem /= p_; }
                c[d] = 1;
                if (mod(Polynomial(p_, std::move(c))).is_zero()) return false;
            }
        }
        return true;
    }

    bool operator==(const Polynomial& o) const {
        return p_ == o.p_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            if (coeffs_[i] == 0) continue;
            if (!out.empty()) out += " + ";
            if (i == 0 || coeffs_[i] != 1) out += std::to_string(coeffs_[i]);
            if (i >= 1) out += "x";
            if (i >= 2) out += "^" + std::to_string(i);
        }
        return out;
    }

    static std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
        a %= p;
        if (a == 0) throw ZeroDivisionError("inverse of zero");
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a);
        while (new_r != 0) {
            std::int64_t qt = r / new_r;
            std::int64_t tmp = t - qt * new_t; t = new_t; new_t = tmp;
            tmp = r - qt * new_r; r = new_r; new_r = tmp;
        }
        if (r != 1) throw ZeroDivisionError("element not invertible");
        if (t < 0) t += static_cast<std::int64_t>(p);
        return static_cast<std::uint64_t>(t);
    }

private:
    void check_char(const Polynomial& o) const {
        if (p_ != o.p_)
            throw DomainError("Polynomial: mixed characteristics " +
                              std::to_string(p_) + " vs " + std::to_string(o.p_));
    }

    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::uint64_t p_;
    std::vector<std::uint64_t> coeffs_;
};

} // namespace sidonlab
