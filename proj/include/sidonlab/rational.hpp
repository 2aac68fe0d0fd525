#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sidonlab {

/* Exact rational on int64 numerator/denominator. Counting statistics at the
   scales this library enforces (group orders below 2^31, work below the
   enumeration ceiling) stay far inside the representable range; any overflow
   is a hard error, never a silent wrap. */
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }
    explicit Rational(std::int64_t value) : num_(value), den_(1) {}

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    Rational operator+(const Rational& o) const {
        __int128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
        __int128 d = i128(den_) * o.den_;
        return from_i128(n, d);
    }
    Rational operator-(const Rational& o) const {
        __int128 n = i128(num_) * o.den_ - i128(o.num_) * den_;
        __int128 d = i128(den_) * o.den_;
        return from_i128(n, d);
    }
    Rational operator*(const Rational& o) const {
        return from_i128(i128(num_) * o.num_, i128(den_) * o.den_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

    bool operator==(const Rational& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return i128(num_) * o.den_ < i128(o.num_) * den_;
    }
    bool operator<=(const Rational& o) const {
        return i128(num_) * o.den_ <= i128(o.num_) * den_;
    }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }

    // Exact test  (*this)^2 <= rhs_num / rhs_den  for nonnegative *this.
    bool square_leq(std::uint64_t rhs_num, std::uint64_t rhs_den) const {
        if (rhs_den == 0) throw std::invalid_argument("square_leq: zero denominator");
        __int128 lhs = i128(num_) * num_ * static_cast<__int128>(rhs_den);
        __int128 rhs = static_cast<__int128>(rhs_num) * den_ * den_;
        return lhs <= rhs;
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_)
                         : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

    static Rational from_i128(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr __int128 lo = static_cast<__int128>(INT64_MIN);
        constexpr __int128 hi = static_cast<__int128>(INT64_MAX);
        if (n < lo || n > hi || d > hi) {
            throw std::overflow_error("Rational: value out of int64 range");
        }
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num_;
    std::int64_t den_;
};

} // namespace sidonlab
