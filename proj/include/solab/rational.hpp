#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "solab/error.hpp"

namespace solab {

// Exact reduced rational on int64 with __int128 intermediates.
// Denominator is always positive and gcd(num, den) == 1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    bool is_integer() const noexcept { return den_ == 1; }

    double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    Rational operator-() const { return Rational(-num_, den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return from_wide(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.num_;
        __int128 d = (__int128)a.den_ * b.den_;
        return from_wide(n, d);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) fail(ErrorCode::InvalidArgument, "rational division by zero");
        __int128 n = (__int128)a.num_ * b.den_;
        __int128 d = (__int128)a.den_ * b.num_;
        return from_wide(n, d);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }

    std::string to_string() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    void assign(std::int64_t n, std::int64_t d) {
        if (d == 0) fail(ErrorCode::InvalidArgument, "rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        num_ = n;
        den_ = d;
    }

    static Rational from_wide(__int128 n, __int128 d) {
        if (d == 0) fail(ErrorCode::InvalidArgument, "rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 an = n < 0 ? -n : n;
        __int128 g = wide_gcd(an, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr __int128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim)
            fail(ErrorCode::Overflow, "rational arithmetic overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static __int128 wide_gcd(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    if (a <= 0 || b <= 0) fail(ErrorCode::InvalidArgument, "lcm of non-positive values");
    std::int64_t g = std::gcd(a, b);
    __int128 l = (__int128)(a / g) * b;
    if (l > INT64_MAX) fail(ErrorCode::Overflow, "lcm overflow");
    return static_cast<std::int64_t>(l);
}

} // namespace solab
