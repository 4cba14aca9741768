#pragma once

#include <cstdint>

#include "bexcl/errors.hpp"

namespace bexcl {

// Exact rational on __int128 with eager normalization.  Magnitudes here stay
// small (weights up to (p/q)^{kn} at n <= 10 with small rational bias), but
// every product is overflow-checked anyway.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    static Rational from128(__int128 n, __int128 d) {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        r.normalize();
        return r;
    }

    __int128 num() const { return num_; }
    __int128 den() const { return den_; }

    Rational operator+(const Rational& o) const {
        return from128(checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                       checked_mul(den_, o.den_));
    }
    Rational operator-(const Rational& o) const {
        return from128(checked_add(checked_mul(num_, o.den_), -checked_mul(o.num_, den_)),
                       checked_mul(den_, o.den_));
    }
    Rational operator*(const Rational& o) const {
        return from128(checked_mul(num_, o.num_), checked_mul(den_, o.den_));
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw invalid_input("Rational: division by zero");
        return from128(checked_mul(num_, o.den_), checked_mul(den_, o.num_));
    }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }

    bool is_zero() const { return num_ == 0; }
    bool is_nonnegative() const { return num_ >= 0; }

    Rational pow(std::int64_t e) const {
        if (e < 0) throw invalid_input("Rational::pow: negative exponent");
        Rational r(1);
        Rational b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
    static __int128 checked_mul(__int128 a, __int128 b) {
        if (a == 0 || b == 0) return 0;
        __int128 r = a * b;
        if (r / b != a) throw resource_limit("Rational: 128-bit overflow in multiplication");
        return r;
    }
    static __int128 checked_add(__int128 a, __int128 b) {
        __int128 r = a + b;
        if ((b > 0 && r < a) || (b < 0 && r > a)) throw resource_limit("Rational: 128-bit overflow in addition");
        return r;
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void normalize() {
        if (den_ == 0) throw invalid_input("Rational: zero denominator");
        if (den_ < 0) {
            den_ = -den_;
            num_ = -num_;
        }
        const __int128 g = gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    __int128 num_;
    __int128 den_;
};

}  // namespace bexcl
