#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <string>

#include "bps/errors.hpp"

namespace bps {

// Exact rational over 64-bit integers, used for q-exponents, slopes,
// discriminants and polarizations.  All magnitudes in scope stay tiny
// (denominators divide 24*ell, numerators are bounded by lattice boxes),
// but products are formed through __int128 and re-checked anyway.
class Rat {
  public:
    constexpr Rat() : num_(0), den_(1) {}
    constexpr Rat(long long n) : num_(n), den_(1) {}
    Rat(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    // floor(num/den) as an integer
    long long floor() const {
        long long q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    long long ceil() const { return -(-*this).floor(); }

    Rat operator-() const { return Rat(-num_, den_, raw_tag{}); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return from128(n, d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return from128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw DomainError("Rat: division by zero");
        return from128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rat& operator+=(const Rat& b) { return *this = *this + b; }
    Rat& operator-=(const Rat& b) { return *this = *this - b; }
    Rat& operator*=(const Rat& b) { return *this = *this * b; }
    Rat& operator/=(const Rat& b) { return *this = *this / b; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        __int128 l = (__int128)a.num_ * b.den_;
        __int128 r = (__int128)b.num_ * a.den_;
        return l < r ? std::strong_ordering::less
                     : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    double to_double() const { return double(num_) / double(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    struct raw_tag {};
    constexpr Rat(long long n, long long d, raw_tag) : num_(n), den_(d) {}

    static Rat from128(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw DomainError("Rat: 64-bit overflow");
        return Rat((long long)n, (long long)d, raw_tag{});
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b) { __int128 t = a % b; a = b; b = t; }
        return a ? a : 1;
    }
    void normalize() {
        if (den_ == 0) throw DomainError("Rat: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    long long num_;
    long long den_;
};

inline int sgn(const Rat& x) { return x.sign(); }
inline int sgn(long long x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace bps
