#pragma once
// Exact rational arithmetic on int64 numerator/denominator.
// Every operation normalizes (gcd-reduced, den > 0) and throws on overflow,
// so a Rat that exists is always a valid exact value.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <compare>

namespace dppac {

struct overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline std::int64_t narrow(__int128 v, const char* what) {
    if (v > INT64_MAX || v < INT64_MIN) throw overflow_error(what);
    return static_cast<std::int64_t>(v);
}
}  // namespace detail

struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rat() = default;
    Rat(std::int64_t n) : num(n), den(1) {}
    Rat(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        if (den < 0) {
            if (num == INT64_MIN || den == INT64_MIN) throw overflow_error("Rat: negate");
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
        __int128 d = (__int128)a.den * b.den;
        return from128(n, d, "Rat: add");
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num * b.den - (__int128)b.num * a.den;
        __int128 d = (__int128)a.den * b.den;
        return from128(n, d, "Rat: sub");
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return from128((__int128)a.num * b.num, (__int128)a.den * b.den, "Rat: mul");
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num == 0) throw std::domain_error("Rat: divide by zero");
        return from128((__int128)a.num * b.den, (__int128)a.den * b.num, "Rat: div");
    }
    Rat operator-() const { return Rat(detail::narrow(-(__int128)num, "Rat: neg"), den); }
    Rat& operator+=(const Rat& b) { return *this = *this + b; }
    Rat& operator-=(const Rat& b) { return *this = *this - b; }
    Rat& operator*=(const Rat& b) { return *this = *this * b; }
    Rat& operator/=(const Rat& b) { return *this = *this / b; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        __int128 l = (__int128)a.num * b.den, r = (__int128)b.num * a.den;
        return l < r ? std::strong_ordering::less
             : l > r ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    double to_double() const { return double(num) / double(den); }
    std::string to_string() const {
        return den == 1 ? std::to_string(num)
                        : std::to_string(num) + "/" + std::to_string(den);
    }

    // Parses "3", "-1/4" and decimal literals like "0.125" exactly.
    static Rat parse(const std::string& s);

  private:
    static Rat from128(__int128 n, __int128 d, const char* what) {
        if (d == 0) throw std::domain_error("Rat: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        Rat r;
        r.num = detail::narrow(n, what);
        r.den = detail::narrow(d, what);
        return r;
    }
};

inline Rat Rat::parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(std::stoll(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    if (frac > 18) throw std::invalid_argument("Rat::parse: too many decimal places");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac; ++i) den *= 10;
    return Rat(std::stoll(digits), den);
}

}  // namespace dppac
