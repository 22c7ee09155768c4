#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "fuzzy/error.hpp"

namespace fuzzy {

/*
 * Exact rational number over 64-bit integers.
 *
 * Invariants: den > 0 and gcd(|num|, den) == 1, so equal values have equal
 * representations. Intermediate products are formed in 128 bits; a result
 * that does not fit back into 64 bits throws OverflowError instead of
 * wrapping. Comparisons never overflow (cross products of two int64 values
 * always fit in __int128).
 */
class Rational {
public:
    using int_type = std::int64_t;

    constexpr Rational() noexcept = default;
    constexpr Rational(int_type n) noexcept : num_(n) {} // NOLINT(google-explicit-constructor)
    Rational(int_type n, int_type d) { assign(n, d); }

    [[nodiscard]] constexpr int_type num() const noexcept { return num_; }
    [[nodiscard]] constexpr int_type den() const noexcept { return den_; }

    [[nodiscard]] constexpr bool is_integer() const noexcept { return den_ == 1; }
    [[nodiscard]] constexpr int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_)
            return from_wide(static_cast<wide>(a.num_) + b.num_, a.den_);
        return from_wide(static_cast<wide>(a.num_) * b.den_ + static_cast<wide>(b.num_) * a.den_,
                         static_cast<wide>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_)
            return from_wide(static_cast<wide>(a.num_) - b.num_, a.den_);
        return from_wide(static_cast<wide>(a.num_) * b.den_ - static_cast<wide>(b.num_) * a.den_,
                         static_cast<wide>(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<wide>(a.num_) * b.num_, static_cast<wide>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0)
            throw DomainError("rational division by zero");
        return from_wide(static_cast<wide>(a.num_) * b.den_, static_cast<wide>(a.den_) * b.num_);
    }
    Rational operator-() const { return from_wide(-static_cast<wide>(num_), den_); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend constexpr bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
        if (a.den_ == b.den_)
            return a.num_ <=> b.num_;
        return static_cast<wide>(a.num_) * b.den_ <=> static_cast<wide>(b.num_) * a.den_;
    }

    /// Largest integer <= value.
    [[nodiscard]] int_type floor() const noexcept {
        int_type q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0)
            --q;
        return q;
    }
    [[nodiscard]] int_type ceil() const noexcept {
        int_type q = num_ / den_;
        if (num_ % den_ != 0 && num_ > 0)
            ++q;
        return q;
    }

    /// "p/q", or "p" for integers.
    [[nodiscard]] std::string str() const {
        if (den_ == 1)
            return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Accepts "p" or "p/q" with optional leading '-'; no decimals, no
    /// whitespace, q > 0.
    static Rational parse(std::string_view text) {
        auto slash = text.find('/');
        auto num_part = text.substr(0, slash);
        int_type n = parse_int(num_part, text);
        if (slash == std::string_view::npos)
            return Rational(n);
        int_type d = parse_int(text.substr(slash + 1), text);
        if (d <= 0)
            throw ParseError("rational '" + std::string(text) + "' needs a positive denominator");
        return Rational(n, d);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    using wide = __int128;

    int_type num_ = 0;
    int_type den_ = 1;

    void assign(int_type n, int_type d) {
        if (d == 0)
            throw DomainError("rational with zero denominator");
        *this = from_wide(n, d);
    }

    static wide wide_abs(wide v) noexcept { return v < 0 ? -v : v; }

    static wide wide_gcd(wide a, wide b) noexcept {
        a = wide_abs(a);
        b = wide_abs(b);
        while (b != 0) {
            wide r = a % b;
            a = b;
            b = r;
        }
        return a;
    }

    static Rational from_wide(wide n, wide d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0)
            return Rational();
        // Fast path: both parts already in 64-bit range, use the hardware gcd.
        constexpr wide lo = std::numeric_limits<int_type>::min() + 1;
        constexpr wide hi = std::numeric_limits<int_type>::max();
        wide g;
        if (n >= lo && n <= hi && d <= hi)
            g = std::gcd(static_cast<int_type>(n), static_cast<int_type>(d));
        else
            g = wide_gcd(n, d);
        n /= g;
        d /= g;
        if (n < lo || n > hi || d > hi)
            throw OverflowError("rational overflow beyond 64-bit range");
        Rational r;
        r.num_ = static_cast<int_type>(n);
        r.den_ = static_cast<int_type>(d);
        return r;
    }

    static int_type parse_int(std::string_view part, std::string_view whole) {
        if (part.empty())
            throw ParseError("malformed rational '" + std::string(whole) + "'");
        int_type v = 0;
        const char* first = part.data();
        const char* last = part.data() + part.size();
        if (*first == '+')
            throw ParseError("malformed rational '" + std::string(whole) + "'");
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec == std::errc::result_out_of_range)
            throw ParseError("rational '" + std::string(whole) + "' out of range");
        if (ec != std::errc() || ptr != last)
            throw ParseError("malformed rational '" + std::string(whole) + "' (expected p/q)");
        return v;
    }
};

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

namespace literals {
inline Rational operator""_q(unsigned long long v) { return Rational(static_cast<Rational::int_type>(v)); }
} // namespace literals

} // namespace fuzzy
