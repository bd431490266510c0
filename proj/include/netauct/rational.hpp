// rational.hpp — exact rational arithmetic for valuations, payments and thresholds.
//
// Mechanism outcomes here are piecewise-constant in the reports with breakpoints at
// exact statistics of other buyers' declarations; floating point would make group
// classification and the verifier's strict-gain comparisons unstable. Everything is
// therefore kept as a normalized int64 fraction with 128-bit intermediates.
#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace netauct {

class rational_overflow : public std::overflow_error {
public:
    explicit rational_overflow(const std::string& what) : std::overflow_error(what) {}
};

class Rat {
public:
    constexpr Rat() = default;
    constexpr Rat(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
    Rat(std::int64_t num, std::int64_t den) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        assign(static_cast<__int128>(num), static_cast<__int128>(den));
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        const __int128 lhs = i128(a.num_) * b.den_;
        const __int128 rhs = i128(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // Renders an exact decimal when the denominator is of the form 2^a * 5^b,
    // otherwise "num/den". Integers print without a decimal point.
    std::string to_string() const;

    // Accepts "123", "-4.75", ".5", "3/4", "-7/2". Throws std::invalid_argument otherwise.
    static Rat parse(std::string_view text);

    // Converts a double by way of its shortest round-trip decimal rendering, so a JSON
    // 0.1 comes back as exactly 1/10 rather than the nearest binary fraction.
    static Rat from_double(double value);

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
    static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

    static Rat make(__int128 num, __int128 den) {
        Rat r;
        r.assign(num, den);
        return r;
    }

    void assign(__int128 num, __int128 den) {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const __int128 g = gcd128(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        constexpr __int128 lo = INT64_MIN;
        constexpr __int128 hi = INT64_MAX;
        if (num < lo || num > hi || den > hi)
            throw rational_overflow("rational exceeds 64-bit normalized range");
        num_ = static_cast<std::int64_t>(num);
        den_ = static_cast<std::int64_t>(den);
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    std::int64_t num_{0};
    std::int64_t den_{1};
};

inline std::string Rat::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    // Check for a terminating decimal expansion.
    std::int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
    const int digits = twos > fives ? twos : fives;
    __int128 scaled = static_cast<__int128>(num_ < 0 ? -num_ : num_);
    for (int i = 0; i < digits; ++i) scaled *= 10;
    scaled /= den_;
    std::string body;
    {
        __int128 v = scaled;
        if (v == 0) body = "0";
        while (v > 0) {
            body.insert(body.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
    }
    while (static_cast<int>(body.size()) <= digits) body.insert(body.begin(), '0');
    body.insert(body.end() - digits, '.');
    if (num_ < 0) body.insert(body.begin(), '-');
    return body;
}

inline Rat Rat::parse(std::string_view text) {
    auto fail = [&] { throw std::invalid_argument("not a rational: '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        std::int64_t p = 0, q = 0;
        const auto lhs = text.substr(0, slash);
        const auto rhs = text.substr(slash + 1);
        auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), p);
        auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), q);
        if (r1.ec != std::errc{} || r1.ptr != lhs.data() + lhs.size()) fail();
        if (r2.ec != std::errc{} || r2.ptr != rhs.data() + rhs.size()) fail();
        return Rat(p, q);  // a zero denominator surfaces as the constructor's domain_error
    }
    bool negative = false;
    std::string_view rest = text;
    if (rest.front() == '-' || rest.front() == '+') {
        negative = rest.front() == '-';
        rest.remove_prefix(1);
    }
    const auto dot = rest.find('.');
    std::string_view int_part = dot == std::string_view::npos ? rest : rest.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) fail();
    for (char c : int_part)
        if (c < '0' || c > '9') fail();
    for (char c : frac_part)
        if (c < '0' || c > '9') fail();
    __int128 num = 0;
    for (char c : int_part) {
        num = num * 10 + (c - '0');
        if (num > static_cast<__int128>(INT64_MAX) * 1000000) fail();
    }
    __int128 den = 1;
    for (char c : frac_part) {
        num = num * 10 + (c - '0');
        den *= 10;
        if (num > static_cast<__int128>(INT64_MAX) * 1000000 || den > INT64_MAX) fail();
    }
    Rat r;
    r.assign(negative ? -num : num, den);
    return r;
}

inline Rat Rat::from_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    if (res.ec != std::errc{}) throw std::invalid_argument("unprintable double");
    std::string_view text(buf, static_cast<std::size_t>(res.ptr - buf));
    // Shortest round-trip may use exponent notation for extreme magnitudes; expand it.
    const auto e = text.find('e');
    if (e == std::string_view::npos) return parse(text);
    const Rat mantissa = parse(text.substr(0, e));
    int exp = 0;
    auto rest = text.substr(e + 1);
    auto rc = std::from_chars(rest.data(), rest.data() + rest.size(), exp);
    if (rc.ec != std::errc{}) throw std::invalid_argument("bad exponent in double rendering");
    Rat scale(1);
    const Rat ten(10);
    for (int i = 0; i < (exp < 0 ? -exp : exp); ++i) scale *= ten;
    return exp < 0 ? mantissa / scale : mantissa * scale;
}

}  // namespace netauct
