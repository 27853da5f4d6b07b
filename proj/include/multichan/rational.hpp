#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "multichan/error.hpp"

namespace multichan {

/// Exact rational number in canonical form (gcd(|num|, den) = 1, den >= 1).
///
/// Thin value wrapper over GMP's mpq_class. The textual form is always
/// "num/den" (also for integers, e.g. "1/1", "0/1"); parse() additionally
/// accepts a bare integer.
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {} // NOLINT(google-explicit-constructor)
    Rational(int value) : value_(static_cast<long>(value)) {} // NOLINT(google-explicit-constructor)

    Rational(long numerator, long denominator)
    {
        if (denominator == 0) {
            fail(ErrorCode::ParseError, "zero denominator");
        }
        value_ = mpq_class(mpz_class(numerator), mpz_class(denominator));
        value_.canonicalize();
    }

    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

    static Rational parse(std::string_view text)
    {
        auto is_integer = [](std::string_view s) {
            if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
                s.remove_prefix(1);
            }
            if (s.empty()) {
                return false;
            }
            for (char c : s) {
                if (c < '0' || c > '9') {
                    return false;
                }
            }
            return true;
        };
        auto strip_plus = [](std::string_view s) {
            if (!s.empty() && s.front() == '+') {
                s.remove_prefix(1);
            }
            return std::string(s);
        };

        const auto slash = text.find('/');
        const std::string_view num = text.substr(0, slash);
        const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
        if (!is_integer(num) || !is_integer(den) || den.front() == '-' || den.front() == '+') {
            fail(ErrorCode::ParseError, "not a rational \"num/den\": '" + std::string(text) + "'");
        }
        mpz_class n(strip_plus(num), 10);
        mpz_class d(std::string(den), 10);
        if (d == 0) {
            fail(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
        }
        mpq_class q(n, d);
        q.canonicalize();
        return Rational(std::move(q));
    }

    [[nodiscard]] std::string str() const
    {
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
    }

    [[nodiscard]] double to_double() const { return value_.get_d(); }
    [[nodiscard]] int sign() const { return sgn(value_); }
    [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
    [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
    [[nodiscard]] Rational abs() const { return Rational(mpq_class(::abs(value_))); }
    [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
    [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
    [[nodiscard]] const mpq_class& raw() const noexcept { return value_; }
    [[nodiscard]] mpq_class& raw() noexcept { return value_; }

    /// Smallest integer >= this value.
    [[nodiscard]] mpz_class ceil() const
    {
        mpz_class out;
        mpz_cdiv_q(out.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
        return out;
    }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero()) {
            fail(ErrorCode::InvalidInput, "division by zero");
        }
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class value_;
};

} // namespace multichan

template <>
struct std::hash<multichan::Rational> {
    std::size_t operator()(const multichan::Rational& r) const noexcept
    {
        return std::hash<std::string>{}(r.str());
    }
};
