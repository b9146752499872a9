#ifndef TIMECARD_RATIONAL_HPP
#define TIMECARD_RATIONAL_HPP

#include <cstdint>
#include <string>

#include "timecard/errors.hpp"

namespace timecard {

// Exact rational with int64 components, always normalized:
// gcd(|num|, den) == 1 and den > 0. Arithmetic goes through 128-bit
// intermediates and throws RangeError on int64 overflow.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(std::int64_t numerator, std::int64_t denominator);
    // NOLINTNEXTLINE: implicit on purpose, integers are rationals
    Rational(std::int64_t value) : num_(value), den_(1) {}

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }

    Rational operator-() const;
    Rational operator+(const Rational& rhs) const;
    Rational operator-(const Rational& rhs) const;
    Rational operator*(const Rational& rhs) const;

    bool operator==(const Rational& rhs) const {
        return num_ == rhs.num_ && den_ == rhs.den_;
    }
    bool operator!=(const Rational& rhs) const { return !(*this == rhs); }
    bool operator<(const Rational& rhs) const;
    bool operator<=(const Rational& rhs) const { return !(rhs < *this); }
    bool operator>(const Rational& rhs) const { return rhs < *this; }
    bool operator>=(const Rational& rhs) const { return !(*this < rhs); }

    // Minimal exact rendering: integer when den == 1, terminating decimal
    // when den is of the form 2^a*5^b, "num/den" otherwise.
    std::string str() const;

    // Parses "20", "-3", "0.25", "1.5" exactly; no exponent syntax.
    // Returns false on malformed text.
    static bool parse(const std::string& text, Rational& out);

private:
    std::int64_t num_;
    std::int64_t den_;
};

// Amount of currency in cents, produced by rounding an exact rational
// total (round half to even).
class Money {
public:
    constexpr Money() : cents_(0) {}
    explicit constexpr Money(std::int64_t cents) : cents_(cents) {}

    static Money round_from(const Rational& units);

    std::int64_t cents() const { return cents_; }
    bool operator==(const Money& rhs) const = default;

    // "191.00", "-0.05"
    std::string str() const;

private:
    std::int64_t cents_;
};

}  // namespace timecard

#endif
