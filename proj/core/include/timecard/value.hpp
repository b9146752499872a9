#ifndef TIMECARD_VALUE_HPP
#define TIMECARD_VALUE_HPP

#include <cstdint>
#include <string>
#include <variant>

#include "timecard/rational.hpp"

namespace timecard {

// A fluent or property value: named constant, boolean, whole minutes/count,
// or exact rational (rates, premiums). Rationals with denominator 1
// canonicalize to integers, so equality is plain structural equality.
class Value {
public:
    Value() : rep_(false) {}
    static Value symbol(std::string name) { return Value(Rep(std::move(name))); }
    static Value boolean(bool b) { return Value(Rep(b)); }
    static Value integer(std::int64_t v) { return Value(Rep(v)); }
    static Value rational(Rational r) {
        if (r.is_integer()) return integer(r.num());
        return Value(Rep(std::move(r)));
    }

    bool is_symbol() const { return std::holds_alternative<std::string>(rep_); }
    bool is_bool() const { return std::holds_alternative<bool>(rep_); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(rep_); }
    bool is_rational() const { return std::holds_alternative<Rational>(rep_); }
    bool is_numeric() const { return is_int() || is_rational(); }

    const std::string& as_symbol() const { return std::get<std::string>(rep_); }
    bool as_bool() const { return std::get<bool>(rep_); }
    std::int64_t as_int() const { return std::get<std::int64_t>(rep_); }
    // Numeric view; valid when is_numeric().
    Rational as_rational() const {
        if (is_int()) return Rational(as_int());
        return std::get<Rational>(rep_);
    }

    bool operator==(const Value& rhs) const { return rep_ == rhs.rep_; }
    bool operator!=(const Value& rhs) const { return !(*this == rhs); }

    // Numeric ordering; throws TypeError unless both operands are numeric.
    bool less_than(const Value& rhs) const;

    // "night", "true", "480", "0.25"
    std::string str() const;

private:
    using Rep = std::variant<std::string, bool, std::int64_t, Rational>;
    explicit Value(Rep rep) : rep_(std::move(rep)) {}
    Rep rep_;
};

}  // namespace timecard

#endif
