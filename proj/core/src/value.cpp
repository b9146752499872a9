#include "timecard/value.hpp"

#include "timecard/errors.hpp"

namespace timecard {

bool Value::less_than(const Value& rhs) const {
    if (!is_numeric() || !rhs.is_numeric())
        throw TypeError("ordered comparison needs numeric operands, got " +
                        str() + " and " + rhs.str());
    return as_rational() < rhs.as_rational();
}

std::string Value::str() const {
    if (is_symbol()) return as_symbol();
    if (is_bool()) return as_bool() ? "true" : "false";
    if (is_int()) return std::to_string(as_int());
    return std::get<Rational>(rep_).str();
}

}  // namespace timecard
