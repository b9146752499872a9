#ifndef TIMECARD_INTERVALS_HPP
#define TIMECARD_INTERVALS_HPP

#include <map>
#include <optional>

#include "timecard/model.hpp"
#include "timecard/rational.hpp"
#include "timecard/temporal.hpp"

namespace timecard {

// Maximal half-open span [from, to) on which every relevant fluent is
// constant.
struct Interval {
    std::size_t id = 0;
    Minute from = 0;
    Minute to = 0;
    std::vector<std::pair<Name, Value>> relevant_values;  // declaration order

    Minute length() const { return to - from; }
    const Value* value_of(const Name& fluent) const;
};

// Minutes at which some relevant fluent changes value, always including 0
// and the horizon (the trailing segment is closed off so wages conserve).
std::vector<Minute> boundaries(const Timeline& tl,
                               const std::vector<Name>& relevant);

// Interval k = [bs[k], bs[k+1]) with relevant values sampled at bs[k].
std::vector<Interval> build_intervals(const std::vector<Minute>& bs,
                                      const Timeline& tl,
                                      const std::vector<Name>& relevant);

// Evaluates an interval formula at interval k. Interval terms resolve
// relative to k; a term that falls off either end makes the enclosing atom
// false. "length" resolves to the interval length in minutes. Unknown
// property names raise ReferenceError; ordering non-numeric values raises
// TypeError.
bool int_holds(const IfPtr& formula, std::size_t k,
               const std::vector<Interval>& ivs);

// Per-interval property values: the value of the unique applicable rule,
// otherwise the declared default (expression defaults evaluated after their
// dependencies). Two applicable rules with distinct values raise
// InconsistencyError naming the property and interval.
std::vector<std::map<Name, Rational>> eval_properties(
    const std::vector<Interval>& ivs, const std::vector<PropertyDecl>& decls,
    const std::vector<PropertyRule>& rules);

struct WageBreakdown {
    std::vector<Rational> per_interval;  // exact rate * length / 60
    Rational total_exact;
    Money total;  // rounded half to even, cents
};

// Sum over intervals of totalWage * length / 60, computed exactly and
// rounded once at the end.
WageBreakdown total_wage(const std::vector<Interval>& ivs,
                         const std::vector<std::map<Name, Rational>>& props);

constexpr const char* kTotalWageProperty = "totalWage";
constexpr const char* kLengthProperty = "length";

}  // namespace timecard

#endif
