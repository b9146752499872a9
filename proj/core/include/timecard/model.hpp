#ifndef TIMECARD_MODEL_HPP
#define TIMECARD_MODEL_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "timecard/clock.hpp"
#include "timecard/value.hpp"

namespace timecard {

using Name = std::string;

// ---------------------------------------------------------------------------
// Temporal condition AST. Durations are minutes.
// ---------------------------------------------------------------------------

struct TemporalFormula;
using TfPtr = std::shared_ptr<const TemporalFormula>;

struct TfAtom {
    Name fluent;
    Value value;
};
struct TfAnd {
    std::vector<TfPtr> items;
};
struct TfNot {
    TfPtr sub;
};
// Holds when sub has held at every point of the trailing window of n minutes
// (window endpoints included, so the sub must have taken hold at least n
// minutes ago).
struct TfAtLeast {
    Minute n;
    TfPtr sub;
};
// AtLeast{n} and not AtLeast{n + step}; fires exactly once per stretch.
struct TfExactly {
    Minute n;
    TfPtr sub;
};

struct TemporalFormula {
    std::variant<TfAtom, TfAnd, TfNot, TfAtLeast, TfExactly> node;
};

namespace tf {
TfPtr atom(Name fluent, Value value);
TfPtr conj(std::vector<TfPtr> items);
TfPtr negate(TfPtr sub);
TfPtr at_least(Minute n, TfPtr sub);
TfPtr exactly(Minute n, TfPtr sub);
bool equal(const TfPtr& a, const TfPtr& b);
// Fluent names mentioned anywhere in the formula, including under durations.
void collect_fluents(const TfPtr& f, std::vector<Name>& out);
// True when the formula contains no AtLeast/Exactly node.
bool duration_free(const TfPtr& f);
// All duration literals (AtLeast/Exactly window sizes).
void collect_durations(const TfPtr& f, std::vector<Minute>& out);
std::string str(const TfPtr& f);
}  // namespace tf

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

enum class FluentKind { inertial, defined, count };
enum class ActionKind { user, walltime, triggered };

struct FluentDecl {
    Name name;
    FluentKind kind = FluentKind::inertial;
    // Finite domain for inertial/defined fluents. Count fluents range over
    // the nonnegative integers and leave this empty.
    std::vector<Value> domain;
    // Initial value (inertial) or per-timepoint default (defined).
    // Counts always start at 0.
    Value initial_or_default;
    bool relevant = false;
};

struct ActionDecl {
    Name name;
    ActionKind kind = ActionKind::user;
    std::vector<Minute> walltime_schedule;  // walltime only, strictly sorted
};

struct EffectRule {
    Name action;
    Name fluent;  // inertial
    Value value;
    TfPtr condition;  // null for unconditional effects
};

// Fires once per stretch: the moment `fluent` has held `value` for exactly
// duration_minutes.
struct AfterTrigger {
    Name fluent;
    Value value;
    Minute duration_minutes;
    Name action;
};

// Fires when the count fluent first reaches threshold_minutes (previous
// timepoint strictly below).
struct WhenTrigger {
    Name count_fluent;
    Minute threshold_minutes;
    Name action;
};

using TriggerRule = std::variant<AfterTrigger, WhenTrigger>;

struct DefinedRule {
    Name fluent;
    Value value;
    TfPtr condition;
};

struct CountRule {
    Name count_fluent;
    TfPtr condition;  // counts minutes during which this holds
};

// ---------------------------------------------------------------------------
// Interval-side declarations (evaluated by the intervals module)
// ---------------------------------------------------------------------------

// Index offset of an interval relative to the current one; this = 0,
// next(t) = offset + 1, prev(t) = offset - 1.
struct IntervalTerm {
    int offset = 0;
    bool operator==(const IntervalTerm&) const = default;
};

struct PropRef {
    IntervalTerm term;
    Name prop;  // relevant fluent name or "length"
    bool operator==(const PropRef&) const = default;
};

struct IntervalValue {
    std::variant<PropRef, Value> rep;
    bool operator==(const IntervalValue&) const = default;
};

enum class CmpOp { eq, ne, lt, le, gt, ge };

struct IntervalFormula;
using IfPtr = std::shared_ptr<const IntervalFormula>;

struct IvCompare {
    IntervalValue lhs;
    CmpOp op;
    IntervalValue rhs;
};
struct IvAnd {
    std::vector<IfPtr> items;
};
struct IvNot {
    IfPtr sub;
};

struct IntervalFormula {
    std::variant<IvCompare, IvAnd, IvNot> node;
};

namespace ivf {
IfPtr compare(IntervalValue lhs, CmpOp op, IntervalValue rhs);
IfPtr conj(std::vector<IfPtr> items);
IfPtr negate(IfPtr sub);
bool equal(const IfPtr& a, const IfPtr& b);
void collect_props(const IfPtr& f, std::vector<Name>& out);
std::string str(const IfPtr& f);
}  // namespace ivf

// Arithmetic over property names and rational literals: +, -, *.
struct PropertyExpr;
using PePtr = std::shared_ptr<const PropertyExpr>;

struct PeConst {
    Rational value;
};
struct PeRef {
    Name property;
};
struct PeBinary {
    char op;  // '+', '-', '*'
    PePtr lhs;
    PePtr rhs;
};

struct PropertyExpr {
    std::variant<PeConst, PeRef, PeBinary> node;
};

namespace pe {
PePtr constant(Rational v);
PePtr ref(Name property);
PePtr binary(char op, PePtr lhs, PePtr rhs);
bool equal(const PePtr& a, const PePtr& b);
void collect_refs(const PePtr& e, std::vector<Name>& out);
std::string str(const PePtr& e);
}  // namespace pe

struct PropertyDecl {
    Name name;
    // Plain default value, or an expression evaluated after its dependencies.
    std::variant<Value, PePtr> default_value;
};

struct PropertyRule {
    Name property;
    IfPtr condition;
    Value value;
};

// ---------------------------------------------------------------------------
// Ruleset and scenario
// ---------------------------------------------------------------------------

struct Ruleset {
    std::vector<FluentDecl> fluents;
    std::vector<ActionDecl> actions;
    std::vector<EffectRule> effects;
    std::vector<TriggerRule> triggers;
    std::vector<DefinedRule> defined_rules;
    std::vector<CountRule> count_rules;
    std::vector<PropertyDecl> property_decls;
    std::vector<PropertyRule> property_rules;
    Minute horizon = kDefaultHorizon;

    const FluentDecl* find_fluent(const Name& n) const;
    const ActionDecl* find_action(const Name& n) const;
};

struct UserAction {
    Name action;
    Minute at;
    bool operator==(const UserAction&) const = default;
};

struct Scenario {
    std::vector<UserAction> user_actions;  // sorted by (at, action)

    void sort();
};

// ---------------------------------------------------------------------------
// Static validation
// ---------------------------------------------------------------------------

enum class EvalMode { single, changepoint };

struct Violation {
    std::string code;     // stable machine identifier, e.g. "defined-cycle"
    std::string message;  // human diagnostic
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string str() const;
};

// Checks reference integrity, domain membership, dependency acyclicity,
// count-rule uniqueness and, in changepoint mode, the restrictions that keep
// the world constant between changepoints (no duration operators and no
// count-fluent references in defined/count conditions, no relevant count
// fluents). Violations are data; this never throws.
ValidationReport validate_ruleset(const Ruleset& rs, EvalMode mode);
ValidationReport validate_ruleset(const Ruleset& rs, EvalMode mode,
                                  const Scenario& sc);

// Defined fluents ordered so that each appears after every defined fluent
// its rule conditions mention. Throws Error on a dependency cycle.
std::vector<Name> dependency_order(const Ruleset& rs);

// Every duration/time literal a granularity must divide: action times,
// trigger durations and thresholds, AtLeast/Exactly windows, the horizon.
std::vector<Minute> collect_time_literals(const Ruleset& rs,
                                          const Scenario& sc);

bool valid_identifier(const Name& n);

}  // namespace timecard

#endif
