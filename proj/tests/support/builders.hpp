#ifndef TIMECARD_TESTS_BUILDERS_HPP
#define TIMECARD_TESTS_BUILDERS_HPP

// Shorthand constructors for rulesets assembled in test code.

#include <string>

#include "timecard/model.hpp"

namespace timecard::testing {

inline Value B(bool b) { return Value::boolean(b); }
inline Value I(std::int64_t v) { return Value::integer(v); }
inline Value Sym(const char* s) { return Value::symbol(s); }

inline FluentDecl bool_fluent(Name name, bool initial, bool relevant = false,
                              FluentKind kind = FluentKind::inertial) {
    FluentDecl f;
    f.name = std::move(name);
    f.kind = kind;
    f.domain = {B(false), B(true)};
    f.initial_or_default = B(initial);
    f.relevant = relevant;
    return f;
}

inline FluentDecl enum_fluent(Name name, std::vector<Value> domain,
                              Value initial, bool relevant = false,
                              FluentKind kind = FluentKind::inertial) {
    FluentDecl f;
    f.name = std::move(name);
    f.kind = kind;
    f.domain = std::move(domain);
    f.initial_or_default = std::move(initial);
    f.relevant = relevant;
    return f;
}

inline FluentDecl count_fluent(Name name) {
    FluentDecl f;
    f.name = std::move(name);
    f.kind = FluentKind::count;
    f.initial_or_default = I(0);
    return f;
}

inline ActionDecl user_action(Name name) {
    ActionDecl a;
    a.name = std::move(name);
    a.kind = ActionKind::user;
    return a;
}

inline ActionDecl walltime_action(Name name, std::vector<Minute> schedule) {
    ActionDecl a;
    a.name = std::move(name);
    a.kind = ActionKind::walltime;
    a.walltime_schedule = std::move(schedule);
    return a;
}

inline ActionDecl triggered_action(Name name) {
    ActionDecl a;
    a.name = std::move(name);
    a.kind = ActionKind::triggered;
    return a;
}

inline EffectRule effect(Name action, Name fluent, Value v,
                         TfPtr cond = nullptr) {
    return EffectRule{std::move(action), std::move(fluent), std::move(v),
                      std::move(cond)};
}

inline DefinedRule defined_rule(Name fluent, Value v, TfPtr cond) {
    return DefinedRule{std::move(fluent), std::move(v), std::move(cond)};
}

inline CountRule count_rule(Name fluent, TfPtr cond) {
    return CountRule{std::move(fluent), std::move(cond)};
}

}  // namespace timecard::testing

#endif
