#ifndef TIMECARD_ENGINE_SINGLE_HPP
#define TIMECARD_ENGINE_SINGLE_HPP

#include <unordered_map>
#include <vector>

#include "timecard/model.hpp"
#include "timecard/temporal.hpp"

namespace timecard {

// A cause produced at some minute, taking effect one minute later.
struct PendingCause {
    Name fluent;
    Value value;
    std::vector<Name> actions;  // the actions that produced it (merged)
};

// Snapshot of a run at one timepoint: every fluent's value, the minute each
// value took hold, and the causes that will land at the next minute.
// At most one pending value per fluent; distinct caused values are an
// inconsistency.
struct TickState {
    Minute t = 0;
    std::unordered_map<Name, Value> values;
    std::unordered_map<Name, Minute> anchors;
    std::vector<PendingCause> pending;
};

struct Happening {
    Minute at = 0;
    Name action;
    ActionKind kind = ActionKind::user;
    bool operator==(const Happening&) const = default;
};

struct RunTrace {
    Timeline timeline;
    std::vector<Happening> happenings;  // sorted by (at, action)
    std::size_t steps = 0;              // tick transitions (or advances)

    std::vector<Happening> fired_triggers() const;
};

// Forward per-tick evaluation over ticks 0, g, 2g, ... horizon. Effects land
// one minute after the causing action; triggers and effect conditions read
// the pre-effect state of their minute. Anchors are kept minute-precise, so
// results are identical for every granularity that divides all time
// literals (triggered actions may fire between ticks; they are detected and
// stamped exactly).
//
// Throws RangeError when the granularity does not divide some literal,
// Error when validation fails, InconsistencyError on conflicting causes or
// ambiguous defined-fluent rules.
RunTrace run_single(const Ruleset& rs, const Scenario& sc,
                    Minute granularity = 1);

// State at t = 0: initial values for inertial fluents, declared defaults for
// defined fluents, zero for counts; pending causes of the actions scheduled
// at minute 0.
TickState initial_state(const Ruleset& rs, const Scenario& sc);

// Evolves prev (at prev.t) to t = prev.t + g: lands prev's pending causes at
// prev.t + 1, re-evaluates defined fluents, accumulates count fluents, and
// applies any triggered actions that fire strictly inside (prev.t, t).
// Actions scheduled at t itself are the caller's business (occurring_actions
// / effective_causes). Duration conditions over non-atomic formulas need
// more history than a bare TickState carries and are rejected here; full
// runs evaluate them through run_single.
TickState tick_step(const Ruleset& rs, const TickState& prev, Minute t);

// Actions occurring at minute t: user and walltime occurrences scheduled at
// t, duration triggers whose fluent took its value exactly
// duration_minutes ago, and threshold triggers whose count fluent reached
// the threshold at t with the previous minute strictly below.
std::vector<Name> occurring_actions(const Ruleset& rs, const Scenario& sc,
                                    const HistoryView& view, Minute t);

// Effects of the given actions at minute t: unconditional effect rules plus
// conditional ones whose condition holds at t. Duplicate (fluent, value)
// pairs merge; distinct values for one fluent raise InconsistencyError.
std::vector<PendingCause> effective_causes(const Ruleset& rs,
                                           const std::vector<Name>& actions,
                                           const HistoryView& view, Minute t);

}  // namespace timecard

#endif
