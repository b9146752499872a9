#ifndef TIMECARD_EVENT_CALCULUS_HPP
#define TIMECARD_EVENT_CALCULUS_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "timecard/model.hpp"

namespace timecard {

// ---------------------------------------------------------------------------
// Full event-calculus programs: releases, trajectories, antitrajectories.
// Used for cross-validation of the engines and as a standalone reasoner.
// ---------------------------------------------------------------------------

struct EcFluent {
    Name name;
    std::vector<Value> poss_val;
};

struct EcHappens {
    Name action;
    Minute at;
};

struct EcCausesValue {
    Name action;
    Name fluent;
    Value value;
};

struct EcReleases {
    Name action;
    Name fluent;
};

// If value v1 of f1 is initiated by an action occurring exactly at t1, then
// f2 takes v2 at t1 + t2 (t2 > 0), unless v1 is terminated strictly in
// between. The anti form keys on termination (startedIn blocking).
struct EcTrajectoryRow {
    Name f1;
    Value v1;
    Minute t1;
    Name f2;
    Value v2;
    Minute t2;
};

// Generator form: whenever v1 of f1 is initiated at some t1, f2 takes
// value_of(f2, t1) + rate * t2 at every t1 + t2 until stopped.
struct EcLinearTrajectory {
    Name f1;
    Value v1;
    Name f2;
    std::int64_t rate;
};

struct EcProgram {
    Minute maxtime = 100;
    std::vector<EcFluent> fluents;
    std::vector<Name> actions;
    std::vector<EcHappens> happens;
    std::vector<EcCausesValue> causes;
    std::vector<EcReleases> releases;
    std::vector<EcTrajectoryRow> trajectory_rows;
    std::vector<EcTrajectoryRow> antitrajectory_rows;
    std::vector<EcLinearTrajectory> linear_trajectories;
    std::vector<EcLinearTrajectory> linear_antitrajectories;
    std::vector<std::pair<Name, Value>> initial_values;
    std::vector<Name> initially_released;
};

struct EcEvent {
    Name fluent;
    Value value;
    Minute at;
};

// Unique model of a program: a partial value map (released fluents may be
// valueless) plus release status and the derived initiation/termination
// events.
class EcModel {
public:
    Minute maxtime() const { return maxtime_; }
    const std::vector<Name>& fluents() const { return names_; }
    std::optional<Value> value(const Name& fluent, Minute t) const;
    bool released_at(const Name& fluent, Minute t) const;
    const std::vector<EcEvent>& initiated() const { return initiated_; }
    const std::vector<EcEvent>& terminated() const { return terminated_; }

private:
    friend EcModel evaluate_program(const EcProgram&);
    Minute maxtime_ = 0;
    std::vector<Name> names_;
    std::map<Name, std::vector<std::optional<Value>>> values_;
    std::map<Name, std::vector<char>> released_;
    std::vector<EcEvent> initiated_;
    std::vector<EcEvent> terminated_;
};

// Computes the unique model timepoint by timepoint: causes initiate and
// terminate values, unreleased values persist, released fluents stay
// released until some value of theirs is initiated or terminated,
// trajectories assert values from initiations (anti: terminations) until
// stopped. Violated constraints (two values for one fluent, a terminated
// value persisting, release coinciding with initiation, a value outside
// poss_val) raise InconsistencyError.
EcModel evaluate_program(const EcProgram& program);

// ---------------------------------------------------------------------------
// Stratification checking over rule dependency descriptions
// ---------------------------------------------------------------------------

// A predicate's level is either a constant or `t + base` where t is its
// time argument.
enum class LevelKind { constant, time_linear };

struct PredDecl {
    Name name;
    LevelKind kind = LevelKind::constant;
};

// One body literal; offset is the largest time argument the literal can
// take relative to the head's time (time_linear predicates only).
struct LitRef {
    Name pred;
    Minute offset = 0;
};

struct RuleDep {
    LitRef head;
    std::vector<LitRef> positive;
    std::vector<LitRef> negative;
};

struct StratumAssignment {
    // Base levels, normalized so the smallest is 0. A time_linear
    // predicate sits at base + t.
    std::map<Name, int> base;
    std::map<Name, LevelKind> kind;

    int base_of(const Name& pred) const { return base.at(pred); }
};

// Finds base levels such that along every rule, the head's level is >= each
// positive body literal's and > each negative one's, for every timepoint.
// Throws NonStratifiableError with an offending dependency cycle when no
// assignment exists.
StratumAssignment check_stratification(const std::vector<PredDecl>& preds,
                                       const std::vector<RuleDep>& rules);

// Dependency description of the reference evaluator's rule set, the one
// whose level mapping follows the 0 / t / t+1 pattern.
std::pair<std::vector<PredDecl>, std::vector<RuleDep>> builtin_ec_rules();

}  // namespace timecard

#endif
