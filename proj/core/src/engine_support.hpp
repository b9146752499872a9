#ifndef TIMECARD_ENGINE_SUPPORT_HPP
#define TIMECARD_ENGINE_SUPPORT_HPP

// Internal machinery shared by the per-tick and changepoint engines:
// indexed ruleset access, the growing minute-exact history, and the
// state-transition primitives (cause landing, defined-fluent evaluation,
// effect collection). The engines differ in how they decide which minutes
// to visit; the meaning of a single transition lives here.

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "timecard/engine_single.hpp"
#include "timecard/errors.hpp"
#include "timecard/model.hpp"
#include "timecard/temporal.hpp"

namespace timecard::detail {

// Defined and count fluents in an order where every fluent follows
// everything its conditions mention. Requires prior validation (acyclic).
std::vector<Name> combined_order(const Ruleset& rs);

struct Ctx {
    const Ruleset* rs = nullptr;
    std::vector<Name> order;  // defined + count fluents, dependency order
    std::unordered_map<Name, const FluentDecl*> fluents;
    std::map<Minute, std::vector<Name>> schedule;  // user + walltime, dedup
    std::vector<const AfterTrigger*> afters;
    std::vector<const WhenTrigger*> whens;
    std::unordered_map<Name, std::vector<const DefinedRule*>> rules_for;
    std::unordered_map<Name, const CountRule*> count_rule_for;
    std::unordered_map<Name, std::vector<const EffectRule*>> effects_for;
    // Set when some defined/count condition looks back in time or reads a
    // count fluent; such rulesets are evaluated minute by minute.
    bool minute_stepping = false;

    const FluentDecl& fluent(const Name& n) const {
        auto it = fluents.find(n);
        if (it == fluents.end())
            throw ReferenceError("unknown fluent '" + n + "'");
        return *it->second;
    }
};

Ctx build_ctx(const Ruleset& rs, const Scenario& sc);

// Minute-exact value history of an in-progress run. Also the HistoryView
// the engines evaluate conditions through. Lookups below a fluent's floor
// (only nonzero for histories seeded from a bare TickState) are rejected.
class WorkingHistory final : public HistoryView {
public:
    // Full-run history starting at minute 0 from declared initial values.
    explicit WorkingHistory(const Ruleset& rs);
    // Partial history seeded from a state snapshot; values are known only
    // from each fluent's anchor onward (counts: from st.t).
    WorkingHistory(const Ruleset& rs, const TickState& st);

    Value value_at(const Name& fluent, Minute minute) const override;
    Minute run_start(const Name& fluent, Minute minute) const override;

    // Records that `fluent` shows `v` from `minute` on.
    void set_value(const Name& fluent, Minute minute, const Value& v);
    // Records that a count accumulates (slope 1) or stays flat (slope 0)
    // from `minute` on, starting at base.
    void set_count_span(const Name& fluent, Minute minute, std::int64_t base,
                        int slope);

    const std::vector<Piece>& pieces(const Name& fluent) const;
    // Finished timeline at the given granularity.
    Timeline to_timeline(Minute horizon, Minute granularity) const;

private:
    struct Track {
        Minute floor = 0;
        std::vector<Piece> pieces;
    };
    const Track& track(const Name& fluent) const;
    std::unordered_map<Name, Track> tracks_;
    std::vector<Name> names_;  // declaration order
};

// Applies st.pending at `landing` (= st.t + 1): inertial values change,
// anchors move, history is extended. Distinct caused values for one fluent
// raise InconsistencyError stamped with the cause minute. pending is
// cleared.
void land_pending(const Ctx& ctx, TickState& st, WorkingHistory& hist,
                  Minute landing);

// Value a defined fluent takes at `minute` under the current history:
// the unique applicable rule value, otherwise the declared default.
// Distinct applicable values raise InconsistencyError (ambiguity).
Value defined_value_at(const Ctx& ctx, const Name& fluent,
                       const HistoryView& view, Minute minute);

// Re-evaluates every defined fluent at `minute` in dependency order,
// updating state, anchors, and history.
void reeval_defined(const Ctx& ctx, TickState& st, WorkingHistory& hist,
                    Minute minute);

// Scheduled (user + walltime) action names at a minute, sorted, deduplicated.
std::vector<Name> scheduled_at(const Ctx& ctx, Minute t);

std::vector<PendingCause> collect_causes(const Ctx& ctx,
                                         const std::vector<Name>& actions,
                                         const HistoryView& view, Minute t);

// True when the count's condition holds at `minute`.
bool count_condition_holds(const Ctx& ctx, const Name& count_fluent,
                           const HistoryView& view, Minute minute);

}  // namespace timecard::detail

#endif
