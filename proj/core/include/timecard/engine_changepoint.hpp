#ifndef TIMECARD_ENGINE_CHANGEPOINT_HPP
#define TIMECARD_ENGINE_CHANGEPOINT_HPP

#include <optional>
#include <utility>

#include "timecard/engine_single.hpp"

namespace timecard {

// Run record of the skipping engine: only the minutes where the world can
// change are evaluated. Between consecutive changepoints no action occurs
// and every non-count fluent is constant from the effect minute on.
struct ChangepointTrace {
    std::vector<Minute> changepoints;  // strictly increasing, 0 ... horizon
    std::vector<TickState> states;     // state at each changepoint
    std::vector<Happening> happenings;
    std::size_t advance_count = 0;     // dynamic steps (changepoints past 0)
};

// Minutes at which user or walltime actions are scheduled, deduplicated and
// sorted, with the horizon appended as the final element.
std::vector<Minute> upfront_points(const Ruleset& rs, const Scenario& sc);

// Earliest minute strictly after `current` at which a trigger will fire,
// assuming no scheduled action intervenes: for duration triggers the
// anchor plus the duration, for threshold triggers the linear
// extrapolation of the count. Candidates are computed on the segment state
// that follows `current` (pending causes applied), since that is the state
// the triggers will see. Returns nullopt when nothing is armed.
std::optional<Minute> search_next(const Ruleset& rs, const TickState& state,
                                  Minute current);

// One dynamic step from pp (= state.t) to cp: pending causes land at
// pp + 1, defined fluents are re-evaluated, counts accumulate cp - pp
// minutes when their condition holds on the segment. No action may occur
// strictly between pp and cp.
TickState advance(const Ruleset& rs, const TickState& state, Minute pp,
                  Minute cp);

// Evaluates the scenario visiting changepoints only. The per-minute
// expansion of the result equals run_single at granularity 1.
std::pair<RunTrace, ChangepointTrace> run_changepoint(const Ruleset& rs,
                                                      const Scenario& sc);

}  // namespace timecard

#endif
