#ifndef TIMECARD_REPORT_HPP
#define TIMECARD_REPORT_HPP

#include <optional>
#include <string>

#include "timecard/engine_changepoint.hpp"
#include "timecard/engine_single.hpp"
#include "timecard/intervals.hpp"

namespace timecard {

// Everything a run produces, ready for serialization: happenings,
// changepoints (skipping engine only), wage intervals with their property
// values, the total, and timing.
struct TraceReport {
    std::string engine;  // "single" or "changepoint"
    Minute granularity = 1;
    Minute horizon = 0;
    std::size_t steps = 0;
    std::vector<Happening> happenings;
    std::vector<Minute> changepoints;
    std::vector<Name> relevant;        // interval column order
    std::vector<Name> property_names;  // property column order
    std::vector<Interval> intervals;
    std::vector<std::map<Name, Rational>> properties;
    WageBreakdown wage;
    double wall_ms = 0.0;
};

TraceReport build_report(const Ruleset& rs, const RunTrace& run,
                         const std::string& engine, Minute granularity,
                         const ChangepointTrace* cpt = nullptr);

// Stable text serialization; every field on its own line, wall_ms last so
// golden comparisons can strip it.
std::string report_text(const TraceReport& report);

// First difference between two runs of the same ruleset: happenings,
// per-minute fluent values, interval boundaries, property values, totals.
// nullopt means fully equivalent.
std::optional<std::string> compare_runs(const Ruleset& rs,
                                        const RunTrace& a,
                                        const RunTrace& b);

// Returns a copy of `run` with one fluent's value flipped for one minute;
// lets tests and the diff command demonstrate divergence reporting.
RunTrace with_flipped_value(const Ruleset& rs, const RunTrace& run,
                            Minute at);

}  // namespace timecard

#endif
