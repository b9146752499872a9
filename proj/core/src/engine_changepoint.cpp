#include "timecard/engine_changepoint.hpp"

#include <algorithm>
#include <set>

#include "engine_support.hpp"
#include "timecard/errors.hpp"

namespace timecard {

using detail::Ctx;
using detail::WorkingHistory;

namespace {

void require_valid(const Ruleset& rs, const Scenario& sc) {
    ValidationReport report = validate_ruleset(rs, EvalMode::changepoint, sc);
    if (!report.ok())
        throw Error("ruleset not evaluable in changepoint mode: " +
                    report.str());
}

// The state of the segment following a changepoint: pending causes landed,
// defined fluents re-evaluated. Changepoint-mode conditions are
// duration-free, so the maps are all a condition needs; run_start backs the
// atomic duration forms in effect conditions.
class SegmentView final : public HistoryView {
public:
    SegmentView(const Ctx& ctx, const TickState& st) : seg_start_(st.t + 1) {
        values_ = st.values;
        anchors_ = st.anchors;
        for (const auto& p : st.pending) {
            auto it = values_.find(p.fluent);
            if (it == values_.end() || it->second == p.value) continue;
            it->second = p.value;
            anchors_[p.fluent] = seg_start_;
        }
        for (const auto& name : ctx.order) {
            if (ctx.fluent(name).kind != FluentKind::defined) continue;
            Value v = detail::defined_value_at(ctx, name, *this, seg_start_);
            auto it = values_.find(name);
            if (it->second != v) {
                it->second = v;
                anchors_[name] = seg_start_;
            }
        }
    }

    Value value_at(const Name& fluent, Minute) const override {
        auto it = values_.find(fluent);
        if (it == values_.end())
            throw ReferenceError("unknown fluent '" + fluent + "'");
        return it->second;
    }
    Minute run_start(const Name& fluent, Minute) const override {
        auto it = anchors_.find(fluent);
        if (it == anchors_.end())
            throw ReferenceError("unknown fluent '" + fluent + "'");
        return it->second;
    }

    const Value& value(const Name& fluent) const { return values_.at(fluent); }
    Minute anchor(const Name& fluent) const { return anchors_.at(fluent); }

private:
    Minute seg_start_;
    std::unordered_map<Name, Value> values_;
    std::unordered_map<Name, Minute> anchors_;
};

std::optional<Minute> search_next_impl(const Ctx& ctx, const TickState& st,
                                       Minute current) {
    SegmentView seg(ctx, st);
    std::optional<Minute> next;
    auto consider = [&](Minute cand) {
        if (cand <= current) return;
        if (!next || cand < *next) next = cand;
    };
    for (const AfterTrigger* a : ctx.afters) {
        if (seg.value(a->fluent) != a->value) continue;
        consider(seg.anchor(a->fluent) + a->duration_minutes);
    }
    for (const WhenTrigger* w : ctx.whens) {
        if (!detail::count_condition_holds(ctx, w->count_fluent, seg,
                                           current + 1))
            continue;
        std::int64_t now = st.values.at(w->count_fluent).as_int();
        if (now >= w->threshold_minutes) continue;
        consider(current + (w->threshold_minutes - now));
    }
    return next;
}

// Dynamic step; extends `hist` when recording a real run, or a scratch
// history for the free-standing operation.
TickState advance_impl(const Ctx& ctx, const TickState& prev,
                       WorkingHistory& hist, Minute cp) {
    TickState st = prev;
    Minute landing = prev.t + 1;
    detail::land_pending(ctx, st, hist, landing);
    detail::reeval_defined(ctx, st, hist, landing);
    Minute span = cp - prev.t;
    for (const auto& name : ctx.order) {
        if (ctx.fluent(name).kind != FluentKind::count) continue;
        bool on = detail::count_condition_holds(ctx, name, hist, landing);
        std::int64_t base = st.values.at(name).as_int() + (on ? 1 : 0);
        hist.set_count_span(name, landing, base, on ? 1 : 0);
        if (on)
            st.values.at(name) =
                Value::integer(st.values.at(name).as_int() + span);
    }
    st.t = cp;
    return st;
}

// Actions due at a changepoint: scheduled plus triggers whose firing minute
// is exactly cp.
std::vector<Name> due_at(const Ctx& ctx, const TickState& st,
                         const WorkingHistory& hist, Minute cp) {
    std::vector<Name> acts = detail::scheduled_at(ctx, cp);
    for (const AfterTrigger* a : ctx.afters) {
        if (st.values.at(a->fluent) != a->value) continue;
        if (st.anchors.at(a->fluent) + a->duration_minutes == cp)
            acts.push_back(a->action);
    }
    if (cp >= 1) {
        for (const WhenTrigger* w : ctx.whens) {
            std::int64_t now = st.values.at(w->count_fluent).as_int();
            std::int64_t before =
                hist.value_at(w->count_fluent, cp - 1).as_int();
            if (now >= w->threshold_minutes && before < w->threshold_minutes)
                acts.push_back(w->action);
        }
    }
    std::sort(acts.begin(), acts.end());
    acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
    return acts;
}

}  // namespace

std::vector<Minute> upfront_points(const Ruleset& rs, const Scenario& sc) {
    std::set<Minute> points;
    for (const auto& a : rs.actions)
        for (Minute t : a.walltime_schedule)
            if (t >= 0 && t <= rs.horizon) points.insert(t);
    for (const auto& u : sc.user_actions)
        if (u.at >= 0 && u.at <= rs.horizon) points.insert(u.at);
    points.insert(rs.horizon);
    return {points.begin(), points.end()};
}

std::optional<Minute> search_next(const Ruleset& rs, const TickState& state,
                                  Minute current) {
    Ctx ctx = detail::build_ctx(rs, Scenario{});
    return search_next_impl(ctx, state, current);
}

TickState advance(const Ruleset& rs, const TickState& state, Minute pp,
                  Minute cp) {
    if (state.t != pp) throw RangeError("state must be at pp");
    if (cp <= pp) throw RangeError("cp must be after pp");
    Ctx ctx = detail::build_ctx(rs, Scenario{});
    WorkingHistory hist(rs, state);
    return advance_impl(ctx, state, hist, cp);
}

std::pair<RunTrace, ChangepointTrace> run_changepoint(const Ruleset& rs,
                                                      const Scenario& sc) {
    require_valid(rs, sc);
    Scenario sorted = sc;
    sorted.sort();
    Ctx ctx = detail::build_ctx(rs, sorted);
    WorkingHistory hist(rs);

    ChangepointTrace trace;
    std::vector<Minute> upfront = upfront_points(rs, sorted);

    TickState st;
    st.t = 0;
    for (const auto& f : rs.fluents) {
        st.values[f.name] = f.kind == FluentKind::count ? Value::integer(0)
                                                        : f.initial_or_default;
        st.anchors[f.name] = 0;
    }
    auto fire_at = [&](Minute cp) {
        std::vector<Name> acts = due_at(ctx, st, hist, cp);
        for (const auto& a : acts)
            trace.happenings.push_back(
                Happening{cp, a, rs.find_action(a)->kind});
        st.pending = detail::collect_causes(ctx, acts, hist, cp);
    };
    fire_at(0);
    trace.changepoints.push_back(0);
    trace.states.push_back(st);

    std::size_t i = 0;
    while (i < upfront.size() && upfront[i] <= 0) ++i;
    Minute current = 0;
    while (current < rs.horizon) {
        std::optional<Minute> triggered = search_next_impl(ctx, st, current);
        Minute next;
        if (triggered && *triggered < upfront[i]) {
            next = *triggered;
        } else {
            next = upfront[i];
            ++i;
        }
        st = advance_impl(ctx, st, hist, next);
        ++trace.advance_count;
        fire_at(next);
        trace.changepoints.push_back(next);
        trace.states.push_back(st);
        current = next;
    }

    RunTrace run;
    run.timeline = hist.to_timeline(rs.horizon, 1);
    run.happenings = trace.happenings;
    run.steps = trace.advance_count;
    return {std::move(run), std::move(trace)};
}

}  // namespace timecard
