#include "timecard/engine_single.hpp"

#include <algorithm>

#include "engine_support.hpp"
#include "timecard/errors.hpp"

namespace timecard {

using detail::Ctx;
using detail::WorkingHistory;

std::vector<Happening> RunTrace::fired_triggers() const {
    std::vector<Happening> out;
    for (const auto& h : happenings)
        if (h.kind == ActionKind::triggered) out.push_back(h);
    return out;
}

namespace detail {

namespace {

// Triggered actions due exactly at minute t, by direct inspection of the
// current state.
std::vector<Name> due_triggers(const Ctx& ctx, const TickState& st,
                               const WorkingHistory& hist, Minute t) {
    std::vector<Name> out;
    for (const AfterTrigger* a : ctx.afters) {
        if (st.values.at(a->fluent) != a->value) continue;
        if (st.anchors.at(a->fluent) + a->duration_minutes == t)
            out.push_back(a->action);
    }
    if (t >= 1) {
        for (const WhenTrigger* w : ctx.whens) {
            std::int64_t now = st.values.at(w->count_fluent).as_int();
            std::int64_t before =
                hist.value_at(w->count_fluent, t - 1).as_int();
            if (now >= w->threshold_minutes && before < w->threshold_minutes)
                out.push_back(w->action);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void record(const Ctx& ctx, std::vector<Happening>* out, Minute t,
            const std::vector<Name>& acts) {
    if (!out) return;
    for (const auto& a : acts)
        out->push_back(Happening{t, a, ctx.rs->find_action(a)->kind});
}

// Evaluation visiting every minute; needed when defined/count conditions
// look back in time or read count fluents.
void minute_window(const Ctx& ctx, TickState& st, WorkingHistory& hist,
                   Minute t, std::vector<Happening>* out) {
    for (Minute m = st.t + 1; m <= t; ++m) {
        land_pending(ctx, st, hist, m);
        for (const auto& name : ctx.order) {
            const FluentDecl& decl = ctx.fluent(name);
            if (decl.kind == FluentKind::defined) {
                Value v = defined_value_at(ctx, name, hist, m);
                auto& slot = st.values.at(name);
                if (slot != v) {
                    slot = v;
                    st.anchors[name] = m;
                    hist.set_value(name, m, v);
                }
            } else {
                bool on = count_condition_holds(ctx, name, hist, m);
                std::int64_t c = st.values.at(name).as_int() + (on ? 1 : 0);
                st.values.at(name) = Value::integer(c);
                hist.set_count_span(name, m, c, on ? 1 : 0);
            }
        }
        st.t = m;
        if (m < t) {
            std::vector<Name> fires = due_triggers(ctx, st, hist, m);
            if (!fires.empty()) {
                record(ctx, out, m, fires);
                st.pending = collect_causes(ctx, fires, hist, m);
            }
        }
    }
}

struct SpanCursor {
    std::unordered_map<Name, bool> accum;  // which counts are accumulating
};

void land_and_refresh(const Ctx& ctx, TickState& st, WorkingHistory& hist,
                      SpanCursor& cur, Minute landing) {
    land_pending(ctx, st, hist, landing);
    reeval_defined(ctx, st, hist, landing);
    cur.accum.clear();
    for (const auto& name : ctx.order) {
        if (ctx.fluent(name).kind != FluentKind::count) continue;
        bool on = count_condition_holds(ctx, name, hist, landing);
        cur.accum[name] = on;
        std::int64_t base = st.values.at(name).as_int() + (on ? 1 : 0);
        hist.set_count_span(name, landing, base, on ? 1 : 0);
    }
}

// Lazy evaluation across (st.t, t]: between landings and trigger firings the
// state is constant, so counts advance by whole spans and firing minutes are
// computed instead of scanned.
void span_window(const Ctx& ctx, TickState& st, WorkingHistory& hist,
                 Minute t, std::vector<Happening>* out) {
    Minute cursor = st.t;
    SpanCursor cur;
    land_and_refresh(ctx, st, hist, cur, cursor + 1);
    bool single_minute = (t - cursor) == 1;
    while (cursor < t) {
        Minute next = t;
        if (!single_minute) {
            for (const AfterTrigger* a : ctx.afters) {
                if (st.values.at(a->fluent) != a->value) continue;
                Minute cand =
                    st.anchors.at(a->fluent) + a->duration_minutes;
                if (cand > cursor && cand < next) next = cand;
            }
            for (const WhenTrigger* w : ctx.whens) {
                auto it = cur.accum.find(w->count_fluent);
                if (it == cur.accum.end() || !it->second) continue;
                std::int64_t now = st.values.at(w->count_fluent).as_int();
                if (now >= w->threshold_minutes) continue;
                Minute cand = cursor + (w->threshold_minutes - now);
                if (cand < next) next = cand;
            }
        }
        for (const auto& [name, on] : cur.accum) {
            if (!on) continue;
            auto& slot = st.values.at(name);
            slot = Value::integer(slot.as_int() + (next - cursor));
        }
        cursor = next;
        if (cursor == t) break;
        // A trigger fires strictly inside the window.
        std::vector<Name> fires;
        for (const AfterTrigger* a : ctx.afters) {
            if (st.values.at(a->fluent) == a->value &&
                st.anchors.at(a->fluent) + a->duration_minutes == cursor)
                fires.push_back(a->action);
        }
        for (const WhenTrigger* w : ctx.whens) {
            auto it = cur.accum.find(w->count_fluent);
            if (it != cur.accum.end() && it->second &&
                st.values.at(w->count_fluent).as_int() ==
                    w->threshold_minutes)
                fires.push_back(w->action);
        }
        std::sort(fires.begin(), fires.end());
        fires.erase(std::unique(fires.begin(), fires.end()), fires.end());
        record(ctx, out, cursor, fires);
        st.pending = collect_causes(ctx, fires, hist, cursor);
        st.t = cursor;
        land_and_refresh(ctx, st, hist, cur, cursor + 1);
    }
    st.t = t;
}

}  // namespace

void advance_window(const Ctx& ctx, TickState& st, WorkingHistory& hist,
                    Minute t, std::vector<Happening>* out) {
    if (ctx.minute_stepping)
        minute_window(ctx, st, hist, t, out);
    else
        span_window(ctx, st, hist, t, out);
}

}  // namespace detail

namespace {

void require_valid(const Ruleset& rs, const Scenario& sc) {
    ValidationReport report = validate_ruleset(rs, EvalMode::single, sc);
    if (!report.ok()) throw Error("ruleset not evaluable: " + report.str());
}

void require_granularity(const Ruleset& rs, const Scenario& sc, Minute g) {
    if (g < 1) throw RangeError("granularity must be >= 1");
    if (rs.horizon % g != 0)
        throw RangeError("granularity must divide the horizon");
    for (Minute lit : collect_time_literals(rs, sc))
        if (lit % g != 0)
            throw RangeError("granularity " + std::to_string(g) +
                             " does not divide time literal " +
                             std::to_string(lit));
}

TickState make_initial(const Ruleset& rs) {
    TickState st;
    st.t = 0;
    for (const auto& f : rs.fluents) {
        st.values[f.name] = f.kind == FluentKind::count ? Value::integer(0)
                                                        : f.initial_or_default;
        st.anchors[f.name] = 0;
    }
    return st;
}

}  // namespace

RunTrace run_single(const Ruleset& rs, const Scenario& sc,
                    Minute granularity) {
    require_valid(rs, sc);
    require_granularity(rs, sc, granularity);
    Scenario sorted = sc;
    sorted.sort();

    Ctx ctx = detail::build_ctx(rs, sorted);
    WorkingHistory hist(rs);
    TickState st = make_initial(rs);
    std::vector<Happening> happenings;

    auto at_tick = [&](Minute t) {
        std::vector<Name> acts = detail::scheduled_at(ctx, t);
        // Triggered actions due exactly at a tick.
        for (const AfterTrigger* a : ctx.afters) {
            if (st.values.at(a->fluent) == a->value &&
                st.anchors.at(a->fluent) + a->duration_minutes == t)
                acts.push_back(a->action);
        }
        if (t >= 1) {
            for (const WhenTrigger* w : ctx.whens) {
                std::int64_t now = st.values.at(w->count_fluent).as_int();
                std::int64_t before =
                    hist.value_at(w->count_fluent, t - 1).as_int();
                if (now >= w->threshold_minutes &&
                    before < w->threshold_minutes)
                    acts.push_back(w->action);
            }
        }
        std::sort(acts.begin(), acts.end());
        acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
        for (const auto& a : acts)
            happenings.push_back(Happening{t, a, rs.find_action(a)->kind});
        st.pending = detail::collect_causes(ctx, acts, hist, t);
    };

    at_tick(0);
    std::size_t steps = 0;
    for (Minute t = granularity; t <= rs.horizon; t += granularity) {
        detail::advance_window(ctx, st, hist, t, &happenings);
        at_tick(t);
        ++steps;
    }

    RunTrace trace;
    trace.timeline = hist.to_timeline(rs.horizon, granularity);
    trace.happenings = std::move(happenings);
    trace.steps = steps;
    return trace;
}

TickState initial_state(const Ruleset& rs, const Scenario& sc) {
    require_valid(rs, sc);
    Scenario sorted = sc;
    sorted.sort();
    Ctx ctx = detail::build_ctx(rs, sorted);
    WorkingHistory hist(rs);
    TickState st = make_initial(rs);
    st.pending =
        detail::collect_causes(ctx, detail::scheduled_at(ctx, 0), hist, 0);
    return st;
}

TickState tick_step(const Ruleset& rs, const TickState& prev, Minute t) {
    if (t <= prev.t) throw RangeError("tick_step target must be after prev.t");
    Ctx ctx = detail::build_ctx(rs, Scenario{});
    WorkingHistory hist(rs, prev);
    TickState st = prev;
    detail::advance_window(ctx, st, hist, t, nullptr);
    st.pending.clear();
    return st;
}

std::vector<Name> occurring_actions(const Ruleset& rs, const Scenario& sc,
                                    const HistoryView& view, Minute t) {
    Scenario sorted = sc;
    sorted.sort();
    Ctx ctx = detail::build_ctx(rs, sorted);
    std::vector<Name> out = detail::scheduled_at(ctx, t);
    for (const AfterTrigger* a : ctx.afters) {
        if (view.value_at(a->fluent, t) != a->value) continue;
        if (view.run_start(a->fluent, t) + a->duration_minutes == t)
            out.push_back(a->action);
    }
    if (t >= 1) {
        for (const WhenTrigger* w : ctx.whens) {
            std::int64_t now = view.value_at(w->count_fluent, t).as_int();
            std::int64_t before =
                view.value_at(w->count_fluent, t - 1).as_int();
            if (now >= w->threshold_minutes && before < w->threshold_minutes)
                out.push_back(w->action);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<PendingCause> effective_causes(const Ruleset& rs,
                                           const std::vector<Name>& actions,
                                           const HistoryView& view, Minute t) {
    Ctx ctx = detail::build_ctx(rs, Scenario{});
    return detail::collect_causes(ctx, actions, view, t);
}

}  // namespace timecard
