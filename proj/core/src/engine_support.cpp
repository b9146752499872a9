#include "engine_support.hpp"

namespace timecard::detail {

std::vector<Name> combined_order(const Ruleset& rs) {
    std::map<Name, std::vector<Name>> deps;
    std::set<Name> tracked;
    for (const auto& f : rs.fluents)
        if (f.kind != FluentKind::inertial) tracked.insert(f.name);
    for (const auto& r : rs.defined_rules)
        if (r.condition) tf::collect_fluents(r.condition, deps[r.fluent]);
    for (const auto& r : rs.count_rules)
        if (r.condition) tf::collect_fluents(r.condition, deps[r.count_fluent]);

    std::vector<Name> order;
    std::map<Name, int> state;
    auto visit = [&](auto&& self, const Name& n) -> void {
        if (!tracked.count(n)) return;
        int& s = state[n];
        if (s == 2) return;
        if (s == 1) throw Error("dependency cycle through '" + n + "'");
        s = 1;
        for (const auto& d : deps[n]) self(self, d);
        s = 2;
        order.push_back(n);
    };
    for (const auto& f : rs.fluents)
        if (f.kind != FluentKind::inertial) visit(visit, f.name);
    return order;
}

Ctx build_ctx(const Ruleset& rs, const Scenario& sc) {
    Ctx ctx;
    ctx.rs = &rs;
    ctx.order = combined_order(rs);
    for (const auto& f : rs.fluents) ctx.fluents[f.name] = &f;
    for (const auto& a : rs.actions)
        for (Minute t : a.walltime_schedule)
            if (t <= rs.horizon) ctx.schedule[t].push_back(a.name);
    for (const auto& u : sc.user_actions)
        if (u.at <= rs.horizon) ctx.schedule[u.at].push_back(u.action);
    for (auto& [t, names] : ctx.schedule) {
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
    }
    for (const auto& t : rs.triggers) {
        if (const auto* a = std::get_if<AfterTrigger>(&t))
            ctx.afters.push_back(a);
        else
            ctx.whens.push_back(&std::get<WhenTrigger>(t));
    }
    for (const auto& r : rs.defined_rules) ctx.rules_for[r.fluent].push_back(&r);
    for (const auto& r : rs.count_rules) ctx.count_rule_for[r.count_fluent] = &r;
    for (const auto& e : rs.effects) ctx.effects_for[e.action].push_back(&e);

    auto needs_minutes = [&](const TfPtr& c) {
        if (!tf::duration_free(c)) return true;
        std::vector<Name> names;
        tf::collect_fluents(c, names);
        for (const auto& n : names) {
            auto it = ctx.fluents.find(n);
            if (it != ctx.fluents.end() &&
                it->second->kind == FluentKind::count)
                return true;
        }
        return false;
    };
    for (const auto& r : rs.defined_rules)
        if (needs_minutes(r.condition)) ctx.minute_stepping = true;
    for (const auto& r : rs.count_rules)
        if (needs_minutes(r.condition)) ctx.minute_stepping = true;
    return ctx;
}

// ---------------------------------------------------------------------------
// WorkingHistory
// ---------------------------------------------------------------------------

WorkingHistory::WorkingHistory(const Ruleset& rs) {
    for (const auto& f : rs.fluents) {
        Track tr;
        tr.floor = 0;
        if (f.kind == FluentKind::count)
            tr.pieces.push_back(Piece{0, Value::integer(0), 0});
        else
            tr.pieces.push_back(Piece{0, f.initial_or_default, 0});
        tracks_[f.name] = std::move(tr);
        names_.push_back(f.name);
    }
}

WorkingHistory::WorkingHistory(const Ruleset& rs, const TickState& st) {
    for (const auto& f : rs.fluents) {
        auto vit = st.values.find(f.name);
        if (vit == st.values.end())
            throw ReferenceError("state lacks a value for '" + f.name + "'");
        Track tr;
        Minute anchor = 0;
        if (auto ait = st.anchors.find(f.name); ait != st.anchors.end())
            anchor = ait->second;
        if (f.kind == FluentKind::count) {
            // Only the present total is known.
            tr.floor = st.t;
            tr.pieces.push_back(Piece{st.t, vit->second, 0});
        } else {
            tr.floor = anchor;
            tr.pieces.push_back(Piece{anchor, vit->second, 0});
        }
        tracks_[f.name] = std::move(tr);
        names_.push_back(f.name);
    }
}

const WorkingHistory::Track& WorkingHistory::track(const Name& fluent) const {
    auto it = tracks_.find(fluent);
    if (it == tracks_.end())
        throw ReferenceError("unknown fluent '" + fluent + "'");
    return it->second;
}

namespace {
const Piece& piece_covering(const std::vector<Piece>& ps, Minute m) {
    auto it = std::upper_bound(
        ps.begin(), ps.end(), m,
        [](Minute v, const Piece& p) { return v < p.from; });
    return *(it - 1);
}
}  // namespace

Value WorkingHistory::value_at(const Name& fluent, Minute minute) const {
    const Track& tr = track(fluent);
    if (minute < tr.floor)
        throw Error("history of '" + fluent + "' does not reach back to " +
                    std::to_string(minute));
    const Piece& p = piece_covering(tr.pieces, minute);
    if (p.slope == 0) return p.value;
    return Value::integer(p.value.as_int() + p.slope * (minute - p.from));
}

Minute WorkingHistory::run_start(const Name& fluent, Minute minute) const {
    const Track& tr = track(fluent);
    if (minute < tr.floor)
        throw Error("history of '" + fluent + "' does not reach back to " +
                    std::to_string(minute));
    const Piece& p = piece_covering(tr.pieces, minute);
    if (p.slope != 0) return minute;
    return std::max(p.from, tr.floor);
}

void WorkingHistory::set_value(const Name& fluent, Minute minute,
                               const Value& v) {
    Track& tr = tracks_.at(fluent);
    Piece& last = tr.pieces.back();
    if (minute < last.from)
        throw Error("history updates must move forward in time");
    if (minute == last.from) {
        last.value = v;
        last.slope = 0;
        return;
    }
    if (last.slope == 0 && last.value == v) return;
    tr.pieces.push_back(Piece{minute, v, 0});
}

void WorkingHistory::set_count_span(const Name& fluent, Minute minute,
                                    std::int64_t base, int slope) {
    Track& tr = tracks_.at(fluent);
    Piece& last = tr.pieces.back();
    if (minute < last.from)
        throw Error("history updates must move forward in time");
    if (last.slope == slope) {
        // Continuation of the same ramp?
        std::int64_t expected =
            last.value.as_int() + last.slope * (minute - last.from);
        if (expected == base) return;
    }
    if (minute == last.from) {
        last.value = Value::integer(base);
        last.slope = slope;
        return;
    }
    tr.pieces.push_back(Piece{minute, Value::integer(base), slope});
}

const std::vector<Piece>& WorkingHistory::pieces(const Name& fluent) const {
    return track(fluent).pieces;
}

Timeline WorkingHistory::to_timeline(Minute horizon,
                                     Minute granularity) const {
    Timeline::Builder b(horizon, granularity);
    for (const auto& n : names_) {
        std::size_t idx = b.add_fluent(n);
        for (const auto& p : tracks_.at(n).pieces) {
            if (p.from > horizon) break;
            b.append(idx, p);
        }
    }
    return std::move(b).finish();
}

// ---------------------------------------------------------------------------
// Transition primitives
// ---------------------------------------------------------------------------

void land_pending(const Ctx& ctx, TickState& st, WorkingHistory& hist,
                  Minute landing) {
    (void)ctx;
    for (std::size_t i = 0; i < st.pending.size(); ++i)
        for (std::size_t j = i + 1; j < st.pending.size(); ++j)
            if (st.pending[i].fluent == st.pending[j].fluent &&
                st.pending[i].value != st.pending[j].value)
                throw InconsistencyError(
                    InconsistencyError::Kind::conflicting_causes,
                    st.pending[i].fluent, landing - 1,
                    "pending causes disagree on '" + st.pending[i].fluent +
                        "'");
    for (const auto& p : st.pending) {
        auto it = st.values.find(p.fluent);
        if (it == st.values.end())
            throw ReferenceError("cause for unknown fluent '" + p.fluent +
                                 "'");
        if (it->second == p.value) continue;  // re-caused value, no change
        it->second = p.value;
        st.anchors[p.fluent] = landing;
        hist.set_value(p.fluent, landing, p.value);
    }
    st.pending.clear();
}

Value defined_value_at(const Ctx& ctx, const Name& fluent,
                       const HistoryView& view, Minute minute) {
    const FluentDecl& decl = ctx.fluent(fluent);
    auto it = ctx.rules_for.find(fluent);
    const Value* chosen = nullptr;
    if (it != ctx.rules_for.end()) {
        for (const DefinedRule* r : it->second) {
            if (!holds_at(r->condition, view, minute)) continue;
            if (!chosen) {
                chosen = &r->value;
            } else if (*chosen != r->value) {
                throw InconsistencyError(
                    InconsistencyError::Kind::ambiguous_rules, fluent, minute,
                    "rules for '" + fluent + "' yield both " + chosen->str() +
                        " and " + r->value.str());
            }
        }
    }
    return chosen ? *chosen : decl.initial_or_default;
}

void reeval_defined(const Ctx& ctx, TickState& st, WorkingHistory& hist,
                    Minute minute) {
    for (const auto& name : ctx.order) {
        if (ctx.fluent(name).kind != FluentKind::defined) continue;
        Value v = defined_value_at(ctx, name, hist, minute);
        auto it = st.values.find(name);
        if (it->second != v) {
            it->second = v;
            st.anchors[name] = minute;
            hist.set_value(name, minute, v);
        }
    }
}

std::vector<Name> scheduled_at(const Ctx& ctx, Minute t) {
    auto it = ctx.schedule.find(t);
    if (it == ctx.schedule.end()) return {};
    return it->second;
}

std::vector<PendingCause> collect_causes(const Ctx& ctx,
                                         const std::vector<Name>& actions,
                                         const HistoryView& view, Minute t) {
    std::vector<PendingCause> out;
    auto add = [&](const Name& fluent, const Value& v, const Name& action) {
        for (auto& p : out) {
            if (p.fluent != fluent) continue;
            if (p.value != v) {
                std::string who;
                for (const auto& a : p.actions) who += a + ", ";
                who += action;
                throw InconsistencyError(
                    InconsistencyError::Kind::conflicting_causes, fluent, t,
                    "actions {" + who + "} cause '" + fluent + "' to take " +
                        p.value.str() + " and " + v.str());
            }
            if (std::find(p.actions.begin(), p.actions.end(), action) ==
                p.actions.end())
                p.actions.push_back(action);
            return;
        }
        out.push_back(PendingCause{fluent, v, {action}});
    };
    for (const auto& a : actions) {
        auto it = ctx.effects_for.find(a);
        if (it == ctx.effects_for.end()) continue;
        for (const EffectRule* e : it->second) {
            if (e->condition && !holds_at(e->condition, view, t)) continue;
            add(e->fluent, e->value, a);
        }
    }
    return out;
}

bool count_condition_holds(const Ctx& ctx, const Name& count_fluent,
                           const HistoryView& view, Minute minute) {
    auto it = ctx.count_rule_for.find(count_fluent);
    if (it == ctx.count_rule_for.end())
        throw ReferenceError("count fluent '" + count_fluent +
                             "' has no rule");
    return holds_at(it->second->condition, view, minute);
}

}  // namespace timecard::detail
