#include "timecard/event_calculus.hpp"

#include <algorithm>
#include <set>

#include "timecard/errors.hpp"

namespace timecard {

// ---------------------------------------------------------------------------
// Model accessors
// ---------------------------------------------------------------------------

std::optional<Value> EcModel::value(const Name& fluent, Minute t) const {
    auto it = values_.find(fluent);
    if (it == values_.end())
        throw ReferenceError("unknown fluent '" + fluent + "'");
    if (t < 0 || t > maxtime_) throw RangeError("timepoint out of range");
    return it->second[static_cast<std::size_t>(t)];
}

bool EcModel::released_at(const Name& fluent, Minute t) const {
    auto it = released_.find(fluent);
    if (it == released_.end())
        throw ReferenceError("unknown fluent '" + fluent + "'");
    if (t < 0 || t > maxtime_) throw RangeError("timepoint out of range");
    return it->second[static_cast<std::size_t>(t)] != 0;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

struct Pending {
    std::optional<Value> value;
    std::string origin;
};

void propose(std::map<Name, Pending>& next, const Name& fluent,
             const Value& v, const std::string& origin, Minute t_next) {
    auto [it, inserted] = next.emplace(fluent, Pending{v, origin});
    if (!inserted && it->second.value && *it->second.value != v)
        throw InconsistencyError(
            InconsistencyError::Kind::constraint, fluent, t_next,
            "'" + fluent + "' would take both " + it->second.value->str() +
                " (" + it->second.origin + ") and " + v.str() + " (" +
                origin + ") at t=" + std::to_string(t_next));
}

}  // namespace

EcModel evaluate_program(const EcProgram& program) {
    EcModel model;
    model.maxtime_ = program.maxtime;
    if (program.maxtime < 0) throw RangeError("maxtime must be >= 0");

    std::map<Name, const EcFluent*> decls;
    for (const auto& f : program.fluents) {
        decls[f.name] = &f;
        model.names_.push_back(f.name);
        model.values_[f.name].assign(
            static_cast<std::size_t>(program.maxtime) + 1, std::nullopt);
        model.released_[f.name].assign(
            static_cast<std::size_t>(program.maxtime) + 1, 0);
    }
    auto decl_of = [&](const Name& n) -> const EcFluent& {
        auto it = decls.find(n);
        if (it == decls.end())
            throw ReferenceError("unknown fluent '" + n + "'");
        return *it->second;
    };

    std::set<Name> action_set(program.actions.begin(), program.actions.end());
    for (const auto& h : program.happens)
        if (!action_set.count(h.action))
            throw ReferenceError("unknown action '" + h.action + "'");

    auto check_poss = [&](const Name& f, const Value& v, Minute t) {
        const EcFluent& d = decl_of(f);
        if (std::find(d.poss_val.begin(), d.poss_val.end(), v) ==
            d.poss_val.end())
            throw InconsistencyError(
                InconsistencyError::Kind::constraint, f, t,
                v.str() + " is not a possible value of '" + f + "'");
    };

    for (const auto& [f, v] : program.initial_values) {
        check_poss(f, v, 0);
        model.values_[f][0] = v;
    }
    for (const auto& f : program.initially_released) {
        decl_of(f);
        model.released_[f][0] = 1;
    }

    for (Minute t = 0; t <= program.maxtime; ++t) {
        const auto ti = static_cast<std::size_t>(t);

        // Causes arising from the actions of this timepoint.
        std::vector<std::pair<Name, Value>> caused;
        std::set<Name> released_now;
        for (const auto& h : program.happens) {
            if (h.at != t) continue;
            for (const auto& c : program.causes)
                if (c.action == h.action) caused.emplace_back(c.fluent, c.value);
            for (const auto& r : program.releases)
                if (r.action == h.action) released_now.insert(r.fluent);
        }

        // A cause initiates its value and terminates the current one when
        // they differ; a valueless fluent has nothing to initiate against.
        std::set<Name> touched;  // fluents with an initiation or termination
        for (const auto& [f, v] : caused) {
            const auto& cur = model.values_[f][ti];
            if (!cur || *cur == v) continue;
            model.initiated_.push_back(EcEvent{f, v, t});
            model.terminated_.push_back(EcEvent{f, *cur, t});
            touched.insert(f);
        }

        if (t == program.maxtime) break;

        // Release bookkeeping for t+1.
        for (const auto& [name, d] : decls) {
            bool rel = false;
            if (released_now.count(name)) {
                rel = true;
                if (touched.count(name))
                    throw InconsistencyError(
                        InconsistencyError::Kind::constraint, name, t,
                        "'" + name +
                            "' released and initiated/terminated at once");
            } else if (model.released_[name][ti] && !touched.count(name)) {
                rel = true;
            }
            model.released_[name][ti + 1] = rel ? 1 : 0;
        }

        // Candidate values for t+1.
        std::map<Name, Pending> next;
        for (const auto& e : model.initiated_)
            if (e.at == t) propose(next, e.fluent, e.value, "initiation", t + 1);

        auto stopped_between = [&](const Name& f, const Value& v, Minute lo,
                                   Minute hi) {
            for (const auto& e : model.terminated_)
                if (e.fluent == f && e.value == v && lo < e.at && e.at < hi)
                    return true;
            return false;
        };
        auto started_between = [&](const Name& f, const Value& v, Minute lo,
                                   Minute hi) {
            for (const auto& e : model.initiated_)
                if (e.fluent == f && e.value == v && lo < e.at && e.at < hi)
                    return true;
            return false;
        };

        // Trajectory values landing at t+1, from any past initiation.
        for (const auto& row : program.trajectory_rows) {
            if (row.t1 + row.t2 != t + 1 || row.t2 <= 0) continue;
            bool initiated_then = false;
            for (const auto& e : model.initiated_)
                if (e.fluent == row.f1 && e.value == row.v1 && e.at == row.t1)
                    initiated_then = true;
            if (!initiated_then) continue;
            if (stopped_between(row.f1, row.v1, row.t1, t + 1)) continue;
            propose(next, row.f2, row.v2, "trajectory", t + 1);
        }
        for (const auto& row : program.antitrajectory_rows) {
            if (row.t1 + row.t2 != t + 1 || row.t2 <= 0) continue;
            bool terminated_then = false;
            for (const auto& e : model.terminated_)
                if (e.fluent == row.f1 && e.value == row.v1 && e.at == row.t1)
                    terminated_then = true;
            if (!terminated_then) continue;
            if (started_between(row.f1, row.v1, row.t1, t + 1)) continue;
            propose(next, row.f2, row.v2, "antitrajectory", t + 1);
        }
        for (const auto& gen : program.linear_trajectories) {
            for (const auto& e : model.initiated_) {
                if (e.fluent != gen.f1 || e.value != gen.v1) continue;
                Minute span = t + 1 - e.at;
                if (span <= 0) continue;
                if (stopped_between(gen.f1, gen.v1, e.at, t + 1)) continue;
                const auto& base =
                    model.values_[gen.f2][static_cast<std::size_t>(e.at)];
                if (!base || !base->is_int())
                    throw TypeError("linear trajectory needs an integer base "
                                    "value for '" +
                                    gen.f2 + "'");
                propose(next, gen.f2,
                        Value::integer(base->as_int() + gen.rate * span),
                        "trajectory", t + 1);
            }
        }
        for (const auto& gen : program.linear_antitrajectories) {
            for (const auto& e : model.terminated_) {
                if (e.fluent != gen.f1 || e.value != gen.v1) continue;
                Minute span = t + 1 - e.at;
                if (span <= 0) continue;
                if (started_between(gen.f1, gen.v1, e.at, t + 1)) continue;
                const auto& base =
                    model.values_[gen.f2][static_cast<std::size_t>(e.at)];
                if (!base || !base->is_int())
                    throw TypeError("linear antitrajectory needs an integer "
                                    "base value for '" +
                                    gen.f2 + "'");
                propose(next, gen.f2,
                        Value::integer(base->as_int() + gen.rate * span),
                        "antitrajectory", t + 1);
            }
        }

        // Inertia: an unreleased, unterminated value persists.
        for (const auto& [name, d] : decls) {
            const auto& cur = model.values_[name][ti];
            if (!cur) continue;
            if (model.released_[name][ti + 1]) continue;
            bool term = false;
            for (const auto& e : model.terminated_)
                if (e.at == t && e.fluent == name && e.value == *cur)
                    term = true;
            if (term) continue;
            propose(next, name, *cur, "inertia", t + 1);
        }

        // A terminated value may not persist into t+1.
        for (const auto& e : model.terminated_) {
            if (e.at != t) continue;
            auto it = next.find(e.fluent);
            if (it != next.end() && it->second.value &&
                *it->second.value == e.value)
                throw InconsistencyError(
                    InconsistencyError::Kind::constraint, e.fluent, t + 1,
                    "terminated value " + e.value.str() + " of '" + e.fluent +
                        "' persists");
        }

        for (const auto& [name, pending] : next) {
            if (!pending.value) continue;
            check_poss(name, *pending.value, t + 1);
            model.values_[name][ti + 1] = *pending.value;
        }
    }
    return model;
}

// ---------------------------------------------------------------------------
// Stratification
// ---------------------------------------------------------------------------

namespace {

struct Edge {
    std::size_t from;  // body predicate
    std::size_t to;    // head predicate
    int weight;        // base[to] - base[from] >= weight
};

}  // namespace

StratumAssignment check_stratification(const std::vector<PredDecl>& preds,
                                       const std::vector<RuleDep>& rules) {
    std::map<Name, std::size_t> index;
    for (std::size_t i = 0; i < preds.size(); ++i) index[preds[i].name] = i;
    auto idx = [&](const Name& n) {
        auto it = index.find(n);
        if (it == index.end())
            throw ReferenceError("undeclared predicate '" + n + "'");
        return it->second;
    };
    auto kind_of = [&](std::size_t i) { return preds[i].kind; };

    std::vector<Edge> edges;
    auto add_literal = [&](const RuleDep& r, const LitRef& body, bool neg) {
        std::size_t h = idx(r.head.pred);
        std::size_t b = idx(body.pred);
        bool h_lin = kind_of(h) == LevelKind::time_linear;
        bool b_lin = kind_of(b) == LevelKind::time_linear;
        int strict = neg ? 1 : 0;
        if (h_lin && b_lin) {
            // (t + base_h) >= (t + off + base_b) [+1]
            edges.push_back(
                Edge{b, h, static_cast<int>(body.offset) + strict});
        } else if (h_lin && !b_lin) {
            // binds at the smallest head time, 0
            edges.push_back(Edge{b, h, strict});
        } else if (!h_lin && b_lin) {
            // a constant level can never dominate an unbounded time level
            throw NonStratifiableError({body.pred, r.head.pred});
        } else {
            edges.push_back(Edge{b, h, strict});
        }
    };
    for (const auto& r : rules) {
        idx(r.head.pred);
        for (const auto& l : r.positive) add_literal(r, l, false);
        for (const auto& l : r.negative) add_literal(r, l, true);
    }

    // Longest-path feasibility of base[to] - base[from] >= w: a cycle of
    // positive total weight is unsatisfiable.
    const std::size_t n = preds.size();
    std::vector<int> dist(n, 0);
    std::vector<int> parent(n, -1);
    std::size_t changed_at = 0;
    for (std::size_t round = 0; round <= n; ++round) {
        bool changed = false;
        for (const auto& e : edges) {
            if (dist[e.from] + e.weight > dist[e.to]) {
                dist[e.to] = dist[e.from] + e.weight;
                parent[e.to] = static_cast<int>(e.from);
                changed = true;
                changed_at = e.to;
            }
        }
        if (!changed) break;
        if (round == n) {
            // Walk back to find a node inside the cycle, then collect it.
            std::size_t x = changed_at;
            for (std::size_t i = 0; i < n; ++i)
                x = static_cast<std::size_t>(parent[x]);
            std::vector<std::string> cycle;
            std::size_t y = x;
            do {
                cycle.push_back(preds[y].name);
                y = static_cast<std::size_t>(parent[y]);
            } while (y != x);
            std::reverse(cycle.begin(), cycle.end());
            cycle.push_back(preds[x].name);
            throw NonStratifiableError(cycle);
        }
    }

    int lo = 0;
    for (std::size_t i = 0; i < n; ++i) lo = std::min(lo, dist[i]);
    StratumAssignment out;
    for (std::size_t i = 0; i < n; ++i) {
        out.base[preds[i].name] = dist[i] - lo;
        out.kind[preds[i].name] = preds[i].kind;
    }
    return out;
}

std::pair<std::vector<PredDecl>, std::vector<RuleDep>> builtin_ec_rules() {
    using K = LevelKind;
    std::vector<PredDecl> preds = {
        {"fluent", K::constant},        {"time", K::constant},
        {"action", K::constant},        {"possVal", K::constant},
        {"happens", K::constant},       {"causesValue", K::constant},
        {"releases", K::constant},      {"released", K::constant},
        {"valueCaused", K::constant},   {"trajectory", K::constant},
        {"antitrajectory", K::constant},
        {"stoppedIn", K::time_linear},  {"startedIn", K::time_linear},
        {"initiated", K::time_linear},  {"terminated", K::time_linear},
        {"releasedAt", K::time_linear}, {"valueOf", K::time_linear},
    };
    std::vector<RuleDep> rules;
    auto rule = [&](LitRef head, std::vector<LitRef> pos,
                    std::vector<LitRef> neg) {
        rules.push_back(RuleDep{head, std::move(pos), std::move(neg)});
    };
    // valueCaused(F,V,T) <- action(A), happens(A,T), causesValue(A,F,V).
    rule({"valueCaused"}, {{"action"}, {"happens"}, {"causesValue"}}, {});
    // initiated(F,V,T) <- fluent(F), valueCaused(F,V,T), valueOf(F,V2,T).
    rule({"initiated", 0}, {{"fluent"}, {"valueCaused"}, {"valueOf", 0}}, {});
    rule({"terminated", 0}, {{"fluent"}, {"valueCaused"}, {"valueOf", 0}}, {});
    // stoppedIn(T1,F,V,T2) <- terminated(F,V,T), T1 < T < T2.
    rule({"stoppedIn", 0}, {{"fluent"}, {"time"}, {"terminated", -1}}, {});
    rule({"startedIn", 0}, {{"fluent"}, {"time"}, {"initiated", -1}}, {});
    // valueOf(F2,V2,T1+T2) <- initiated(F1,V1,T1), trajectory(...),
    //                         not stoppedIn(T1,F1,V1,T1+T2).
    rule({"valueOf", 0}, {{"fluent"}, {"time"}, {"initiated", -1},
                          {"trajectory"}},
         {{"stoppedIn", 0}});
    rule({"valueOf", 0}, {{"fluent"}, {"time"}, {"terminated", -1},
                          {"antitrajectory"}},
         {{"startedIn", 0}});
    // valueOf(F,V,T+1) <- valueOf(F,V,T), not terminated(F,V,T),
    //                     not releasedAt(F,T).
    rule({"valueOf", 0}, {{"fluent"}, {"time"}, {"valueOf", -1}},
         {{"terminated", -1}, {"releasedAt", -1}});
    // valueOf(F,V,T+1) <- initiated(F,V,T).
    rule({"valueOf", 0}, {{"fluent"}, {"time"}, {"initiated", -1}}, {});
    // releasedAt(F,T+1) <- releasedAt(F,T), possVal(F,V),
    //                      not initiated(F,V,T), not terminated(F,V,T).
    rule({"releasedAt", 0}, {{"fluent"}, {"releasedAt", -1}, {"possVal"}},
         {{"initiated", -1}, {"terminated", -1}});
    // releasedAt(F,T+1) <- releases(A,F), happens(A,T).
    rule({"releasedAt", 0}, {{"fluent"}, {"releases"}, {"happens"}}, {});
    // released(F,T) <- releases(A,F), action(A), happens(A,T).
    rule({"released"}, {{"fluent"}, {"releases"}, {"action"}, {"happens"}},
         {});
    return {std::move(preds), std::move(rules)};
}

}  // namespace timecard
