#ifndef TIMECARD_TESTS_GENERATORS_HPP
#define TIMECARD_TESTS_GENERATORS_HPP

// Randomized rulesets and scenarios, valid in changepoint mode by
// construction: defined/count conditions stay duration- and count-free;
// effect conditions may carry durations over atoms.

#include <optional>
#include <random>
#include <string>

#include "support/builders.hpp"
#include "timecard/engine_changepoint.hpp"
#include "timecard/engine_single.hpp"
#include "timecard/errors.hpp"
#include "timecard/report.hpp"

namespace timecard::testing {

struct GenOptions {
    int inertial = 4;
    int defined = 2;
    int counts = 1;
    int user_actions = 3;
    int walltime_actions = 2;
    int triggered_actions = 2;
    Minute horizon = 2880;
    Minute literal_step = 1;  // every literal is a multiple of this
    bool effect_condition_durations = true;
    bool with_properties = true;
};

class RulesetGen {
public:
    RulesetGen(std::mt19937_64& rng, GenOptions opt) : rng_(rng), opt_(opt) {}

    Ruleset ruleset() {
        Ruleset rs;
        rs.horizon = opt_.horizon;
        make_fluents(rs);
        make_actions(rs);
        make_effects(rs);
        make_triggers(rs);
        if (opt_.with_properties) make_properties(rs);
        return rs;
    }

    Scenario scenario(const Ruleset& rs, int occurrences) {
        std::vector<Name> users;
        for (const auto& a : rs.actions)
            if (a.kind == ActionKind::user) users.push_back(a.name);
        Scenario sc;
        if (users.empty()) return sc;
        for (int i = 0; i < occurrences; ++i) {
            Minute t = step_minute(1, rs.horizon - 1);
            sc.user_actions.push_back({pick(users), t});
        }
        sc.sort();
        return sc;
    }

private:
    int irand(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }
    bool coin(double p = 0.5) {
        return std::uniform_real_distribution<double>(0, 1)(rng_) < p;
    }
    Minute step_minute(Minute lo, Minute hi) {
        Minute step = opt_.literal_step;
        Minute lo_s = (lo + step - 1) / step;
        Minute hi_s = hi / step;
        if (hi_s < lo_s) hi_s = lo_s;
        return std::uniform_int_distribution<Minute>(lo_s, hi_s)(rng_) * step;
    }
    template <typename T>
    const T& pick(const std::vector<T>& xs) {
        return xs[static_cast<std::size_t>(irand(
            0, static_cast<int>(xs.size()) - 1))];
    }

    Value domain_value(const FluentDecl& f) {
        return f.domain[static_cast<std::size_t>(
            irand(0, static_cast<int>(f.domain.size()) - 1))];
    }

    void make_fluents(Ruleset& rs) {
        int n_inertial = irand(1, opt_.inertial);
        for (int i = 0; i < n_inertial; ++i) {
            Name name = "f" + std::to_string(i);
            if (coin(0.7)) {
                rs.fluents.push_back(bool_fluent(name, coin(), coin(0.4)));
            } else {
                std::vector<Value> domain = {Sym("s0"), Sym("s1"), Sym("s2")};
                Value init = domain[static_cast<std::size_t>(irand(0, 2))];
                rs.fluents.push_back(
                    enum_fluent(name, domain, init, coin(0.4)));
            }
        }
        int n_defined = irand(0, opt_.defined);
        for (int i = 0; i < n_defined; ++i) {
            Name name = "d" + std::to_string(i);
            rs.fluents.push_back(
                bool_fluent(name, false, coin(0.4), FluentKind::defined));
            int rules = irand(1, 2);
            for (int r = 0; r < rules; ++r)
                rs.defined_rules.push_back(defined_rule(
                    name, B(true), plain_condition(rs, name)));
        }
        int n_counts = irand(0, opt_.counts);
        for (int i = 0; i < n_counts; ++i) {
            Name name = "c" + std::to_string(i);
            rs.fluents.push_back(count_fluent(name));
            rs.count_rules.push_back(
                count_rule(name, plain_condition(rs, name)));
        }
    }

    // Duration- and count-free condition over fluents declared before
    // `before` (keeps the dependency graph acyclic by construction).
    TfPtr plain_condition(const Ruleset& rs, const Name& before) {
        std::vector<const FluentDecl*> usable;
        for (const auto& f : rs.fluents) {
            if (f.name == before) break;
            if (f.kind != FluentKind::count) usable.push_back(&f);
        }
        if (usable.empty()) return tf::atom("f0", B(true));
        int atoms = irand(1, 2);
        std::vector<TfPtr> items;
        for (int i = 0; i < atoms; ++i) {
            const FluentDecl* f = pick(usable);
            TfPtr atom = tf::atom(f->name, domain_value(*f));
            if (coin(0.2)) atom = tf::negate(atom);
            items.push_back(std::move(atom));
        }
        if (items.size() == 1) return items[0];
        return tf::conj(std::move(items));
    }

    void make_actions(Ruleset& rs) {
        int n_user = irand(1, opt_.user_actions);
        for (int i = 0; i < n_user; ++i)
            rs.actions.push_back(user_action("u" + std::to_string(i)));
        int n_wall = irand(0, opt_.walltime_actions);
        for (int i = 0; i < n_wall; ++i) {
            std::vector<Minute> schedule;
            int k = irand(1, 2);
            for (int j = 0; j < k; ++j)
                schedule.push_back(step_minute(1, rs.horizon - 1));
            std::sort(schedule.begin(), schedule.end());
            schedule.erase(std::unique(schedule.begin(), schedule.end()),
                           schedule.end());
            rs.actions.push_back(
                walltime_action("w" + std::to_string(i), schedule));
        }
        int n_trig = irand(0, opt_.triggered_actions);
        for (int i = 0; i < n_trig; ++i)
            rs.actions.push_back(triggered_action("g" + std::to_string(i)));
    }

    std::vector<const FluentDecl*> inertials(const Ruleset& rs) {
        std::vector<const FluentDecl*> out;
        for (const auto& f : rs.fluents)
            if (f.kind == FluentKind::inertial) out.push_back(&f);
        return out;
    }

    void make_effects(Ruleset& rs) {
        auto targets = inertials(rs);
        if (targets.empty()) return;
        for (const auto& a : rs.actions) {
            int n = irand(1, 2);
            for (int i = 0; i < n; ++i) {
                const FluentDecl* f = pick(targets);
                TfPtr cond;
                if (coin(0.35)) {
                    cond = plain_condition(rs, "");
                    if (opt_.effect_condition_durations && coin(0.4)) {
                        const FluentDecl* watched = pick(targets);
                        cond = tf::conj(
                            {cond, tf::at_least(step_minute(1, 240),
                                                tf::atom(watched->name,
                                                         domain_value(
                                                             *watched)))});
                    }
                }
                rs.effects.push_back(
                    effect(a.name, f->name, domain_value(*f), cond));
            }
        }
    }

    void make_triggers(Ruleset& rs) {
        std::vector<Name> counts;
        std::vector<const FluentDecl*> watchable;
        for (const auto& f : rs.fluents) {
            if (f.kind == FluentKind::count)
                counts.push_back(f.name);
            else
                watchable.push_back(&f);
        }
        for (const auto& a : rs.actions) {
            if (a.kind != ActionKind::triggered) continue;
            if (!counts.empty() && coin(0.4)) {
                rs.triggers.push_back(WhenTrigger{
                    pick(counts), step_minute(30, rs.horizon / 2), a.name});
            } else if (!watchable.empty()) {
                const FluentDecl* f = pick(watchable);
                rs.triggers.push_back(AfterTrigger{
                    f->name, domain_value(*f), step_minute(1, 360), a.name});
            }
        }
    }

    void make_properties(Ruleset& rs) {
        std::vector<const FluentDecl*> relevant;
        for (const auto& f : rs.fluents)
            if (f.relevant) relevant.push_back(&f);
        PropertyDecl rate{"rate", Value::integer(0)};
        rs.property_decls.push_back(rate);
        if (!relevant.empty()) {
            const FluentDecl* f = pick(relevant);
            rs.property_rules.push_back(PropertyRule{
                "rate",
                ivf::compare(
                    IntervalValue{PropRef{IntervalTerm{0}, f->name}},
                    CmpOp::eq, IntervalValue{domain_value(*f)}),
                Value::integer(irand(5, 30))});
        }
        PropertyDecl total{"totalWage", pe::ref("rate")};
        rs.property_decls.push_back(total);
    }

    std::mt19937_64& rng_;
    GenOptions opt_;
};

// Runs both engines; equivalent means identical traces, or identical
// failures (kind, subject, minute).
inline std::optional<std::string> check_engines_agree(const Ruleset& rs,
                                                      const Scenario& sc) {
    struct Failure {
        InconsistencyError::Kind kind;
        std::string subject;
        Minute at;
    };
    std::optional<Failure> fail_single, fail_cp;
    std::optional<RunTrace> single;
    std::optional<RunTrace> cp;
    try {
        single = run_single(rs, sc, 1);
    } catch (const InconsistencyError& e) {
        fail_single = Failure{e.kind, e.subject, e.at};
    }
    try {
        auto [run, trace] = run_changepoint(rs, sc);
        cp = std::move(run);
    } catch (const InconsistencyError& e) {
        fail_cp = Failure{e.kind, e.subject, e.at};
    }
    if (fail_single.has_value() != fail_cp.has_value()) {
        if (fail_single)
            return "only the per-tick engine failed: " + fail_single->subject +
                   " at " + std::to_string(fail_single->at);
        return "only the changepoint engine failed: " + fail_cp->subject +
               " at " + std::to_string(fail_cp->at);
    }
    if (fail_single) {
        if (fail_single->kind != fail_cp->kind ||
            fail_single->subject != fail_cp->subject ||
            fail_single->at != fail_cp->at)
            return "engines failed differently: '" + fail_single->subject +
                   "'@" + std::to_string(fail_single->at) + " vs '" +
                   fail_cp->subject + "'@" + std::to_string(fail_cp->at);
        return std::nullopt;  // same failure is agreement
    }
    return compare_runs(rs, *single, *cp);
}

}  // namespace timecard::testing

#endif
