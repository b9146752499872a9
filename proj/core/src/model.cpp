#include "timecard/model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "timecard/errors.hpp"

namespace timecard {

// ---------------------------------------------------------------------------
// Formula helpers
// ---------------------------------------------------------------------------

namespace tf {

TfPtr atom(Name fluent, Value value) {
    return std::make_shared<TemporalFormula>(
        TemporalFormula{TfAtom{std::move(fluent), std::move(value)}});
}
TfPtr conj(std::vector<TfPtr> items) {
    return std::make_shared<TemporalFormula>(
        TemporalFormula{TfAnd{std::move(items)}});
}
TfPtr negate(TfPtr sub) {
    return std::make_shared<TemporalFormula>(
        TemporalFormula{TfNot{std::move(sub)}});
}
TfPtr at_least(Minute n, TfPtr sub) {
    return std::make_shared<TemporalFormula>(
        TemporalFormula{TfAtLeast{n, std::move(sub)}});
}
TfPtr exactly(Minute n, TfPtr sub) {
    return std::make_shared<TemporalFormula>(
        TemporalFormula{TfExactly{n, std::move(sub)}});
}

bool equal(const TfPtr& a, const TfPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    if (const auto* x = std::get_if<TfAtom>(&a->node)) {
        const auto& y = std::get<TfAtom>(b->node);
        return x->fluent == y.fluent && x->value == y.value;
    }
    if (const auto* x = std::get_if<TfAnd>(&a->node)) {
        const auto& y = std::get<TfAnd>(b->node);
        if (x->items.size() != y.items.size()) return false;
        for (std::size_t i = 0; i < x->items.size(); ++i)
            if (!equal(x->items[i], y.items[i])) return false;
        return true;
    }
    if (const auto* x = std::get_if<TfNot>(&a->node))
        return equal(x->sub, std::get<TfNot>(b->node).sub);
    if (const auto* x = std::get_if<TfAtLeast>(&a->node)) {
        const auto& y = std::get<TfAtLeast>(b->node);
        return x->n == y.n && equal(x->sub, y.sub);
    }
    const auto& x = std::get<TfExactly>(a->node);
    const auto& y = std::get<TfExactly>(b->node);
    return x.n == y.n && equal(x.sub, y.sub);
}

void collect_fluents(const TfPtr& f, std::vector<Name>& out) {
    if (!f) return;
    if (const auto* a = std::get_if<TfAtom>(&f->node)) {
        out.push_back(a->fluent);
    } else if (const auto* c = std::get_if<TfAnd>(&f->node)) {
        for (const auto& i : c->items) collect_fluents(i, out);
    } else if (const auto* n = std::get_if<TfNot>(&f->node)) {
        collect_fluents(n->sub, out);
    } else if (const auto* al = std::get_if<TfAtLeast>(&f->node)) {
        collect_fluents(al->sub, out);
    } else {
        collect_fluents(std::get<TfExactly>(f->node).sub, out);
    }
}

bool duration_free(const TfPtr& f) {
    if (!f) return true;
    if (std::holds_alternative<TfAtLeast>(f->node) ||
        std::holds_alternative<TfExactly>(f->node))
        return false;
    if (const auto* c = std::get_if<TfAnd>(&f->node)) {
        for (const auto& i : c->items)
            if (!duration_free(i)) return false;
        return true;
    }
    if (const auto* n = std::get_if<TfNot>(&f->node))
        return duration_free(n->sub);
    return true;
}

void collect_durations(const TfPtr& f, std::vector<Minute>& out) {
    if (!f) return;
    if (const auto* c = std::get_if<TfAnd>(&f->node)) {
        for (const auto& i : c->items) collect_durations(i, out);
    } else if (const auto* n = std::get_if<TfNot>(&f->node)) {
        collect_durations(n->sub, out);
    } else if (const auto* al = std::get_if<TfAtLeast>(&f->node)) {
        out.push_back(al->n);
        collect_durations(al->sub, out);
    } else if (const auto* ex = std::get_if<TfExactly>(&f->node)) {
        out.push_back(ex->n);
        collect_durations(ex->sub, out);
    }
}

std::string str(const TfPtr& f) {
    if (!f) return "<none>";
    if (const auto* a = std::get_if<TfAtom>(&f->node))
        return a->fluent + "=" + a->value.str();
    if (const auto* c = std::get_if<TfAnd>(&f->node)) {
        std::string out;
        for (const auto& i : c->items) {
            if (!out.empty()) out += " and ";
            out += str(i);
        }
        return out.empty() ? "true" : out;
    }
    if (const auto* n = std::get_if<TfNot>(&f->node))
        return "not (" + str(n->sub) + ")";
    if (const auto* al = std::get_if<TfAtLeast>(&f->node))
        return "[>=" + std::to_string(al->n) + "](" + str(al->sub) + ")";
    const auto& ex = std::get<TfExactly>(f->node);
    return "[=" + std::to_string(ex.n) + "](" + str(ex.sub) + ")";
}

}  // namespace tf

namespace ivf {

IfPtr compare(IntervalValue lhs, CmpOp op, IntervalValue rhs) {
    return std::make_shared<IntervalFormula>(
        IntervalFormula{IvCompare{std::move(lhs), op, std::move(rhs)}});
}
IfPtr conj(std::vector<IfPtr> items) {
    return std::make_shared<IntervalFormula>(
        IntervalFormula{IvAnd{std::move(items)}});
}
IfPtr negate(IfPtr sub) {
    return std::make_shared<IntervalFormula>(
        IntervalFormula{IvNot{std::move(sub)}});
}

bool equal(const IfPtr& a, const IfPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    if (const auto* x = std::get_if<IvCompare>(&a->node)) {
        const auto& y = std::get<IvCompare>(b->node);
        return x->lhs == y.lhs && x->op == y.op && x->rhs == y.rhs;
    }
    if (const auto* x = std::get_if<IvAnd>(&a->node)) {
        const auto& y = std::get<IvAnd>(b->node);
        if (x->items.size() != y.items.size()) return false;
        for (std::size_t i = 0; i < x->items.size(); ++i)
            if (!equal(x->items[i], y.items[i])) return false;
        return true;
    }
    return equal(std::get<IvNot>(a->node).sub, std::get<IvNot>(b->node).sub);
}

namespace {
void collect_value_props(const IntervalValue& v, std::vector<Name>& out) {
    if (const auto* r = std::get_if<PropRef>(&v.rep)) out.push_back(r->prop);
}
}  // namespace

void collect_props(const IfPtr& f, std::vector<Name>& out) {
    if (!f) return;
    if (const auto* c = std::get_if<IvCompare>(&f->node)) {
        collect_value_props(c->lhs, out);
        collect_value_props(c->rhs, out);
    } else if (const auto* a = std::get_if<IvAnd>(&f->node)) {
        for (const auto& i : a->items) collect_props(i, out);
    } else {
        collect_props(std::get<IvNot>(f->node).sub, out);
    }
}

namespace {
std::string term_str(const IntervalTerm& t) {
    std::string out;
    for (int i = 0; i < t.offset; ++i) out += "[next]";
    for (int i = 0; i > t.offset; --i) out += "[prev]";
    return out;
}
std::string value_str(const IntervalValue& v) {
    if (const auto* r = std::get_if<PropRef>(&v.rep))
        return term_str(r->term) + r->prop;
    return std::get<Value>(v.rep).str();
}
const char* op_str(CmpOp op) {
    switch (op) {
        case CmpOp::eq: return "=";
        case CmpOp::ne: return "!=";
        case CmpOp::lt: return "<";
        case CmpOp::le: return "<=";
        case CmpOp::gt: return ">";
        case CmpOp::ge: return ">=";
    }
    return "?";
}
}  // namespace

std::string str(const IfPtr& f) {
    if (!f) return "<none>";
    if (const auto* c = std::get_if<IvCompare>(&f->node))
        return value_str(c->lhs) + " " + op_str(c->op) + " " +
               value_str(c->rhs);
    if (const auto* a = std::get_if<IvAnd>(&f->node)) {
        std::string out;
        for (const auto& i : a->items) {
            if (!out.empty()) out += " and ";
            out += str(i);
        }
        return out.empty() ? "true" : out;
    }
    return "not (" + str(std::get<IvNot>(f->node).sub) + ")";
}

}  // namespace ivf

namespace pe {

PePtr constant(Rational v) {
    return std::make_shared<PropertyExpr>(PropertyExpr{PeConst{std::move(v)}});
}
PePtr ref(Name property) {
    return std::make_shared<PropertyExpr>(
        PropertyExpr{PeRef{std::move(property)}});
}
PePtr binary(char op, PePtr lhs, PePtr rhs) {
    return std::make_shared<PropertyExpr>(
        PropertyExpr{PeBinary{op, std::move(lhs), std::move(rhs)}});
}

bool equal(const PePtr& a, const PePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    if (const auto* x = std::get_if<PeConst>(&a->node))
        return x->value == std::get<PeConst>(b->node).value;
    if (const auto* x = std::get_if<PeRef>(&a->node))
        return x->property == std::get<PeRef>(b->node).property;
    const auto& x = std::get<PeBinary>(a->node);
    const auto& y = std::get<PeBinary>(b->node);
    return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
}

void collect_refs(const PePtr& e, std::vector<Name>& out) {
    if (!e) return;
    if (const auto* r = std::get_if<PeRef>(&e->node)) {
        out.push_back(r->property);
    } else if (const auto* b = std::get_if<PeBinary>(&e->node)) {
        collect_refs(b->lhs, out);
        collect_refs(b->rhs, out);
    }
}

std::string str(const PePtr& e) {
    if (!e) return "<none>";
    if (const auto* c = std::get_if<PeConst>(&e->node)) return c->value.str();
    if (const auto* r = std::get_if<PeRef>(&e->node)) return r->property;
    const auto& b = std::get<PeBinary>(e->node);
    return "(" + str(b.lhs) + " " + b.op + " " + str(b.rhs) + ")";
}

}  // namespace pe

// ---------------------------------------------------------------------------
// Ruleset lookups
// ---------------------------------------------------------------------------

const FluentDecl* Ruleset::find_fluent(const Name& n) const {
    for (const auto& f : fluents)
        if (f.name == n) return &f;
    return nullptr;
}

const ActionDecl* Ruleset::find_action(const Name& n) const {
    for (const auto& a : actions)
        if (a.name == n) return &a;
    return nullptr;
}

void Scenario::sort() {
    std::stable_sort(user_actions.begin(), user_actions.end(),
                     [](const UserAction& a, const UserAction& b) {
                         if (a.at != b.at) return a.at < b.at;
                         return a.action < b.action;
                     });
}

bool valid_identifier(const Name& n) {
    if (n.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(n[0]))) return false;
    for (char c : n)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

std::string ValidationReport::str() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "\n";
        out += v.code + ": " + v.message;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

bool in_domain(const FluentDecl& f, const Value& v) {
    if (f.kind == FluentKind::count) return v.is_int() && v.as_int() >= 0;
    return std::find(f.domain.begin(), f.domain.end(), v) != f.domain.end();
}

class Validator {
public:
    Validator(const Ruleset& rs, EvalMode mode, const Scenario* sc)
        : rs_(rs), mode_(mode), sc_(sc) {}

    ValidationReport run() {
        check_declarations();
        check_effects();
        check_triggers();
        check_defined_rules();
        check_count_rules();
        check_dependencies();
        check_properties();
        if (sc_) check_scenario();
        return std::move(report_);
    }

private:
    void add(std::string code, std::string message) {
        report_.violations.push_back({std::move(code), std::move(message)});
    }

    void check_declarations() {
        if (rs_.horizon < 1) add("horizon", "horizon must be at least 1");
        std::set<Name> seen;
        for (const auto& f : rs_.fluents) {
            if (!valid_identifier(f.name))
                add("identifier", "bad fluent identifier '" + f.name + "'");
            if (!seen.insert(f.name).second)
                add("duplicate-name", "duplicate declaration '" + f.name + "'");
            if (f.kind == FluentKind::count) {
                if (mode_ == EvalMode::changepoint && f.relevant)
                    add("relevant-count",
                        "count fluent '" + f.name +
                            "' cannot be relevant in changepoint mode");
                continue;
            }
            if (f.domain.empty()) {
                add("empty-domain", "fluent '" + f.name + "' has no domain");
                continue;
            }
            std::set<std::string> dom;
            for (const auto& v : f.domain)
                if (!dom.insert(v.str()).second)
                    add("duplicate-domain-value",
                        "fluent '" + f.name + "' repeats value " + v.str());
            if (!in_domain(f, f.initial_or_default))
                add("initial-out-of-domain",
                    "fluent '" + f.name + "': " + f.initial_or_default.str() +
                        " is not in its domain");
        }
        for (const auto& a : rs_.actions) {
            if (!valid_identifier(a.name))
                add("identifier", "bad action identifier '" + a.name + "'");
            if (!seen.insert(a.name).second)
                add("duplicate-name", "duplicate declaration '" + a.name + "'");
            bool has_schedule = !a.walltime_schedule.empty();
            if (a.kind == ActionKind::walltime) {
                if (!has_schedule)
                    add("walltime-schedule",
                        "walltime action '" + a.name + "' has no schedule");
                for (std::size_t i = 0; i < a.walltime_schedule.size(); ++i) {
                    Minute t = a.walltime_schedule[i];
                    if (t < 0 || t > rs_.horizon)
                        add("time-out-of-range",
                            "walltime action '" + a.name + "' scheduled at " +
                                std::to_string(t));
                    if (i > 0 && a.walltime_schedule[i - 1] >= t)
                        add("walltime-schedule",
                            "schedule of '" + a.name +
                                "' is not strictly increasing");
                }
            } else if (has_schedule) {
                add("walltime-schedule",
                    "non-walltime action '" + a.name + "' has a schedule");
            }
        }
    }

    // Atoms must name declared fluents and use values from their domains.
    void check_condition(const TfPtr& cond, const std::string& where) {
        if (!cond) return;
        std::vector<Name> fluents;
        tf::collect_fluents(cond, fluents);
        for (const auto& n : fluents) {
            const FluentDecl* f = rs_.find_fluent(n);
            if (!f)
                add("unknown-fluent",
                    where + " mentions undeclared fluent '" + n + "'");
        }
        check_atom_domains(cond, where);
        std::vector<Minute> durations;
        tf::collect_durations(cond, durations);
        for (Minute d : durations)
            if (d < 1)
                add("duration-not-positive",
                    where + " uses a non-positive duration");
    }

    void check_atom_domains(const TfPtr& f, const std::string& where) {
        if (!f) return;
        if (const auto* a = std::get_if<TfAtom>(&f->node)) {
            const FluentDecl* d = rs_.find_fluent(a->fluent);
            if (d && !in_domain(*d, a->value))
                add("value-out-of-domain", where + ": " + a->fluent + "=" +
                                               a->value.str() +
                                               " is outside the domain");
        } else if (const auto* c = std::get_if<TfAnd>(&f->node)) {
            for (const auto& i : c->items) check_atom_domains(i, where);
        } else if (const auto* n = std::get_if<TfNot>(&f->node)) {
            check_atom_domains(n->sub, where);
        } else if (const auto* al = std::get_if<TfAtLeast>(&f->node)) {
            check_atom_domains(al->sub, where);
        } else {
            check_atom_domains(std::get<TfExactly>(f->node).sub, where);
        }
    }

    void check_effects() {
        for (const auto& e : rs_.effects) {
            if (!rs_.find_action(e.action))
                add("unknown-action",
                    "effect of undeclared action '" + e.action + "'");
            const FluentDecl* f = rs_.find_fluent(e.fluent);
            if (!f) {
                add("unknown-fluent",
                    "effect on undeclared fluent '" + e.fluent + "'");
            } else {
                if (f->kind != FluentKind::inertial)
                    add("effect-on-non-inertial",
                        "effect on non-inertial fluent '" + e.fluent + "'");
                else if (!in_domain(*f, e.value))
                    add("value-out-of-domain",
                        "effect value " + e.value.str() +
                            " outside domain of '" + e.fluent + "'");
            }
            check_condition(e.condition,
                            "condition of effect " + e.action + "->" + e.fluent);
        }
    }

    void check_triggers() {
        for (const auto& t : rs_.triggers) {
            if (const auto* a = std::get_if<AfterTrigger>(&t)) {
                check_trigger_action(a->action);
                const FluentDecl* f = rs_.find_fluent(a->fluent);
                if (!f) {
                    add("unknown-fluent", "trigger on undeclared fluent '" +
                                              a->fluent + "'");
                } else if (f->kind == FluentKind::count) {
                    add("trigger-kind",
                        "duration trigger on count fluent '" + a->fluent +
                            "'; use a threshold trigger");
                } else if (!in_domain(*f, a->value)) {
                    add("value-out-of-domain",
                        "trigger value " + a->value.str() +
                            " outside domain of '" + a->fluent + "'");
                }
                if (a->duration_minutes < 1)
                    add("duration-not-positive",
                        "trigger duration must be positive");
            } else {
                const auto& w = std::get<WhenTrigger>(t);
                check_trigger_action(w.action);
                const FluentDecl* f = rs_.find_fluent(w.count_fluent);
                if (!f)
                    add("unknown-fluent", "trigger on undeclared fluent '" +
                                              w.count_fluent + "'");
                else if (f->kind != FluentKind::count)
                    add("trigger-kind", "threshold trigger needs a count "
                                        "fluent, got '" +
                                            w.count_fluent + "'");
                if (w.threshold_minutes < 1)
                    add("duration-not-positive",
                        "trigger threshold must be positive");
            }
        }
    }

    void check_trigger_action(const Name& action) {
        const ActionDecl* a = rs_.find_action(action);
        if (!a)
            add("unknown-action",
                "trigger fires undeclared action '" + action + "'");
        else if (a->kind != ActionKind::triggered)
            add("trigger-kind",
                "triggered rule names non-triggered action '" + action + "'");
    }

    void check_defined_rules() {
        for (const auto& r : rs_.defined_rules) {
            const FluentDecl* f = rs_.find_fluent(r.fluent);
            if (!f) {
                add("unknown-fluent",
                    "rule for undeclared fluent '" + r.fluent + "'");
            } else if (f->kind != FluentKind::defined) {
                add("rule-kind",
                    "value rule for non-defined fluent '" + r.fluent + "'");
            } else if (!in_domain(*f, r.value)) {
                add("value-out-of-domain",
                    "rule value " + r.value.str() + " outside domain of '" +
                        r.fluent + "'");
            }
            if (!r.condition) {
                add("missing-condition",
                    "rule for '" + r.fluent + "' has no condition");
                continue;
            }
            check_condition(r.condition, "rule for '" + r.fluent + "'");
            if (mode_ == EvalMode::changepoint)
                check_changepoint_condition(r.condition,
                                            "defined rule for '" + r.fluent +
                                                "'");
        }
    }

    void check_count_rules() {
        std::map<Name, int> rules_per_fluent;
        for (const auto& r : rs_.count_rules) {
            const FluentDecl* f = rs_.find_fluent(r.count_fluent);
            if (!f)
                add("unknown-fluent",
                    "count rule for undeclared fluent '" + r.count_fluent +
                        "'");
            else if (f->kind != FluentKind::count)
                add("rule-kind", "count rule for non-count fluent '" +
                                     r.count_fluent + "'");
            rules_per_fluent[r.count_fluent] += 1;
            if (!r.condition) {
                add("missing-condition", "count rule for '" + r.count_fluent +
                                             "' has no condition");
                continue;
            }
            check_condition(r.condition,
                            "count rule for '" + r.count_fluent + "'");
            if (mode_ == EvalMode::changepoint)
                check_changepoint_condition(
                    r.condition, "count rule for '" + r.count_fluent + "'");
        }
        for (const auto& [name, n] : rules_per_fluent)
            if (n > 1)
                add("count-rule-not-unique",
                    "count fluent '" + name + "' has " + std::to_string(n) +
                        " rules");
        for (const auto& f : rs_.fluents)
            if (f.kind == FluentKind::count && !rules_per_fluent.count(f.name))
                add("count-rule-missing",
                    "count fluent '" + f.name + "' has no rule");
    }

    // Between changepoints the world must stay constant, so conditions that
    // are re-evaluated continuously may neither look back in time nor read a
    // count fluent.
    void check_changepoint_condition(const TfPtr& cond,
                                     const std::string& where) {
        if (!tf::duration_free(cond))
            add("duration-in-changepoint-rule",
                "duration operator in " + where);
        std::vector<Name> fluents;
        tf::collect_fluents(cond, fluents);
        for (const auto& n : fluents) {
            const FluentDecl* f = rs_.find_fluent(n);
            if (f && f->kind == FluentKind::count)
                add("count-in-changepoint-rule",
                    where + " reads count fluent '" + n + "'");
        }
    }

    // Within one timepoint, defined and count fluents must form an acyclic
    // dependency graph; anything else has no stratified meaning.
    void check_dependencies() {
        std::map<Name, std::vector<Name>> deps;
        for (const auto& r : rs_.defined_rules)
            if (r.condition)
                tf::collect_fluents(r.condition, deps[r.fluent]);
        for (const auto& r : rs_.count_rules)
            if (r.condition)
                tf::collect_fluents(r.condition, deps[r.count_fluent]);

        std::set<Name> tracked;
        for (const auto& f : rs_.fluents)
            if (f.kind != FluentKind::inertial) tracked.insert(f.name);

        std::map<Name, int> state;  // 0 unseen, 1 in progress, 2 done
        std::vector<Name> stack;
        std::vector<Name> cycle;
        auto visit = [&](auto&& self, const Name& n) -> bool {
            if (!tracked.count(n)) return true;
            int& s = state[n];
            if (s == 2) return true;
            if (s == 1) {
                auto it = std::find(stack.begin(), stack.end(), n);
                cycle.assign(it, stack.end());
                cycle.push_back(n);
                return false;
            }
            s = 1;
            stack.push_back(n);
            for (const auto& d : deps[n])
                if (!self(self, d)) return false;
            stack.pop_back();
            s = 2;
            return true;
        };
        for (const auto& f : rs_.fluents) {
            if (f.kind == FluentKind::inertial) continue;
            if (!visit(visit, f.name)) {
                std::string names;
                for (const auto& c : cycle) {
                    if (!names.empty()) names += ", ";
                    names += c;
                }
                add("defined-cycle",
                    "cyclic dependency among {" + names + "}");
                return;
            }
        }
    }

    void check_properties() {
        std::set<Name> props;
        std::set<Name> relevant;
        for (const auto& f : rs_.fluents)
            if (f.relevant) relevant.insert(f.name);
        for (const auto& p : rs_.property_decls) {
            if (!valid_identifier(p.name))
                add("identifier", "bad property identifier '" + p.name + "'");
            if (!props.insert(p.name).second)
                add("duplicate-name", "duplicate property '" + p.name + "'");
            if (p.name == "length" || rs_.find_fluent(p.name))
                add("property-name-clash",
                    "property '" + p.name + "' shadows a fluent or 'length'");
        }
        // Expression defaults may only reference other properties, acyclically.
        std::map<Name, std::vector<Name>> deps;
        for (const auto& p : rs_.property_decls) {
            if (const auto* e = std::get_if<PePtr>(&p.default_value)) {
                std::vector<Name> refs;
                pe::collect_refs(*e, refs);
                for (const auto& r : refs) {
                    if (!props.count(r))
                        add("unknown-property",
                            "default of '" + p.name +
                                "' references unknown property '" + r + "'");
                    deps[p.name].push_back(r);
                }
            }
        }
        std::map<Name, int> state;
        std::vector<Name> stack;
        auto visit = [&](auto&& self, const Name& n) -> bool {
            int& s = state[n];
            if (s == 2) return true;
            if (s == 1) {
                add("property-cycle",
                    "cyclic property defaults involving '" + n + "'");
                return false;
            }
            s = 1;
            for (const auto& d : deps[n])
                if (props.count(d) && !self(self, d)) return false;
            s = 2;
            return true;
        };
        for (const auto& p : rs_.property_decls)
            if (!visit(visit, p.name)) break;

        for (const auto& r : rs_.property_rules) {
            if (!props.count(r.property))
                add("unknown-property",
                    "rule for undeclared property '" + r.property + "'");
            if (!r.value.is_numeric())
                add("property-value-not-numeric",
                    "rule for '" + r.property + "' has non-numeric value " +
                        r.value.str());
            std::vector<Name> refs;
            ivf::collect_props(r.condition, refs);
            for (const auto& n : refs) {
                if (n == "length") continue;
                if (!relevant.count(n))
                    add("interval-ref-not-relevant",
                        "interval condition for '" + r.property +
                            "' references '" + n +
                            "', which is not a relevant fluent");
            }
        }
    }

    void check_scenario() {
        for (const auto& u : sc_->user_actions) {
            const ActionDecl* a = rs_.find_action(u.action);
            if (!a)
                add("unknown-action",
                    "scenario uses undeclared action '" + u.action + "'");
            else if (a->kind != ActionKind::user)
                add("scenario-action-kind",
                    "scenario schedules non-user action '" + u.action + "'");
            if (u.at < 0 || u.at > rs_.horizon)
                add("time-out-of-range",
                    "user action '" + u.action + "' at " +
                        std::to_string(u.at) + " is outside [0, horizon]");
        }
    }

    const Ruleset& rs_;
    EvalMode mode_;
    const Scenario* sc_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate_ruleset(const Ruleset& rs, EvalMode mode) {
    return Validator(rs, mode, nullptr).run();
}

ValidationReport validate_ruleset(const Ruleset& rs, EvalMode mode,
                                  const Scenario& sc) {
    return Validator(rs, mode, &sc).run();
}

std::vector<Name> dependency_order(const Ruleset& rs) {
    std::map<Name, std::vector<Name>> deps;
    std::set<Name> defined;
    for (const auto& f : rs.fluents)
        if (f.kind == FluentKind::defined) defined.insert(f.name);
    for (const auto& r : rs.defined_rules)
        if (r.condition) tf::collect_fluents(r.condition, deps[r.fluent]);

    std::vector<Name> order;
    std::map<Name, int> state;
    auto visit = [&](auto&& self, const Name& n) -> void {
        if (!defined.count(n)) return;
        int& s = state[n];
        if (s == 2) return;
        if (s == 1) throw Error("dependency cycle through '" + n + "'");
        s = 1;
        for (const auto& d : deps[n]) self(self, d);
        s = 2;
        order.push_back(n);
    };
    for (const auto& f : rs.fluents)
        if (f.kind == FluentKind::defined) visit(visit, f.name);
    return order;
}

std::vector<Minute> collect_time_literals(const Ruleset& rs,
                                          const Scenario& sc) {
    std::vector<Minute> out;
    out.push_back(rs.horizon);
    for (const auto& a : rs.actions)
        for (Minute t : a.walltime_schedule) out.push_back(t);
    for (const auto& u : sc.user_actions) out.push_back(u.at);
    for (const auto& t : rs.triggers) {
        if (const auto* a = std::get_if<AfterTrigger>(&t))
            out.push_back(a->duration_minutes);
        else
            out.push_back(std::get<WhenTrigger>(t).threshold_minutes);
    }
    auto from_condition = [&out](const TfPtr& c) {
        tf::collect_durations(c, out);
    };
    for (const auto& e : rs.effects) from_condition(e.condition);
    for (const auto& r : rs.defined_rules) from_condition(r.condition);
    for (const auto& r : rs.count_rules) from_condition(r.condition);
    return out;
}

}  // namespace timecard
