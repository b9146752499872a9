#include "timecard/intervals.hpp"

#include <algorithm>
#include <set>

#include "timecard/errors.hpp"

namespace timecard {

const Value* Interval::value_of(const Name& fluent) const {
    for (const auto& [n, v] : relevant_values)
        if (n == fluent) return &v;
    return nullptr;
}

std::vector<Minute> boundaries(const Timeline& tl,
                               const std::vector<Name>& relevant) {
    std::set<Minute> bs;
    bs.insert(0);
    bs.insert(tl.horizon());
    for (const auto& name : relevant) {
        std::size_t f = tl.index_of(name);
        const auto& pieces = tl.pieces(f);
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const Piece& p = pieces[i];
            Minute end = i + 1 < pieces.size() ? pieces[i + 1].from
                                               : tl.horizon() + 1;
            end = std::min(end, tl.horizon() + 1);
            if (p.from > tl.horizon()) break;
            if (p.from > 0 &&
                tl.value_at(f, p.from) != tl.value_at(f, p.from - 1))
                bs.insert(p.from);
            if (p.slope != 0)  // accumulating: every covered minute changes
                for (Minute m = std::max<Minute>(p.from + 1, 1); m < end; ++m)
                    bs.insert(m);
        }
    }
    return {bs.begin(), bs.end()};
}

std::vector<Interval> build_intervals(const std::vector<Minute>& bs,
                                      const Timeline& tl,
                                      const std::vector<Name>& relevant) {
    if (bs.size() < 2) return {};
    std::vector<Interval> out;
    out.reserve(bs.size() - 1);
    for (std::size_t k = 0; k + 1 < bs.size(); ++k) {
        Interval iv;
        iv.id = k;
        iv.from = bs[k];
        iv.to = bs[k + 1];
        for (const auto& name : relevant)
            iv.relevant_values.emplace_back(name, tl.value_at(name, iv.from));
        out.push_back(std::move(iv));
    }
    return out;
}

namespace {

std::optional<Value> resolve(const IntervalValue& v, std::size_t k,
                             const std::vector<Interval>& ivs) {
    if (const auto* lit = std::get_if<Value>(&v.rep)) return *lit;
    const auto& ref = std::get<PropRef>(v.rep);
    std::int64_t j = static_cast<std::int64_t>(k) + ref.term.offset;
    if (j < 0 || j >= static_cast<std::int64_t>(ivs.size()))
        return std::nullopt;
    const Interval& iv = ivs[static_cast<std::size_t>(j)];
    if (ref.prop == kLengthProperty) return Value::integer(iv.length());
    const Value* val = iv.value_of(ref.prop);
    if (!val)
        throw ReferenceError("interval property '" + ref.prop +
                             "' is neither a relevant fluent nor length");
    return *val;
}

bool eval_compare(const IvCompare& c, std::size_t k,
                  const std::vector<Interval>& ivs) {
    std::optional<Value> lhs = resolve(c.lhs, k, ivs);
    std::optional<Value> rhs = resolve(c.rhs, k, ivs);
    if (!lhs || !rhs) return false;  // valueless reference: atom fails
    switch (c.op) {
        case CmpOp::eq: return *lhs == *rhs;
        case CmpOp::ne: return *lhs != *rhs;
        case CmpOp::lt: return lhs->less_than(*rhs);
        case CmpOp::le: return !rhs->less_than(*lhs);
        case CmpOp::gt: return rhs->less_than(*lhs);
        case CmpOp::ge: return !lhs->less_than(*rhs);
    }
    return false;
}

bool holds_interval(const IntervalFormula& f, std::size_t k,
                    const std::vector<Interval>& ivs) {
    if (const auto* c = std::get_if<IvCompare>(&f.node))
        return eval_compare(*c, k, ivs);
    if (const auto* a = std::get_if<IvAnd>(&f.node)) {
        for (const auto& i : a->items)
            if (!holds_interval(*i, k, ivs)) return false;
        return true;
    }
    return !holds_interval(*std::get<IvNot>(f.node).sub, k, ivs);
}

Rational as_rational_value(const Value& v, const Name& property) {
    if (!v.is_numeric())
        throw TypeError("property '" + property + "' got non-numeric value " +
                        v.str());
    return v.as_rational();
}

Rational eval_expr(const PePtr& e,
                   const std::map<Name, Rational>& resolved) {
    if (const auto* c = std::get_if<PeConst>(&e->node)) return c->value;
    if (const auto* r = std::get_if<PeRef>(&e->node)) {
        auto it = resolved.find(r->property);
        if (it == resolved.end())
            throw ReferenceError("expression references unknown property '" +
                                 r->property + "'");
        return it->second;
    }
    const auto& b = std::get<PeBinary>(e->node);
    Rational lhs = eval_expr(b.lhs, resolved);
    Rational rhs = eval_expr(b.rhs, resolved);
    switch (b.op) {
        case '+': return lhs + rhs;
        case '-': return lhs - rhs;
        case '*': return lhs * rhs;
    }
    throw TypeError(std::string("unknown operator '") + b.op + "'");
}

}  // namespace

bool int_holds(const IfPtr& formula, std::size_t k,
               const std::vector<Interval>& ivs) {
    if (!formula) return true;
    if (k >= ivs.size()) throw RangeError("interval index out of range");
    return holds_interval(*formula, k, ivs);
}

std::vector<std::map<Name, Rational>> eval_properties(
    const std::vector<Interval>& ivs, const std::vector<PropertyDecl>& decls,
    const std::vector<PropertyRule>& rules) {
    std::vector<std::map<Name, Rational>> out;
    out.reserve(ivs.size());
    for (std::size_t k = 0; k < ivs.size(); ++k) {
        // Rule-driven values first; a property with two applicable rules of
        // distinct value is ambiguous.
        std::map<Name, Rational> by_rule;
        for (const auto& r : rules) {
            if (!int_holds(r.condition, k, ivs)) continue;
            Rational v = as_rational_value(r.value, r.property);
            auto [it, inserted] = by_rule.emplace(r.property, v);
            if (!inserted && it->second != v)
                throw InconsistencyError(
                    InconsistencyError::Kind::ambiguous_rules, r.property,
                    static_cast<std::int64_t>(k),
                    "rules for property '" + r.property + "' yield both " +
                        it->second.str() + " and " + v.str() +
                        " on interval " + std::to_string(k));
        }
        // Defaults, expression defaults after their dependencies.
        std::map<Name, Rational> resolved = by_rule;
        std::set<Name> visiting;
        auto resolve_prop = [&](auto&& self, const PropertyDecl& d) -> void {
            if (resolved.count(d.name)) return;
            if (!visiting.insert(d.name).second)
                throw Error("cyclic property defaults at '" + d.name + "'");
            if (const auto* v = std::get_if<Value>(&d.default_value)) {
                resolved[d.name] = as_rational_value(*v, d.name);
            } else {
                const PePtr& e = std::get<PePtr>(d.default_value);
                std::vector<Name> refs;
                pe::collect_refs(e, refs);
                for (const auto& rn : refs)
                    for (const auto& dep : decls)
                        if (dep.name == rn) self(self, dep);
                resolved[d.name] = eval_expr(e, resolved);
            }
            visiting.erase(d.name);
        };
        for (const auto& d : decls) resolve_prop(resolve_prop, d);
        out.push_back(std::move(resolved));
    }
    return out;
}

WageBreakdown total_wage(const std::vector<Interval>& ivs,
                         const std::vector<std::map<Name, Rational>>& props) {
    WageBreakdown wb;
    wb.total_exact = Rational(0);
    for (std::size_t k = 0; k < ivs.size(); ++k) {
        auto it = props.at(k).find(kTotalWageProperty);
        if (it == props.at(k).end())
            throw ReferenceError("property 'totalWage' is not defined");
        Rational part =
            it->second * Rational(ivs[k].length(), 60);
        wb.per_interval.push_back(part);
        wb.total_exact = wb.total_exact + part;
    }
    wb.total = Money::round_from(wb.total_exact);
    return wb;
}

}  // namespace timecard
