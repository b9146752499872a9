#include "timecard/report.hpp"

#include <algorithm>
#include <cstdio>

#include "timecard/errors.hpp"

namespace timecard {

namespace {

std::vector<Name> relevant_names(const Ruleset& rs) {
    std::vector<Name> out;
    for (const auto& f : rs.fluents)
        if (f.relevant) out.push_back(f.name);
    return out;
}

}  // namespace

TraceReport build_report(const Ruleset& rs, const RunTrace& run,
                         const std::string& engine, Minute granularity,
                         const ChangepointTrace* cpt) {
    TraceReport r;
    r.engine = engine;
    r.granularity = granularity;
    r.horizon = rs.horizon;
    r.steps = run.steps;
    r.happenings = run.happenings;
    if (cpt) r.changepoints = cpt->changepoints;
    r.relevant = relevant_names(rs);
    for (const auto& p : rs.property_decls) r.property_names.push_back(p.name);
    std::vector<Minute> bs = boundaries(run.timeline, r.relevant);
    r.intervals = build_intervals(bs, run.timeline, r.relevant);
    r.properties =
        eval_properties(r.intervals, rs.property_decls, rs.property_rules);
    if (!rs.property_decls.empty())
        r.wage = total_wage(r.intervals, r.properties);
    return r;
}

std::string report_text(const TraceReport& report) {
    std::string out;
    auto line = [&](const std::string& s) {
        out += s;
        out += '\n';
    };
    line("engine: " + report.engine);
    line("granularity: " + std::to_string(report.granularity));
    line("horizon: " + std::to_string(report.horizon));
    line("steps: " + std::to_string(report.steps));
    line("happenings: " + std::to_string(report.happenings.size()));
    for (const auto& h : report.happenings) {
        const char* kind = h.kind == ActionKind::user        ? "user"
                           : h.kind == ActionKind::walltime ? "walltime"
                                                            : "triggered";
        line("  " + std::to_string(h.at) + " " + h.action + " " + kind);
    }
    if (!report.changepoints.empty()) {
        std::string cps;
        for (Minute c : report.changepoints) {
            if (!cps.empty()) cps += ' ';
            cps += std::to_string(c);
        }
        line("changepoints: " + std::to_string(report.changepoints.size()));
        line("  " + cps);
    }
    std::string header = "  id | from | to | length";
    for (const auto& n : report.relevant) header += " | " + n;
    for (const auto& n : report.property_names) header += " | " + n;
    header += " | wage";
    line("intervals: " + std::to_string(report.intervals.size()));
    line(header);
    for (std::size_t k = 0; k < report.intervals.size(); ++k) {
        const Interval& iv = report.intervals[k];
        std::string row = "  " + std::to_string(iv.id) + " | " +
                          std::to_string(iv.from) + " | " +
                          std::to_string(iv.to) + " | " +
                          std::to_string(iv.length());
        for (const auto& n : report.relevant) {
            const Value* v = iv.value_of(n);
            row += " | " + (v ? v->str() : std::string("-"));
        }
        for (const auto& n : report.property_names) {
            auto it = report.properties[k].find(n);
            row += " | " +
                   (it == report.properties[k].end() ? std::string("-")
                                                     : it->second.str());
        }
        row += " | " + (k < report.wage.per_interval.size()
                            ? report.wage.per_interval[k].str()
                            : std::string("-"));
        line(row);
    }
    line("total_wage: " + report.wage.total.str());
    char buf[64];
    std::snprintf(buf, sizeof buf, "wall_ms: %.3f", report.wall_ms);
    line(buf);
    return out;
}

std::optional<std::string> compare_runs(const Ruleset& rs, const RunTrace& a,
                                        const RunTrace& b) {
    if (a.happenings.size() != b.happenings.size()) {
        std::size_t n = std::min(a.happenings.size(), b.happenings.size());
        for (std::size_t i = 0; i < n; ++i)
            if (!(a.happenings[i] == b.happenings[i]))
                return "happening #" + std::to_string(i) + " differs: " +
                       std::to_string(a.happenings[i].at) + " " +
                       a.happenings[i].action + " vs " +
                       std::to_string(b.happenings[i].at) + " " +
                       b.happenings[i].action;
        return "happening count differs: " +
               std::to_string(a.happenings.size()) + " vs " +
               std::to_string(b.happenings.size());
    }
    for (std::size_t i = 0; i < a.happenings.size(); ++i)
        if (!(a.happenings[i] == b.happenings[i]))
            return "happening #" + std::to_string(i) + " differs: " +
                   std::to_string(a.happenings[i].at) + " " +
                   a.happenings[i].action + " vs " +
                   std::to_string(b.happenings[i].at) + " " +
                   b.happenings[i].action;

    for (const auto& f : rs.fluents) {
        for (Minute m = 0; m <= rs.horizon; ++m) {
            Value va = a.timeline.value_at(f.name, m);
            Value vb = b.timeline.value_at(f.name, m);
            if (va != vb)
                return "fluent '" + f.name + "' differs at minute " +
                       std::to_string(m) + ": " + va.str() + " vs " +
                       vb.str();
        }
    }

    std::vector<Name> rel = relevant_names(rs);
    std::vector<Minute> ba = boundaries(a.timeline, rel);
    std::vector<Minute> bb = boundaries(b.timeline, rel);
    if (ba != bb) return "interval boundaries differ";
    auto ia = build_intervals(ba, a.timeline, rel);
    auto ib = build_intervals(bb, b.timeline, rel);
    if (!rs.property_decls.empty()) {
        auto pa = eval_properties(ia, rs.property_decls, rs.property_rules);
        auto pb = eval_properties(ib, rs.property_decls, rs.property_rules);
        WageBreakdown wa = total_wage(ia, pa);
        WageBreakdown wb = total_wage(ib, pb);
        if (!(wa.total_exact == wb.total_exact))
            return "total wage differs: " + wa.total_exact.str() + " vs " +
                   wb.total_exact.str();
    }
    return std::nullopt;
}

RunTrace with_flipped_value(const Ruleset& rs, const RunTrace& run,
                            Minute at) {
    const Timeline& tl = run.timeline;
    // Pick a non-count fluent with at least two domain values.
    const FluentDecl* target = nullptr;
    for (const auto& f : rs.fluents) {
        if (f.kind == FluentKind::count) continue;
        if (f.domain.size() >= 2) {
            target = &f;
            break;
        }
    }
    if (!target) throw Error("no fluent available to corrupt");
    if (at < 0 || at >= tl.horizon())
        throw RangeError("corruption minute outside the timeline");

    Timeline::Builder b(tl.horizon(), tl.granularity());
    for (const auto& name : tl.fluent_names()) {
        std::size_t src = tl.index_of(name);
        std::size_t idx = b.add_fluent(name);
        if (name != target->name) {
            for (const Piece& p : tl.pieces(src)) {
                if (p.from > tl.horizon()) break;
                b.append(idx, p);
            }
            continue;
        }
        Value current = tl.value_at(src, at);
        Value other = target->domain[0] == current ? target->domain[1]
                                                   : target->domain[0];
        Value last = other;  // placeholder, overwritten at m == 0
        for (Minute m = 0; m <= tl.horizon(); ++m) {
            Value v = m == at ? other : tl.value_at(src, m);
            if (m == 0 || v != last) b.append(idx, Piece{m, v, 0});
            last = v;
        }
    }
    RunTrace out;
    out.timeline = std::move(b).finish();
    out.happenings = run.happenings;
    out.steps = run.steps;
    return out;
}

}  // namespace timecard
