#include "timecard/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "timecard/clock.hpp"
#include "timecard/errors.hpp"
#include "timecard/intervals.hpp"

namespace timecard {

namespace {

// ---------------------------------------------------------------------------
// Cell scanner
// ---------------------------------------------------------------------------

struct Scanner {
    const std::string& text;
    std::size_t pos = 0;
    std::size_t line = 1;
    std::size_t col_base = 1;  // added to in-cell offsets for diagnostics

    [[noreturn]] void fail(const std::string& message, std::size_t at) const {
        throw ParseError(message, line, col_base + at);
    }
    [[noreturn]] void fail(const std::string& message) const {
        fail(message, pos);
    }

    void skip_ws() {
        while (pos < text.size() &&
               std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
    void expect_end() {
        if (!done()) fail("unexpected trailing text");
    }
    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    bool eat(char c) {
        if (!peek(c)) return false;
        ++pos;
        return true;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    bool ident_start() {
        skip_ws();
        return pos < text.size() &&
               (std::isalpha(static_cast<unsigned char>(text[pos])) ||
                text[pos] == '_');
    }

    std::string ident() {
        skip_ws();
        if (!ident_start()) fail("expected an identifier");
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                text[pos] == '_'))
            ++pos;
        return text.substr(start, pos - start);
    }

    bool at_keyword(const char* kw) {
        std::size_t save = pos;
        if (!ident_start()) return false;
        std::string id = ident();
        pos = save;
        return id == kw;
    }
    bool eat_keyword(const char* kw) {
        if (!at_keyword(kw)) return false;
        (void)ident();
        return true;
    }

    bool number_start() {
        skip_ws();
        if (pos >= text.size()) return false;
        char c = text[pos];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
               c == '+';
    }

    // Digits with optional sign, fraction dot, or clock-literal letters.
    std::string number_like() {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        bool any = false;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                text[pos] == '.')) {
            any = true;
            ++pos;
        }
        if (!any) fail("expected a number", start);
        return text.substr(start, pos - start);
    }
};

// "DdHHhMM" / "HHhMM" / "HhMM". Returns false when the shape does not match;
// throws RangeError for out-of-range components of a matching shape.
bool try_clock_literal(const std::string& s, Minute& out) {
    std::size_t i = 0;
    auto digits = [&](std::int64_t& v) {
        std::size_t start = i;
        v = 0;
        while (i < s.size() &&
               std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + (s[i] - '0');
            ++i;
        }
        return i > start;
    };
    std::int64_t first = 0, hours = 0, minutes = 0, days = 0;
    if (!digits(first)) return false;
    if (i < s.size() && s[i] == 'd') {
        ++i;
        days = first;
        if (!digits(hours)) return false;
    } else {
        hours = first;
    }
    if (i >= s.size() || s[i] != 'h') return false;
    ++i;
    std::size_t mstart = i;
    if (!digits(minutes)) return false;
    if (i - mstart != 2 || i != s.size()) return false;
    out = stamp_from_dhm(days, hours, minutes);
    return true;
}

Value scan_value(Scanner& sc) {
    sc.skip_ws();
    std::size_t at = sc.pos;
    if (sc.ident_start()) {
        std::string id = sc.ident();
        if (id == "true") return Value::boolean(true);
        if (id == "false") return Value::boolean(false);
        return Value::symbol(std::move(id));
    }
    if (!sc.number_start()) sc.fail("expected a value");
    std::string raw = sc.number_like();
    Minute clock = 0;
    try {
        if (try_clock_literal(raw, clock)) return Value::integer(clock);
    } catch (const RangeError& e) {
        sc.fail(e.what(), at);
    }
    Rational r;
    if (!Rational::parse(raw, r)) sc.fail("malformed value literal", at);
    return Value::rational(r);
}

Minute scan_duration(Scanner& sc) {
    sc.skip_ws();
    std::size_t at = sc.pos;
    std::string raw = sc.number_like();
    Minute clock = 0;
    try {
        if (try_clock_literal(raw, clock)) return clock;
    } catch (const RangeError& e) {
        sc.fail(e.what(), at);
    }
    if (!raw.empty() &&
        std::all_of(raw.begin(), raw.end(), [](unsigned char c) {
            return std::isdigit(c);
        })) {
        Minute v = 0;
        for (char c : raw) {
            v = v * 10 + (c - '0');
            if (v > 100'000'000) sc.fail("duration literal too large", at);
        }
        return v;
    }
    sc.fail("malformed duration literal", at);
}

// ---------------------------------------------------------------------------
// Temporal condition grammar
// ---------------------------------------------------------------------------

TfPtr scan_condition(Scanner& sc);

TfPtr scan_cond_term(Scanner& sc) {
    if (sc.eat_keyword("not")) {
        sc.expect('(');
        TfPtr inner = scan_condition(sc);
        sc.expect(')');
        return tf::negate(std::move(inner));
    }
    std::string fluent = sc.ident();
    sc.expect('=');
    Value v = scan_value(sc);
    TfPtr atom = tf::atom(std::move(fluent), std::move(v));
    if (sc.eat_keyword("since")) {
        std::size_t at = sc.pos;
        Minute d = scan_duration(sc);
        if (d < 1) sc.fail("duration must be positive", at);
        return tf::at_least(d, std::move(atom));
    }
    return atom;
}

TfPtr scan_condition(Scanner& sc) {
    std::vector<TfPtr> terms;
    terms.push_back(scan_cond_term(sc));
    while (sc.eat_keyword("and")) terms.push_back(scan_cond_term(sc));
    if (terms.size() == 1) return terms[0];
    return tf::conj(std::move(terms));
}

// ---------------------------------------------------------------------------
// Interval condition grammar
// ---------------------------------------------------------------------------

IfPtr scan_interval_condition(Scanner& sc);

IntervalValue scan_prop_ref(Scanner& sc) {
    int offset = 0;
    while (sc.peek('[')) {
        sc.expect('[');
        std::string t = sc.ident();
        if (t == "next")
            ++offset;
        else if (t == "prev")
            --offset;
        else if (t != "this")
            sc.fail("interval term must be next, prev or this");
        sc.expect(']');
    }
    std::string prop = sc.ident();
    return IntervalValue{PropRef{IntervalTerm{offset}, std::move(prop)}};
}

// Right-hand sides: a bracketed reference, "length", or a literal. Bare
// identifiers other than "length" read as symbol literals.
IntervalValue scan_interval_rhs(Scanner& sc) {
    if (sc.peek('[')) return scan_prop_ref(sc);
    if (sc.ident_start()) {
        std::string id = sc.ident();
        if (id == "true") return IntervalValue{Value::boolean(true)};
        if (id == "false") return IntervalValue{Value::boolean(false)};
        if (id == kLengthProperty)
            return IntervalValue{PropRef{IntervalTerm{0}, std::move(id)}};
        return IntervalValue{Value::symbol(std::move(id))};
    }
    sc.skip_ws();
    std::size_t at = sc.pos;
    std::string raw = sc.number_like();
    Minute clock = 0;
    try {
        if (try_clock_literal(raw, clock))
            return IntervalValue{Value::integer(clock)};
    } catch (const RangeError& e) {
        sc.fail(e.what(), at);
    }
    Rational r;
    if (!Rational::parse(raw, r)) sc.fail("malformed value literal", at);
    return IntervalValue{Value::rational(r)};
}

CmpOp scan_cmp(Scanner& sc) {
    sc.skip_ws();
    if (sc.eat('!')) {
        if (!sc.eat('=')) sc.fail("expected '=' after '!'");
        return CmpOp::ne;
    }
    if (sc.eat('<')) return sc.eat('=') ? CmpOp::le : CmpOp::lt;
    if (sc.eat('>')) return sc.eat('=') ? CmpOp::ge : CmpOp::gt;
    sc.expect('=');
    return CmpOp::eq;
}

IfPtr scan_interval_term(Scanner& sc) {
    if (sc.eat_keyword("not")) {
        sc.expect('(');
        IfPtr inner = scan_interval_condition(sc);
        sc.expect(')');
        return ivf::negate(std::move(inner));
    }
    IntervalValue lhs = scan_prop_ref(sc);
    CmpOp op = scan_cmp(sc);
    IntervalValue rhs = scan_interval_rhs(sc);
    return ivf::compare(std::move(lhs), op, std::move(rhs));
}

IfPtr scan_interval_condition(Scanner& sc) {
    std::vector<IfPtr> terms;
    terms.push_back(scan_interval_term(sc));
    while (sc.eat_keyword("and")) terms.push_back(scan_interval_term(sc));
    if (terms.size() == 1) return terms[0];
    return ivf::conj(std::move(terms));
}

// ---------------------------------------------------------------------------
// Property expression grammar
// ---------------------------------------------------------------------------

PePtr scan_expr_sum(Scanner& sc);

PePtr scan_expr_atom(Scanner& sc) {
    if (sc.eat('(')) {
        PePtr e = scan_expr_sum(sc);
        sc.expect(')');
        return e;
    }
    if (sc.ident_start()) return pe::ref(sc.ident());
    sc.skip_ws();
    std::size_t at = sc.pos;
    std::string raw = sc.number_like();
    Rational r;
    if (!Rational::parse(raw, r)) sc.fail("malformed numeric literal", at);
    return pe::constant(r);
}

PePtr scan_expr_product(Scanner& sc) {
    PePtr lhs = scan_expr_atom(sc);
    while (sc.eat('*')) lhs = pe::binary('*', std::move(lhs), scan_expr_atom(sc));
    return lhs;
}

PePtr scan_expr_sum(Scanner& sc) {
    PePtr lhs = scan_expr_product(sc);
    for (;;) {
        if (sc.eat('+'))
            lhs = pe::binary('+', std::move(lhs), scan_expr_product(sc));
        else if (sc.eat('-'))
            lhs = pe::binary('-', std::move(lhs), scan_expr_product(sc));
        else
            return lhs;
    }
}

// ---------------------------------------------------------------------------
// Line splitting
// ---------------------------------------------------------------------------

std::string strip_comment(const std::string& line) {
    std::size_t hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) {
        return std::isspace(c);
    });
}

TableRow split_cells(const std::string& line, std::size_t lineno) {
    TableRow row;
    row.line = lineno;
    std::size_t start = 0;
    for (;;) {
        std::size_t bar = line.find('|', start);
        std::string cell = line.substr(
            start, bar == std::string::npos ? std::string::npos : bar - start);
        std::size_t lead = 0;
        while (lead < cell.size() &&
               std::isspace(static_cast<unsigned char>(cell[lead])))
            ++lead;
        std::size_t end = cell.size();
        while (end > lead &&
               std::isspace(static_cast<unsigned char>(cell[end - 1])))
            --end;
        row.cells.push_back(cell.substr(lead, end - lead));
        row.columns.push_back(start + lead + 1);
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    return row;
}

const std::map<std::string, std::vector<std::string>>& table_headers() {
    static const std::map<std::string, std::vector<std::string>> headers = {
        {"inertial_fluents", {"name", "domain", "initial", "relevant"}},
        {"defined_fluents", {"name", "default", "relevant"}},
        {"defined_fluent_rules", {"fluent", "condition", "value"}},
        {"count_fluents", {"name", "condition"}},
        {"action_effects", {"action", "fluent", "value"}},
        {"conditional_effects", {"action", "condition", "fluent", "value"}},
        {"walltime_actions", {"action", "time"}},
        {"triggered_actions", {"action", "trigger"}},
        {"defined_properties", {"name", "default"}},
        {"defined_property_rules", {"property", "condition", "value"}},
        {"user_actions", {"action", "time"}},
    };
    return headers;
}

// Runs a cell sub-parser with diagnostics anchored at the cell's position.
template <typename F>
auto in_cell(const TableRow& row, std::size_t cell, F&& f) {
    Scanner sc{row.cells[cell], 0, row.line, row.columns[cell]};
    auto result = f(sc);
    sc.expect_end();
    return result;
}

Scanner cell_scanner(const TableRow& row, std::size_t cell) {
    return Scanner{row.cells[cell], 0, row.line, row.columns[cell]};
}

}  // namespace

// ---------------------------------------------------------------------------
// Public cell parsers
// ---------------------------------------------------------------------------

TfPtr parse_condition(const std::string& text) {
    Scanner sc{text};
    TfPtr f = scan_condition(sc);
    sc.expect_end();
    return f;
}

TriggerRule parse_trigger(const std::string& text, Name action) {
    Scanner sc{text};
    std::string fluent = sc.ident();
    sc.expect('=');
    Value v = scan_value(sc);
    if (sc.eat_keyword("since")) {
        std::size_t at = sc.pos;
        Minute d = scan_duration(sc);
        if (d < 1) sc.fail("duration must be positive", at);
        sc.expect_end();
        return AfterTrigger{std::move(fluent), std::move(v), d,
                            std::move(action)};
    }
    sc.expect_end();
    if (!v.is_int() || v.as_int() < 1)
        sc.fail("count threshold must be a positive duration", 0);
    return WhenTrigger{std::move(fluent), v.as_int(), std::move(action)};
}

IfPtr parse_interval_condition(const std::string& text) {
    Scanner sc{text};
    IfPtr f = scan_interval_condition(sc);
    sc.expect_end();
    return f;
}

PePtr parse_property_expr(const std::string& text) {
    Scanner sc{text};
    PePtr e = scan_expr_sum(sc);
    sc.expect_end();
    return e;
}

Minute parse_time(const std::string& text) {
    Scanner sc{text};
    sc.skip_ws();
    std::size_t at = sc.pos;
    std::string raw = sc.number_like();
    sc.expect_end();
    Minute clock = 0;
    try {
        if (try_clock_literal(raw, clock)) return clock;
    } catch (const RangeError& e) {
        sc.fail(e.what(), at);
    }
    sc.fail("malformed time literal", at);
}

Minute parse_duration(const std::string& text) { return parse_time(text); }

// ---------------------------------------------------------------------------
// Table splitting
// ---------------------------------------------------------------------------

TableDocument parse_tables(const std::string& text) {
    TableDocument doc;
    std::vector<std::pair<std::size_t, std::string>> lines;
    {
        std::size_t lineno = 1;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t nl = text.find('\n', start);
            std::string line = text.substr(
                start,
                nl == std::string::npos ? std::string::npos : nl - start);
            lines.emplace_back(lineno, strip_comment(line));
            if (nl == std::string::npos) break;
            start = nl + 1;
            ++lineno;
        }
    }

    Table* current = nullptr;
    bool expecting_header = false;
    for (const auto& [lineno, line] : lines) {
        if (blank(line)) {
            if (current && expecting_header)
                throw ParseError("table is missing its header row", lineno, 1);
            current = nullptr;
            continue;
        }
        TableRow row = split_cells(line, lineno);
        if (!current) {
            // Must be a "table <name>" line.
            Scanner sc{line, 0, lineno, 1};
            if (!sc.eat_keyword("table"))
                throw ParseError("expected 'table <name>'", lineno,
                                 sc.pos + 1);
            std::string name = sc.ident();
            sc.expect_end();
            auto it = table_headers().find(name);
            if (it == table_headers().end())
                throw ParseError("unknown table name '" + name + "'", lineno,
                                 7);
            doc.tables.push_back(Table{name, {}, {}, lineno});
            current = &doc.tables.back();
            expecting_header = true;
            continue;
        }
        if (expecting_header) {
            const auto& expected = table_headers().at(current->name);
            if (row.cells != expected) {
                std::string want;
                for (const auto& h : expected) {
                    if (!want.empty()) want += " | ";
                    want += h;
                }
                throw ParseError("header of '" + current->name +
                                     "' must read: " + want,
                                 lineno, 1);
            }
            current->header = row.cells;
            expecting_header = false;
            continue;
        }
        if (row.cells.size() != current->header.size())
            throw ParseError(
                "row has " + std::to_string(row.cells.size()) +
                    " cells, expected " +
                    std::to_string(current->header.size()),
                lineno, 1);
        current->rows.push_back(std::move(row));
    }
    if (current && expecting_header)
        throw ParseError("table is missing its header row", current->line, 1);
    return doc;
}

// ---------------------------------------------------------------------------
// Document assembly
// ---------------------------------------------------------------------------

namespace {

std::vector<Value> scan_domain(Scanner& sc) {
    if (sc.eat_keyword("bool"))
        return {Value::boolean(false), Value::boolean(true)};
    sc.expect('{');
    std::vector<Value> out;
    if (!sc.peek('}')) {
        out.push_back(scan_value(sc));
        while (sc.eat(',')) out.push_back(scan_value(sc));
    }
    sc.expect('}');
    return out;
}

bool scan_bool_cell(Scanner& sc) {
    if (sc.eat_keyword("true")) return true;
    if (sc.eat_keyword("false")) return false;
    sc.fail("expected true or false");
}

Name scan_name_cell(Scanner& sc) {
    std::string id = sc.ident();
    return id;
}

}  // namespace

std::pair<Ruleset, Scenario> parse_document(const std::string& text) {
    TableDocument doc = parse_tables(text);
    Ruleset rs;
    Scenario sc;

    std::map<Name, std::pair<ActionKind, std::size_t>> action_kinds;
    std::map<Name, std::vector<Minute>> schedules;
    auto note_action = [&](const Name& n, ActionKind kind, const TableRow& row,
                           std::size_t cell) {
        auto it = action_kinds.find(n);
        if (it == action_kinds.end()) {
            action_kinds[n] = {kind, row.line};
            return;
        }
        ActionKind have = it->second.first;
        if (have == kind) return;
        if (kind == ActionKind::user) return;  // mention only, keep stronger
        if (have == ActionKind::user) {
            it->second = {kind, row.line};
            return;
        }
        throw ParseError("action '" + n +
                             "' is declared both walltime and triggered",
                         row.line, row.columns[cell]);
    };

    for (const auto& table : doc.tables) {
        for (const auto& row : table.rows) {
            if (table.name == "inertial_fluents") {
                FluentDecl f;
                f.kind = FluentKind::inertial;
                f.name = in_cell(row, 0, scan_name_cell);
                f.domain = in_cell(row, 1,
                                   [](Scanner& s) { return scan_domain(s); });
                f.initial_or_default =
                    in_cell(row, 2, [](Scanner& s) { return scan_value(s); });
                f.relevant = in_cell(
                    row, 3, [](Scanner& s) { return scan_bool_cell(s); });
                rs.fluents.push_back(std::move(f));
            } else if (table.name == "defined_fluents") {
                FluentDecl f;
                f.kind = FluentKind::defined;
                f.name = in_cell(row, 0, scan_name_cell);
                f.initial_or_default =
                    in_cell(row, 1, [](Scanner& s) { return scan_value(s); });
                f.relevant = in_cell(
                    row, 2, [](Scanner& s) { return scan_bool_cell(s); });
                f.domain.push_back(f.initial_or_default);
                rs.fluents.push_back(std::move(f));
            } else if (table.name == "defined_fluent_rules") {
                DefinedRule r;
                r.fluent = in_cell(row, 0, scan_name_cell);
                r.condition = in_cell(
                    row, 1, [](Scanner& s) { return scan_condition(s); });
                r.value =
                    in_cell(row, 2, [](Scanner& s) { return scan_value(s); });
                rs.defined_rules.push_back(std::move(r));
            } else if (table.name == "count_fluents") {
                FluentDecl f;
                f.kind = FluentKind::count;
                f.name = in_cell(row, 0, scan_name_cell);
                f.initial_or_default = Value::integer(0);
                rs.fluents.push_back(f);
                CountRule r;
                r.count_fluent = f.name;
                r.condition = in_cell(
                    row, 1, [](Scanner& s) { return scan_condition(s); });
                rs.count_rules.push_back(std::move(r));
            } else if (table.name == "action_effects") {
                EffectRule e;
                e.action = in_cell(row, 0, scan_name_cell);
                e.fluent = in_cell(row, 1, scan_name_cell);
                e.value =
                    in_cell(row, 2, [](Scanner& s) { return scan_value(s); });
                note_action(e.action, ActionKind::user, row, 0);
                rs.effects.push_back(std::move(e));
            } else if (table.name == "conditional_effects") {
                EffectRule e;
                e.action = in_cell(row, 0, scan_name_cell);
                e.condition = in_cell(
                    row, 1, [](Scanner& s) { return scan_condition(s); });
                e.fluent = in_cell(row, 2, scan_name_cell);
                e.value =
                    in_cell(row, 3, [](Scanner& s) { return scan_value(s); });
                note_action(e.action, ActionKind::user, row, 0);
                rs.effects.push_back(std::move(e));
            } else if (table.name == "walltime_actions") {
                Name a = in_cell(row, 0, scan_name_cell);
                Minute t = in_cell(row, 1, [](Scanner& s) {
                    std::size_t at = s.pos;
                    std::string raw = s.number_like();
                    Minute clock = 0;
                    try {
                        if (try_clock_literal(raw, clock)) return clock;
                    } catch (const RangeError& e) {
                        s.fail(e.what(), at);
                    }
                    s.fail("malformed time literal", at);
                });
                note_action(a, ActionKind::walltime, row, 0);
                schedules[a].push_back(t);
            } else if (table.name == "triggered_actions") {
                Name a = in_cell(row, 0, scan_name_cell);
                note_action(a, ActionKind::triggered, row, 0);
                Scanner cell = cell_scanner(row, 1);
                std::string fluent = cell.ident();
                cell.expect('=');
                Value v = scan_value(cell);
                if (cell.eat_keyword("since")) {
                    std::size_t at = cell.pos;
                    Minute d = scan_duration(cell);
                    if (d < 1) cell.fail("duration must be positive", at);
                    cell.expect_end();
                    rs.triggers.push_back(
                        AfterTrigger{std::move(fluent), std::move(v), d, a});
                } else {
                    cell.expect_end();
                    if (!v.is_int() || v.as_int() < 1)
                        cell.fail(
                            "count threshold must be a positive duration", 0);
                    rs.triggers.push_back(
                        WhenTrigger{std::move(fluent), v.as_int(), a});
                }
            } else if (table.name == "defined_properties") {
                PropertyDecl p;
                p.name = in_cell(row, 0, scan_name_cell);
                Scanner cell = cell_scanner(row, 1);
                if (cell.eat('=')) {
                    PePtr e = scan_expr_sum(cell);
                    cell.expect_end();
                    p.default_value = std::move(e);
                } else {
                    Value v = scan_value(cell);
                    cell.expect_end();
                    p.default_value = std::move(v);
                }
                rs.property_decls.push_back(std::move(p));
            } else if (table.name == "defined_property_rules") {
                PropertyRule r;
                r.property = in_cell(row, 0, scan_name_cell);
                r.condition = in_cell(row, 1, [](Scanner& s) {
                    return scan_interval_condition(s);
                });
                r.value =
                    in_cell(row, 2, [](Scanner& s) { return scan_value(s); });
                rs.property_rules.push_back(std::move(r));
            } else if (table.name == "user_actions") {
                Name a = in_cell(row, 0, scan_name_cell);
                Minute t = in_cell(row, 1, [](Scanner& s) {
                    std::size_t at = s.pos;
                    std::string raw = s.number_like();
                    Minute clock = 0;
                    try {
                        if (try_clock_literal(raw, clock)) return clock;
                    } catch (const RangeError& e) {
                        s.fail(e.what(), at);
                    }
                    s.fail("malformed time literal", at);
                });
                note_action(a, ActionKind::user, row, 0);
                sc.user_actions.push_back(UserAction{a, t});
            }
        }
    }

    // Defined-fluent domains are inferred from default plus rule values.
    for (auto& f : rs.fluents) {
        if (f.kind != FluentKind::defined) continue;
        for (const auto& r : rs.defined_rules) {
            if (r.fluent != f.name) continue;
            if (std::find(f.domain.begin(), f.domain.end(), r.value) ==
                f.domain.end())
                f.domain.push_back(r.value);
        }
        // Boolean-looking domains complete to {false, true}.
        if (f.domain.size() == 1 && f.domain[0].is_bool())
            f.domain = {Value::boolean(false), Value::boolean(true)};
    }

    for (auto& [name, kindline] : action_kinds) {
        ActionDecl a;
        a.name = name;
        a.kind = kindline.first;
        if (auto it = schedules.find(name); it != schedules.end()) {
            std::sort(it->second.begin(), it->second.end());
            a.walltime_schedule = it->second;
        }
        rs.actions.push_back(std::move(a));
    }
    std::sort(rs.actions.begin(), rs.actions.end(),
              [](const ActionDecl& a, const ActionDecl& b) {
                  return a.name < b.name;
              });

    sc.sort();
    return {std::move(rs), std::move(sc)};
}

// ---------------------------------------------------------------------------
// Canonical rendering
// ---------------------------------------------------------------------------

namespace {

std::string render_value(const Value& v) {
    return v.str();
}

std::string render_clock(Minute t) { return format_minutes(t); }

std::string render_domain(const std::vector<Value>& domain) {
    if (domain.size() == 2 && domain[0] == Value::boolean(false) &&
        domain[1] == Value::boolean(true))
        return "bool";
    if (domain.size() == 2 && domain[0] == Value::boolean(true) &&
        domain[1] == Value::boolean(false))
        return "bool";
    std::string out = "{";
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (i) out += ", ";
        out += render_value(domain[i]);
    }
    out += "}";
    return out;
}

std::string render_term_prefix(const IntervalTerm& t, bool lhs) {
    std::string out;
    if (t.offset == 0) {
        // Bare on the left; [this] keeps right-hand references from reading
        // as symbol literals.
        return lhs ? "" : "[this]";
    }
    for (int i = 0; i < t.offset; ++i) out += "[next]";
    for (int i = 0; i > t.offset; --i) out += "[prev]";
    return out;
}

std::string render_interval_value(const IntervalValue& v, bool lhs) {
    if (const auto* ref = std::get_if<PropRef>(&v.rep)) {
        if (ref->prop == kLengthProperty && ref->term.offset == 0)
            return "length";
        return render_term_prefix(ref->term, lhs) + ref->prop;
    }
    return render_value(std::get<Value>(v.rep));
}

const char* render_cmp(CmpOp op) {
    switch (op) {
        case CmpOp::eq: return "=";
        case CmpOp::ne: return "!=";
        case CmpOp::lt: return "<";
        case CmpOp::le: return "<=";
        case CmpOp::gt: return ">";
        case CmpOp::ge: return ">=";
    }
    return "=";
}

void render_cond_into(const TfPtr& f, std::string& out);

void render_cond_term(const TemporalFormula& f, std::string& out) {
    if (const auto* a = std::get_if<TfAtom>(&f.node)) {
        out += a->fluent;
        out += "=";
        out += render_value(a->value);
        return;
    }
    if (const auto* n = std::get_if<TfNot>(&f.node)) {
        out += "not (";
        render_cond_into(n->sub, out);
        out += ")";
        return;
    }
    if (const auto* al = std::get_if<TfAtLeast>(&f.node)) {
        const auto* atom = std::get_if<TfAtom>(&al->sub->node);
        if (!atom)
            throw TypeError(
                "no table syntax for a duration over a non-atomic condition");
        out += atom->fluent;
        out += "=";
        out += render_value(atom->value);
        out += " since ";
        out += render_clock(al->n);
        return;
    }
    if (std::holds_alternative<TfExactly>(f.node))
        throw TypeError("no table syntax for exact-duration conditions");
    throw TypeError("conjunction cannot nest without 'not'");
}

void render_cond_into(const TfPtr& f, std::string& out) {
    if (!f) return;
    if (const auto* c = std::get_if<TfAnd>(&f->node)) {
        bool first = true;
        for (const auto& item : c->items) {
            if (!first) out += " and ";
            first = false;
            // Nested conjunctions flatten.
            if (std::holds_alternative<TfAnd>(item->node))
                render_cond_into(item, out);
            else
                render_cond_term(*item, out);
        }
        return;
    }
    render_cond_term(*f, out);
}

void render_icond_into(const IfPtr& f, std::string& out) {
    if (!f) return;
    if (const auto* c = std::get_if<IvAnd>(&f->node)) {
        bool first = true;
        for (const auto& item : c->items) {
            if (!first) out += " and ";
            first = false;
            render_icond_into(item, out);
        }
        return;
    }
    if (const auto* n = std::get_if<IvNot>(&f->node)) {
        out += "not (";
        render_icond_into(n->sub, out);
        out += ")";
        return;
    }
    const auto& cmp = std::get<IvCompare>(f->node);
    out += render_interval_value(cmp.lhs, true);
    out += " ";
    out += render_cmp(cmp.op);
    out += " ";
    out += render_interval_value(cmp.rhs, false);
}

int expr_precedence(const PePtr& e) {
    if (const auto* b = std::get_if<PeBinary>(&e->node))
        return b->op == '*' ? 2 : 1;
    return 3;
}

void render_expr_into(const PePtr& e, std::string& out) {
    if (const auto* c = std::get_if<PeConst>(&e->node)) {
        out += c->value.str();
        return;
    }
    if (const auto* r = std::get_if<PeRef>(&e->node)) {
        out += r->property;
        return;
    }
    const auto& b = std::get<PeBinary>(e->node);
    int prec = expr_precedence(e);
    auto child = [&](const PePtr& sub, bool right) {
        int sub_prec = expr_precedence(sub);
        bool parens = sub_prec < prec || (right && sub_prec == prec);
        if (parens) out += "(";
        render_expr_into(sub, out);
        if (parens) out += ")";
    };
    child(b.lhs, false);
    out += " ";
    out += b.op;
    out += " ";
    child(b.rhs, true);
}

}  // namespace

std::string render_condition(const TfPtr& f) {
    std::string out;
    render_cond_into(f, out);
    return out;
}

std::string render_interval_condition(const IfPtr& f) {
    std::string out;
    render_icond_into(f, out);
    return out;
}

std::string render_property_expr(const PePtr& e) {
    std::string out;
    render_expr_into(e, out);
    return out;
}

std::string render_document(const Ruleset& rs, const Scenario& sc) {
    std::string out;
    auto table = [&](const char* name, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
        if (rows.empty()) return;
        if (!out.empty()) out += "\n";
        out += "table ";
        out += name;
        out += "\n";
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out += " | ";
            out += header[i];
        }
        out += "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += " | ";
                out += row[i];
            }
            out += "\n";
        }
    };

    std::vector<std::vector<std::string>> rows;
    for (const auto& f : rs.fluents) {
        if (f.kind != FluentKind::inertial) continue;
        rows.push_back({f.name, render_domain(f.domain),
                        render_value(f.initial_or_default),
                        f.relevant ? "true" : "false"});
    }
    table("inertial_fluents", {"name", "domain", "initial", "relevant"}, rows);

    rows.clear();
    for (const auto& f : rs.fluents) {
        if (f.kind != FluentKind::defined) continue;
        rows.push_back({f.name, render_value(f.initial_or_default),
                        f.relevant ? "true" : "false"});
    }
    table("defined_fluents", {"name", "default", "relevant"}, rows);

    rows.clear();
    for (const auto& r : rs.defined_rules)
        rows.push_back(
            {r.fluent, render_condition(r.condition), render_value(r.value)});
    table("defined_fluent_rules", {"fluent", "condition", "value"}, rows);

    rows.clear();
    for (const auto& f : rs.fluents) {
        if (f.kind != FluentKind::count) continue;
        for (const auto& r : rs.count_rules)
            if (r.count_fluent == f.name)
                rows.push_back({f.name, render_condition(r.condition)});
    }
    table("count_fluents", {"name", "condition"}, rows);

    rows.clear();
    for (const auto& e : rs.effects) {
        if (e.condition) continue;
        rows.push_back({e.action, e.fluent, render_value(e.value)});
    }
    table("action_effects", {"action", "fluent", "value"}, rows);

    rows.clear();
    for (const auto& e : rs.effects) {
        if (!e.condition) continue;
        rows.push_back({e.action, render_condition(e.condition), e.fluent,
                        render_value(e.value)});
    }
    table("conditional_effects", {"action", "condition", "fluent", "value"},
          rows);

    rows.clear();
    for (const auto& a : rs.actions) {
        if (a.kind != ActionKind::walltime) continue;
        for (Minute t : a.walltime_schedule)
            rows.push_back({a.name, render_clock(t)});
    }
    table("walltime_actions", {"action", "time"}, rows);

    rows.clear();
    for (const auto& t : rs.triggers) {
        if (const auto* a = std::get_if<AfterTrigger>(&t)) {
            rows.push_back({a->action, a->fluent + "=" +
                                           render_value(a->value) +
                                           " since " +
                                           render_clock(a->duration_minutes)});
        } else {
            const auto& w = std::get<WhenTrigger>(t);
            rows.push_back({w.action, w.count_fluent + "=" +
                                          render_clock(w.threshold_minutes)});
        }
    }
    table("triggered_actions", {"action", "trigger"}, rows);

    rows.clear();
    for (const auto& p : rs.property_decls) {
        std::string def;
        if (const auto* v = std::get_if<Value>(&p.default_value))
            def = render_value(*v);
        else
            def = "= " + render_property_expr(std::get<PePtr>(p.default_value));
        rows.push_back({p.name, def});
    }
    table("defined_properties", {"name", "default"}, rows);

    rows.clear();
    for (const auto& r : rs.property_rules)
        rows.push_back({r.property, render_interval_condition(r.condition),
                        render_value(r.value)});
    table("defined_property_rules", {"property", "condition", "value"}, rows);

    rows.clear();
    for (const auto& u : sc.user_actions)
        rows.push_back({u.action, render_clock(u.at)});
    table("user_actions", {"action", "time"}, rows);

    return out;
}

}  // namespace timecard
