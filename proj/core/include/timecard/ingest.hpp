#ifndef TIMECARD_INGEST_HPP
#define TIMECARD_INGEST_HPP

#include <string>
#include <utility>
#include <vector>

#include "timecard/model.hpp"

namespace timecard {

// ---------------------------------------------------------------------------
// Table documents: the line-oriented rule format. A table starts with
// "table <name>", followed by a header row and data rows; cells are
// separated by '|' with surrounding whitespace trimmed; '#' starts a
// comment; blank lines separate tables.
// ---------------------------------------------------------------------------

struct TableRow {
    std::vector<std::string> cells;
    std::size_t line = 0;               // 1-based
    std::vector<std::size_t> columns;   // 1-based start of each cell
};

struct Table {
    Name name;
    std::vector<std::string> header;
    std::vector<TableRow> rows;
    std::size_t line = 0;
};

struct TableDocument {
    std::vector<Table> tables;
};

// Splits text into tables; checks only shape (arity, known table names,
// expected headers). All cell syntax errors carry line and column.
TableDocument parse_tables(const std::string& text);

// Full document parse. user_actions rows populate the Scenario; everything
// else populates the Ruleset. Undeclared references and other semantic
// problems are left for validate_ruleset.
std::pair<Ruleset, Scenario> parse_document(const std::string& text);

// Canonical rendering; parse_document(render_document(rs, sc)) yields
// structurally identical results for anything that came out of
// parse_document.
std::string render_document(const Ruleset& rs, const Scenario& sc);

// ---------------------------------------------------------------------------
// Cell grammars, usable standalone. Errors are ParseError with a 1-based
// column into the given text (line is always 1).
// ---------------------------------------------------------------------------

// cond := term ('and' term)* ; term := atom | atom 'since' duration
//       | 'not' '(' cond ')' ; atom := ident '=' value.
// "x=v since D" lowers to a trailing-window duration (held at least D);
// triggers use their own exact-duration reading via parse_trigger.
TfPtr parse_condition(const std::string& text);

// trigger := ident '=' value 'since' duration   (duration trigger)
//          | ident '=' duration                  (count threshold trigger)
TriggerRule parse_trigger(const std::string& text, Name action);

// iatom := termref cmp (termref | literal); termref := ('[' ('next'|'prev'|
// 'this') ']')* ident; bare identifiers on the right-hand side are literals
// unless they read "length".
IfPtr parse_interval_condition(const std::string& text);

// expr over property names, rational literals, +, -, * and parentheses.
PePtr parse_property_expr(const std::string& text);

// "13h45", "0h00", "1d23h30" -> minutes since scenario start.
Minute parse_time(const std::string& text);
// Same surface grammar as parse_time; durations and clock times share it.
Minute parse_duration(const std::string& text);

// Canonical condition renderings (inverses of the parsers above for parsed
// input). Formulas with no table syntax (duration windows over non-atomic
// formulas, exact-duration windows) are rejected with TypeError.
std::string render_condition(const TfPtr& f);
std::string render_interval_condition(const IfPtr& f);
std::string render_property_expr(const PePtr& e);

}  // namespace timecard

#endif
