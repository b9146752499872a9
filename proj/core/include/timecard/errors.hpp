#ifndef TIMECARD_ERRORS_HPP
#define TIMECARD_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace timecard {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text. line/column are 1-based; column 0 means "whole line".
class ParseError : public Error {
public:
    ParseError(std::string message, std::size_t line, std::size_t column)
        : Error("parse error at " + std::to_string(line) + ":" +
                std::to_string(column) + ": " + message),
          line(line),
          column(column),
          message(std::move(message)) {}

    std::size_t line;
    std::size_t column;
    std::string message;
};

// A name was used that is not declared.
class ReferenceError : public Error {
public:
    using Error::Error;
};

// An operation was applied to values of an unsupported kind
// (e.g. ordering two symbols).
class TypeError : public Error {
public:
    using Error::Error;
};

// A numeric argument was outside its allowed range.
class RangeError : public Error {
public:
    using Error::Error;
};

// A run derived contradictory facts: two distinct values caused for one
// fluent at one timepoint, ambiguous rules for a defined quantity, or a
// violated model constraint.
class InconsistencyError : public Error {
public:
    enum class Kind { conflicting_causes, ambiguous_rules, constraint };

    InconsistencyError(Kind kind, std::string subject, std::int64_t at,
                       std::string detail)
        : Error("inconsistent at t=" + std::to_string(at) + ": " + detail),
          kind(kind),
          subject(std::move(subject)),
          at(at),
          detail(std::move(detail)) {}

    Kind kind;
    std::string subject;  // fluent or property name
    std::int64_t at;      // minute (or interval index for interval rules)
    std::string detail;
};

// A rule dependency description admits no level mapping.
class NonStratifiableError : public Error {
public:
    explicit NonStratifiableError(std::vector<std::string> cycle)
        : Error("not stratifiable; cycle: " + join(cycle)),
          cycle(std::move(cycle)) {}

    std::vector<std::string> cycle;

private:
    static std::string join(const std::vector<std::string>& parts) {
        std::string out;
        for (const auto& p : parts) {
            if (!out.empty()) out += " -> ";
            out += p;
        }
        return out;
    }
};

}  // namespace timecard

#endif
