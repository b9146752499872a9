#include <algorithm>

#include "doctest.h"
#include "support/builders.hpp"
#include "timecard/errors.hpp"
#include "timecard/ingest.hpp"
#include "timecard/model.hpp"

using namespace timecard;
using namespace timecard::testing;

namespace {

bool has_violation(const ValidationReport& r, const std::string& code) {
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const Violation& v) { return v.code == code; });
}

Ruleset tiny_valid() {
    Ruleset rs;
    rs.fluents.push_back(bool_fluent("present", false));
    rs.fluents.push_back(
        bool_fluent("atWork", false, true, FluentKind::defined));
    rs.fluents.push_back(count_fluent("worked"));
    rs.actions.push_back(user_action("clockIn"));
    rs.effects.push_back(effect("clockIn", "present", B(true)));
    rs.defined_rules.push_back(
        defined_rule("atWork", B(true), tf::atom("present", B(true))));
    rs.count_rules.push_back(count_rule("worked", tf::atom("atWork", B(true))));
    return rs;
}

}  // namespace

TEST_CASE("a well-formed ruleset validates in both modes") {
    Ruleset rs = tiny_valid();
    CHECK(validate_ruleset(rs, EvalMode::single).ok());
    CHECK(validate_ruleset(rs, EvalMode::changepoint).ok());
}

TEST_CASE("the running example validates in changepoint mode") {
    // Mirrors the shipped fixture; kept in sync by the ingest tests.
    auto text = std::string("table inertial_fluents\n") +
                "name | domain | initial | relevant\n" +
                "present | bool | false | false\n";
    auto [rs, sc] = parse_document(text);
    CHECK(validate_ruleset(rs, EvalMode::changepoint, sc).ok());
}

TEST_CASE("defined-fluent cycles are reported with their members") {
    Ruleset rs;
    rs.fluents.push_back(bool_fluent("a", false, false, FluentKind::defined));
    rs.fluents.push_back(bool_fluent("b", false, false, FluentKind::defined));
    rs.defined_rules.push_back(
        defined_rule("a", B(true), tf::atom("b", B(true))));
    rs.defined_rules.push_back(
        defined_rule("b", B(true), tf::atom("a", B(true))));
    ValidationReport r = validate_ruleset(rs, EvalMode::single);
    REQUIRE(has_violation(r, "defined-cycle"));
    std::string msg;
    for (const auto& v : r.violations)
        if (v.code == "defined-cycle") msg = v.message;
    CHECK(msg.find("a") != std::string::npos);
    CHECK(msg.find("b") != std::string::npos);
}

TEST_CASE("changepoint mode rejects duration operators in defined rules") {
    Ruleset rs = tiny_valid();
    rs.defined_rules[0].condition =
        tf::at_least(30, tf::atom("present", B(true)));
    CHECK(validate_ruleset(rs, EvalMode::single).ok());
    ValidationReport r = validate_ruleset(rs, EvalMode::changepoint);
    CHECK(has_violation(r, "duration-in-changepoint-rule"));
}

TEST_CASE("changepoint mode rejects count reads in continuous rules") {
    Ruleset rs = tiny_valid();
    // Route the count off the defined fluent so reading it back stays acyclic.
    rs.count_rules[0] = count_rule("worked", tf::atom("present", B(true)));
    rs.defined_rules[0].condition = tf::atom("worked", I(480));
    ValidationReport r = validate_ruleset(rs, EvalMode::changepoint);
    CHECK(has_violation(r, "count-in-changepoint-rule"));
    CHECK(validate_ruleset(rs, EvalMode::single).ok());
}

TEST_CASE("changepoint mode rejects relevant count fluents") {
    Ruleset rs = tiny_valid();
    for (auto& f : rs.fluents)
        if (f.kind == FluentKind::count) f.relevant = true;
    CHECK(has_violation(validate_ruleset(rs, EvalMode::changepoint),
                        "relevant-count"));
}

TEST_CASE("reference and domain problems are data, not exceptions") {
    Ruleset rs = tiny_valid();
    rs.effects.push_back(effect("ghost", "present", B(true)));
    rs.effects.push_back(effect("clockIn", "present", Sym("sideways")));
    rs.effects.push_back(effect("clockIn", "atWork", B(true)));
    ValidationReport r = validate_ruleset(rs, EvalMode::single);
    CHECK(has_violation(r, "unknown-action"));
    CHECK(has_violation(r, "value-out-of-domain"));
    CHECK(has_violation(r, "effect-on-non-inertial"));
}

TEST_CASE("count fluents need exactly one rule") {
    Ruleset rs = tiny_valid();
    rs.count_rules.push_back(
        count_rule("worked", tf::atom("present", B(true))));
    CHECK(has_violation(validate_ruleset(rs, EvalMode::single),
                        "count-rule-not-unique"));
    Ruleset rs2 = tiny_valid();
    rs2.count_rules.clear();
    CHECK(has_violation(validate_ruleset(rs2, EvalMode::single),
                        "count-rule-missing"));
}

TEST_CASE("walltime schedules must be strictly sorted and in range") {
    Ruleset rs = tiny_valid();
    rs.actions.push_back(walltime_action("noon", {720, 720}));
    CHECK(has_violation(validate_ruleset(rs, EvalMode::single),
                        "walltime-schedule"));
    Ruleset rs2 = tiny_valid();
    rs2.actions.push_back(walltime_action("late", {4000}));
    CHECK(has_violation(validate_ruleset(rs2, EvalMode::single),
                        "time-out-of-range"));
}

TEST_CASE("scenario validation checks kinds and range") {
    Ruleset rs = tiny_valid();
    rs.actions.push_back(triggered_action("reward"));
    Scenario sc;
    sc.user_actions.push_back({"reward", 10});
    sc.user_actions.push_back({"clockIn", 9999});
    ValidationReport r = validate_ruleset(rs, EvalMode::single, sc);
    CHECK(has_violation(r, "scenario-action-kind"));
    CHECK(has_violation(r, "time-out-of-range"));
}

TEST_CASE("validation is deterministic") {
    Ruleset rs = tiny_valid();
    rs.effects.push_back(effect("ghost", "gone", B(true)));
    ValidationReport a = validate_ruleset(rs, EvalMode::changepoint);
    ValidationReport b = validate_ruleset(rs, EvalMode::changepoint);
    REQUIRE(a.violations.size() == b.violations.size());
    for (std::size_t i = 0; i < a.violations.size(); ++i) {
        CHECK(a.violations[i].code == b.violations[i].code);
        CHECK(a.violations[i].message == b.violations[i].message);
    }
}

TEST_CASE("dependency order puts prerequisites first") {
    SUBCASE("single defined fluent over inertials") {
        Ruleset rs;
        rs.fluents.push_back(bool_fluent("present", false));
        rs.fluents.push_back(bool_fluent("shiftStarted", false));
        rs.fluents.push_back(
            bool_fluent("atWork", false, false, FluentKind::defined));
        rs.defined_rules.push_back(defined_rule(
            "atWork", B(true),
            tf::conj({tf::atom("present", B(true)),
                      tf::atom("shiftStarted", B(true))})));
        CHECK(dependency_order(rs) == std::vector<Name>{"atWork"});
    }
    SUBCASE("chained defined fluents") {
        Ruleset rs;
        rs.fluents.push_back(bool_fluent("r", false));
        rs.fluents.push_back(bool_fluent("p", false, false,
                                         FluentKind::defined));
        rs.fluents.push_back(bool_fluent("q", false, false,
                                         FluentKind::defined));
        rs.defined_rules.push_back(
            defined_rule("p", B(true), tf::atom("q", B(true))));
        rs.defined_rules.push_back(
            defined_rule("q", B(true), tf::atom("r", B(true))));
        CHECK(dependency_order(rs) == std::vector<Name>{"q", "p"});
    }
    SUBCASE("no defined fluents") {
        Ruleset rs;
        rs.fluents.push_back(bool_fluent("r", false));
        CHECK(dependency_order(rs).empty());
    }
    SUBCASE("output is a permutation of the defined fluents") {
        Ruleset rs = tiny_valid();
        auto order = dependency_order(rs);
        std::size_t defined = 0;
        for (const auto& f : rs.fluents)
            if (f.kind == FluentKind::defined) ++defined;
        CHECK(order.size() == defined);
    }
}

TEST_CASE("time literal collection covers every duration source") {
    Ruleset rs = tiny_valid();
    rs.actions.push_back(walltime_action("noon", {720}));
    rs.actions.push_back(triggered_action("tick"));
    rs.triggers.push_back(AfterTrigger{"present", B(true), 60, "tick"});
    rs.triggers.push_back(WhenTrigger{"worked", 480, "tick"});
    rs.effects.push_back(effect("clockIn", "present", B(false),
                                tf::at_least(45, tf::atom("present", B(true)))));
    Scenario sc;
    sc.user_actions.push_back({"clockIn", 825});
    auto lits = collect_time_literals(rs, sc);
    for (Minute expect : {rs.horizon, Minute(720), Minute(60), Minute(480),
                          Minute(45), Minute(825)})
        CHECK(std::count(lits.begin(), lits.end(), expect) >= 1);
}

TEST_CASE("identifier syntax") {
    CHECK(valid_identifier("atWork"));
    CHECK(valid_identifier("a_1"));
    CHECK_FALSE(valid_identifier(""));
    CHECK_FALSE(valid_identifier("1a"));
    CHECK_FALSE(valid_identifier("a-b"));
    CHECK_FALSE(valid_identifier("_a"));
}
