#include <random>

#include "doctest.h"
#include "support/builders.hpp"
#include "support/fixture.hpp"
#include "support/generators.hpp"
#include "timecard/engine_changepoint.hpp"
#include "timecard/errors.hpp"

using namespace timecard;
using namespace timecard::testing;

TEST_CASE("upfront points are the scheduled minutes plus the horizon") {
    auto [rs, sc] = fixture();
    CHECK(upfront_points(rs, sc) ==
          std::vector<Minute>{420, 825, 840, 960, 990, 1320, 1380, 1410,
                              2880});

    SUBCASE("empty scenario, no walltime actions") {
        Ruleset bare;
        bare.fluents.push_back(bool_fluent("p", false));
        CHECK(upfront_points(bare, Scenario{}) ==
              std::vector<Minute>{bare.horizon});
    }
    SUBCASE("coinciding occurrences deduplicate") {
        Ruleset rs2;
        rs2.fluents.push_back(bool_fluent("p", false));
        rs2.actions.push_back(user_action("a"));
        rs2.actions.push_back(user_action("b"));
        Scenario sc2;
        sc2.user_actions = {{"a", 300}, {"b", 300}};
        CHECK(upfront_points(rs2, sc2) ==
              std::vector<Minute>{300, rs2.horizon});
    }
}

TEST_CASE("search_next extrapolates both trigger kinds") {
    auto [rs, sc] = fixture();

    SUBCASE("duration trigger: anchor plus duration") {
        TickState st = initial_state(rs, sc);
        st.t = 841;
        st.values.at("present") = B(true);
        st.values.at("shiftStarted") = B(true);
        st.values.at("atWork") = B(true);
        st.anchors.at("present") = 826;
        st.anchors.at("shiftStarted") = 841;
        st.anchors.at("atWork") = 841;
        CHECK(search_next(rs, st, 841) == 901);
    }
    SUBCASE("threshold trigger: linear count extrapolation") {
        TickState st = initial_state(rs, sc);
        st.t = 991;
        st.values.at("present") = B(true);
        st.values.at("shiftStarted") = B(true);
        st.values.at("atWork") = B(true);
        st.values.at("workedHours") = I(120);
        st.anchors.at("present") = 991;
        st.anchors.at("shiftStarted") = 841;
        st.anchors.at("atWork") = 991;
        // The rest-break trigger already fired (901 is in the past); the
        // count reaches 480 after another 360 minutes.
        CHECK(search_next(rs, st, 991) == 1351);
    }
    SUBCASE("nothing armed") {
        TickState st = initial_state(rs, sc);
        CHECK(search_next(rs, st, 0) == std::nullopt);
    }
    SUBCASE("pending causes arm triggers for the following segment") {
        TickState st = initial_state(rs, sc);
        st.t = 840;
        st.values.at("present") = B(true);
        st.anchors.at("present") = 826;
        st.pending.push_back(
            PendingCause{"shiftStarted", B(true), {"dayStarts"}});
        // shiftStarted lands at 841, so the rest break arms for 901.
        CHECK(search_next(rs, st, 840) == 901);
    }
}

TEST_CASE("advance performs one wide dynamic step") {
    auto [rs, sc] = fixture();

    SUBCASE("counts accumulate span times condition") {
        TickState st = initial_state(rs, sc);
        st.t = 991;
        st.values.at("present") = B(true);
        st.values.at("shiftStarted") = B(true);
        st.values.at("atWork") = B(true);
        st.values.at("workedHours") = I(120);
        st.anchors.at("atWork") = 991;
        TickState next = advance(rs, st, 991, 1320);
        CHECK(next.t == 1320);
        CHECK(next.values.at("workedHours") == I(120 + 329));
    }
    SUBCASE("pending causes land one minute after the changepoint") {
        TickState st = initial_state(rs, sc);
        st.t = 825;
        st.pending.push_back(PendingCause{"present", B(true), {"clockIn"}});
        TickState next = advance(rs, st, 825, 840);
        CHECK(next.values.at("present") == B(true));
        CHECK(next.anchors.at("present") == 826);
    }
    SUBCASE("a one-minute advance equals a tick step") {
        TickState st = initial_state(rs, sc);
        st.t = 840;
        st.values.at("present") = B(true);
        st.anchors.at("present") = 826;
        st.pending.push_back(
            PendingCause{"shiftStarted", B(true), {"dayStarts"}});
        TickState via_advance = advance(rs, st, 840, 841);
        TickState via_tick = tick_step(rs, st, 841);
        CHECK(via_advance.t == via_tick.t);
        for (const auto& [name, v] : via_advance.values)
            CHECK(v == via_tick.values.at(name));
        for (const auto& [name, a] : via_advance.anchors)
            CHECK(a == via_tick.anchors.at(name));
    }
    SUBCASE("preconditions") {
        TickState st = initial_state(rs, sc);
        CHECK_THROWS_AS(advance(rs, st, 5, 10), RangeError);   // st.t != pp
        CHECK_THROWS_AS(advance(rs, st, 0, 0), RangeError);    // cp <= pp
    }
}

TEST_CASE("the fixture run visits exactly the changepoints") {
    auto [rs, sc] = fixture();
    auto [run, trace] = run_changepoint(rs, sc);
    CHECK(trace.changepoints ==
          std::vector<Minute>{0, 420, 825, 840, 901, 960, 990, 1320, 1350,
                              1380, 1410, 2880});
    CHECK(trace.advance_count == 11);
    CHECK(trace.advance_count >= 11);
    CHECK(trace.advance_count <= 13);
    CHECK(run.steps == trace.advance_count);
    CHECK(trace.states.size() == trace.changepoints.size());

    SUBCASE("empty scenario: two changepoints, one advance") {
        Scenario empty;
        Ruleset bare;
        bare.fluents.push_back(bool_fluent("p", false));
        auto [run2, trace2] = run_changepoint(bare, empty);
        CHECK(trace2.changepoints == std::vector<Minute>{0, bare.horizon});
        CHECK(trace2.advance_count == 1);
    }
    SUBCASE("doubling the horizon adds at most one advance") {
        Ruleset wide = rs;
        wide.horizon = 5760;
        auto [run3, trace3] = run_changepoint(wide, sc);
        CHECK(trace3.advance_count <= trace.advance_count + 1);
    }
}

TEST_CASE("the per-minute expansion equals the per-tick run on the fixture") {
    auto [rs, sc] = fixture();
    CHECK(check_engines_agree(rs, sc) == std::nullopt);
}

TEST_CASE("progress: changepoints increase strictly") {
    auto [rs, sc] = fixture();
    auto [run, trace] = run_changepoint(rs, sc);
    for (std::size_t i = 1; i < trace.changepoints.size(); ++i)
        CHECK(trace.changepoints[i - 1] < trace.changepoints[i]);
}

TEST_CASE("work bound: advances never exceed occurrences plus firings") {
    std::mt19937_64 rng(555);
    for (int round = 0; round < 30; ++round) {
        GenOptions opt;
        opt.horizon = 1440;
        RulesetGen gen(rng, opt);
        Ruleset rs = gen.ruleset();
        Scenario sc = gen.scenario(rs, 5);
        if (!validate_ruleset(rs, EvalMode::changepoint, sc).ok()) continue;
        std::pair<RunTrace, ChangepointTrace> result;
        try {
            result = run_changepoint(rs, sc);
        } catch (const InconsistencyError&) {
            continue;
        }
        const ChangepointTrace& trace = result.second;
        std::size_t occurrences = 0;
        for (const auto& a : rs.actions)
            occurrences += a.walltime_schedule.size();
        occurrences += sc.user_actions.size();
        std::size_t firings = 0;
        for (const auto& h : trace.happenings)
            if (h.kind == ActionKind::triggered) ++firings;
        CHECK(trace.advance_count <= occurrences + firings + 1);
    }
}

TEST_CASE("ties between triggered and scheduled minutes make one changepoint") {
    // A duration trigger lands exactly on a walltime occurrence.
    Ruleset rs;
    rs.horizon = 600;
    rs.fluents.push_back(bool_fluent("p", false));
    rs.fluents.push_back(bool_fluent("q", false));
    rs.fluents.push_back(bool_fluent("r", false));
    rs.actions.push_back(user_action("start"));
    rs.actions.push_back(walltime_action("noon", {161}));
    rs.actions.push_back(triggered_action("mark"));
    rs.effects.push_back(effect("start", "p", B(true)));
    rs.effects.push_back(effect("noon", "q", B(true)));
    rs.effects.push_back(effect("mark", "r", B(true)));
    // p lands at 101; held 60 minutes at 161 == noon.
    rs.triggers.push_back(AfterTrigger{"p", B(true), 60, "mark"});
    Scenario sc;
    sc.user_actions = {{"start", 100}};

    auto [run, trace] = run_changepoint(rs, sc);
    std::size_t count_161 = 0;
    for (Minute cp : trace.changepoints)
        if (cp == 161) ++count_161;
    CHECK(count_161 == 1);
    bool mark_fired = false, noon_fired = false;
    for (const auto& h : run.happenings) {
        if (h.at == 161 && h.action == "mark") mark_fired = true;
        if (h.at == 161 && h.action == "noon") noon_fired = true;
    }
    CHECK(mark_fired);
    CHECK(noon_fired);
    CHECK(check_engines_agree(rs, sc) == std::nullopt);
}

TEST_CASE("randomized engine agreement across rule kinds") {
    std::mt19937_64 rng(77);
    int agreed = 0;
    for (int round = 0; round < 60; ++round) {
        GenOptions opt;
        opt.horizon = 720;
        RulesetGen gen(rng, opt);
        Ruleset rs = gen.ruleset();
        Scenario sc = gen.scenario(rs, 4);
        if (!validate_ruleset(rs, EvalMode::changepoint, sc).ok()) continue;
        std::string divergence = check_engines_agree(rs, sc).value_or("");
        CHECK_MESSAGE(divergence.empty(), divergence);
        ++agreed;
    }
    CHECK(agreed >= 30);
}
