#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string output;
};

CmdResult run_cli(const std::string& args) {
    std::string cmd = std::string(TIMECARD_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult result;
    std::array<char, 512> buf;
    while (fgets(buf.data(), buf.size(), pipe)) result.output += buf.data();
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string data(const std::string& name) {
    return std::string(TIMECARD_TEST_DATA) + "/" + name;
}

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("run: both engines price the fixture at 191.00") {
    for (const char* mode : {"single", "changepoint"}) {
        CmdResult r = run_cli("run " + data("rules.tbl") + " " +
                              data("scenario.tbl") + " --mode " + mode);
        CHECK(r.exit_code == 0);
        CHECK_MESSAGE(contains(r.output, "total_wage: 191.00"), r.output);
        CHECK(contains(r.output, std::string("engine: ") + mode));
    }
}

TEST_CASE("run: granularity 15 changes steps, not results") {
    CmdResult fine = run_cli("run " + data("rules.tbl") + " " +
                             data("scenario.tbl") +
                             " --mode single --granularity 1");
    CmdResult coarse = run_cli("run " + data("rules.tbl") + " " +
                               data("scenario.tbl") +
                               " --mode single --granularity 15");
    CHECK(coarse.exit_code == 0);
    CHECK(contains(coarse.output, "steps: 192"));
    CHECK(contains(fine.output, "steps: 2880"));
    // Everything except steps/granularity/wall time coincides.
    auto strip = [](const std::string& text) {
        std::istringstream in(text);
        std::string line, out;
        while (std::getline(in, line)) {
            if (line.rfind("wall_ms", 0) == 0 || line.rfind("steps", 0) == 0 ||
                line.rfind("granularity", 0) == 0)
                continue;
            out += line + "\n";
        }
        return out;
    };
    CHECK(strip(fine.output) == strip(coarse.output));
}

TEST_CASE("run: an incompatible granularity is a validation failure") {
    CmdResult r = run_cli("run " + data("rules.tbl") + " " +
                          data("scenario.tbl") +
                          " --mode single --granularity 10");
    CHECK(r.exit_code == 3);
    CHECK(contains(r.output, "does not divide"));
}

TEST_CASE("exit codes: missing file, parse error, validation error") {
    CHECK(run_cli("run /no/such/file.tbl " + data("scenario.tbl"))
              .exit_code == 5);
    CHECK(contains(run_cli("run /no/such/file.tbl " + data("scenario.tbl"))
                       .output,
                   "/no/such/file.tbl"));

    CmdResult parse = run_cli("validate " + data("malformed/m01_unknown_table.tbl"));
    CHECK(parse.exit_code == 2);
    CHECK(contains(parse.output, "error:"));

    // A document referencing an undeclared fluent fails validation.
    CmdResult bad = run_cli("validate " + data("invalid_semantic.tbl"));
    CHECK(bad.exit_code == 3);
    CHECK(contains(bad.output, "unknown-fluent"));
}

TEST_CASE("validate accepts the fixture in both modes") {
    for (const char* mode : {"single", "changepoint"}) {
        CmdResult r = run_cli("validate " + data("rules.tbl") + " " +
                              data("scenario.tbl") + " --mode " + mode);
        CHECK(r.exit_code == 0);
        CHECK(contains(r.output, "ok"));
    }
}

TEST_CASE("diff: engines are equivalent until corrupted") {
    CmdResult ok = run_cli("diff " + data("rules.tbl") + " " +
                           data("scenario.tbl"));
    CHECK(ok.exit_code == 0);
    CHECK(contains(ok.output, "equivalent"));

    CmdResult bad = run_cli("diff " + data("rules.tbl") + " " +
                            data("scenario.tbl") +
                            " --inject-divergence 900");
    CHECK(bad.exit_code == 1);
    CHECK(contains(bad.output, "divergent"));
    CHECK(contains(bad.output, "900"));
}

TEST_CASE("bench: one averaged row per mode and granularity") {
    CmdResult r = run_cli("bench " + data("rules.tbl") + " " +
                          data("scenario.tbl") +
                          " --granularities 15,5,1 --repeat 2");
    CHECK(r.exit_code == 0);
    std::istringstream in(r.output);
    std::string line;
    std::getline(in, line);
    CHECK(line == "mode,granularity,timepoints,changepoints,wall_ms,steps");
    int rows = 0, single_rows = 0, cp_rows = 0;
    std::string cp_steps;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        if (line.rfind("single,", 0) == 0) ++single_rows;
        if (line.rfind("changepoint,", 0) == 0) {
            ++cp_rows;
            std::string steps = line.substr(line.rfind(',') + 1);
            if (cp_steps.empty()) cp_steps = steps;
            CHECK(steps == cp_steps);  // constant across granularities
        }
    }
    CHECK(rows == 6);
    CHECK(single_rows == 3);
    CHECK(cp_rows == 3);

    // Misaligned granularity is rejected.
    CmdResult bad = run_cli("bench " + data("rules.tbl") + " " +
                            data("scenario.tbl") + " --granularities 10");
    CHECK(bad.exit_code == 3);
}

TEST_CASE("gen: reproducible scenarios that the engines accept") {
    CmdResult a = run_cli("gen " + data("rules.tbl") + " --count 12 --seed 7");
    CmdResult b = run_cli("gen " + data("rules.tbl") + " --count 12 --seed 7");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(contains(a.output, "table user_actions"));

    CmdResult c = run_cli("gen " + data("rules.tbl") + " --count 12 --seed 8");
    CHECK(c.output != a.output);
}

TEST_CASE("run --out writes the report to a file") {
    std::string out = std::string(TIMECARD_TEST_DATA) + "/../tmp_report.txt";
    CmdResult r = run_cli("run " + data("rules.tbl") + " " +
                          data("scenario.tbl") + " --mode changepoint --out " +
                          out);
    CHECK(r.exit_code == 0);
    std::ifstream in(out);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(contains(ss.str(), "total_wage: 191.00"));
    CHECK(contains(ss.str(), "changepoints: 12"));
    std::remove(out.c_str());
}
