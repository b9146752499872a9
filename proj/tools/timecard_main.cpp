// Command-line front end: validate rulesets, run scenarios in either engine,
// diff the engines against each other, benchmark, and generate scenarios.
//
// Exit codes: 0 ok, 1 usage/divergence, 2 parse error, 3 validation error,
// 4 inconsistent run, 5 I/O error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "timecard/clock.hpp"
#include "timecard/engine_changepoint.hpp"
#include "timecard/engine_single.hpp"
#include "timecard/errors.hpp"
#include "timecard/ingest.hpp"
#include "timecard/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDivergence = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInconsistency = 4;
constexpr int kExitIo = 5;

struct IoError : timecard::Error {
    using Error::Error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out) throw IoError("error while writing '" + path + "'");
}

struct Inputs {
    timecard::Ruleset rs;
    timecard::Scenario sc;
};

// The ruleset file and the scenario file are both table documents; rule
// tables and user_actions rows merge across the two.
Inputs load(const std::string& ruleset_path, const std::string& scenario_path,
            timecard::Minute horizon) {
    auto [rs1, sc1] = timecard::parse_document(read_file(ruleset_path));
    Inputs in;
    in.rs = std::move(rs1);
    in.sc = std::move(sc1);
    if (!scenario_path.empty()) {
        std::string text = read_file(scenario_path);
        auto [rs2, sc2] = timecard::parse_document(text);
        for (const auto& u : sc2.user_actions) in.sc.user_actions.push_back(u);
        // A scenario file may declare extra user actions.
        for (const auto& a : rs2.actions)
            if (!in.rs.find_action(a.name)) in.rs.actions.push_back(a);
    }
    if (horizon > 0) in.rs.horizon = horizon;
    in.sc.sort();
    return in;
}

void require_valid(const Inputs& in, timecard::EvalMode mode) {
    timecard::ValidationReport report =
        timecard::validate_ruleset(in.rs, mode, in.sc);
    if (!report.ok())
        throw timecard::Error("validation failed:\n" + report.str());
}

double toc_ms(std::chrono::steady_clock::time_point t0) {
    auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration<double, std::milli>(dt).count();
}

int cmd_validate(const std::string& ruleset_path,
                 const std::string& scenario_path, const std::string& mode,
                 timecard::Minute horizon) {
    Inputs in = load(ruleset_path, scenario_path, horizon);
    timecard::EvalMode m = mode == "changepoint"
                               ? timecard::EvalMode::changepoint
                               : timecard::EvalMode::single;
    timecard::ValidationReport report =
        timecard::validate_ruleset(in.rs, m, in.sc);
    if (report.ok()) {
        std::cout << "ok\n";
        return kExitOk;
    }
    std::cout << report.str() << "\n";
    return kExitValidation;
}

int cmd_run(const std::string& ruleset_path, const std::string& scenario_path,
            const std::string& mode, timecard::Minute granularity,
            timecard::Minute horizon, const std::string& out_path) {
    Inputs in = load(ruleset_path, scenario_path, horizon);
    timecard::TraceReport report;
    auto t0 = std::chrono::steady_clock::now();
    if (mode == "changepoint") {
        require_valid(in, timecard::EvalMode::changepoint);
        auto [run, cpt] = timecard::run_changepoint(in.rs, in.sc);
        double ms = toc_ms(t0);
        report = timecard::build_report(in.rs, run, "changepoint", 1, &cpt);
        report.wall_ms = ms;
    } else if (mode == "single") {
        require_valid(in, timecard::EvalMode::single);
        timecard::RunTrace run =
            timecard::run_single(in.rs, in.sc, granularity);
        double ms = toc_ms(t0);
        report = timecard::build_report(in.rs, run, "single", granularity);
        report.wall_ms = ms;
    } else {
        throw timecard::RangeError("mode must be single or changepoint");
    }
    std::string text = timecard::report_text(report);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return kExitOk;
}

int cmd_diff(const std::string& ruleset_path, const std::string& scenario_path,
             timecard::Minute horizon, timecard::Minute corrupt_at) {
    Inputs in = load(ruleset_path, scenario_path, horizon);
    require_valid(in, timecard::EvalMode::changepoint);
    timecard::RunTrace single = timecard::run_single(in.rs, in.sc, 1);
    auto [cp_run, cpt] = timecard::run_changepoint(in.rs, in.sc);
    if (corrupt_at >= 0)
        cp_run = timecard::with_flipped_value(in.rs, cp_run, corrupt_at);
    std::optional<std::string> divergence =
        timecard::compare_runs(in.rs, single, cp_run);
    if (!divergence) {
        std::cout << "equivalent\n";
        return kExitOk;
    }
    std::cout << "divergent: " << *divergence << "\n";
    return kExitDivergence;
}

int cmd_bench(const std::string& ruleset_path,
              const std::string& scenario_path,
              const std::vector<timecard::Minute>& granularities, int repeat,
              timecard::Minute horizon, const std::string& out_path) {
    Inputs in = load(ruleset_path, scenario_path, horizon);
    require_valid(in, timecard::EvalMode::changepoint);
    for (timecard::Minute g : granularities)
        for (timecard::Minute lit :
             timecard::collect_time_literals(in.rs, in.sc))
            if (g < 1 || lit % g != 0)
                throw timecard::Error(
                    "validation failed: granularity " + std::to_string(g) +
                    " does not divide time literal " + std::to_string(lit));

    std::ostringstream csv;
    csv << "mode,granularity,timepoints,changepoints,wall_ms,steps\n";
    for (timecard::Minute g : granularities) {
        double total = 0.0;
        std::size_t steps = 0;
        for (int i = 0; i < repeat; ++i) {
            auto t0 = std::chrono::steady_clock::now();
            timecard::RunTrace run = timecard::run_single(in.rs, in.sc, g);
            total += toc_ms(t0);
            steps = run.steps;
        }
        csv << "single," << g << "," << in.rs.horizon / g << ",,"
            << total / repeat << "," << steps << "\n";
    }
    for (timecard::Minute g : granularities) {
        double total = 0.0;
        std::size_t steps = 0;
        std::size_t cps = 0;
        for (int i = 0; i < repeat; ++i) {
            auto t0 = std::chrono::steady_clock::now();
            auto [run, cpt] = timecard::run_changepoint(in.rs, in.sc);
            total += toc_ms(t0);
            steps = cpt.advance_count;
            cps = cpt.changepoints.size();
        }
        csv << "changepoint," << g << "," << in.rs.horizon / g << "," << cps
            << "," << total / repeat << "," << steps << "\n";
    }
    if (out_path.empty())
        std::cout << csv.str();
    else
        write_file(out_path, csv.str());
    return kExitOk;
}

int cmd_gen(const std::string& ruleset_path, int count, std::uint64_t seed,
            timecard::Minute horizon, const std::string& out_path) {
    Inputs in = load(ruleset_path, "", horizon);
    std::vector<timecard::Name> user_actions;
    for (const auto& a : in.rs.actions)
        if (a.kind == timecard::ActionKind::user)
            user_actions.push_back(a.name);
    if (user_actions.empty())
        throw timecard::Error("validation failed: ruleset has no user actions");

    std::mt19937_64 rng(seed);
    std::set<timecard::Minute> minutes;
    std::uniform_int_distribution<timecard::Minute> pick(1,
                                                         in.rs.horizon - 1);
    while (static_cast<int>(minutes.size()) < count) minutes.insert(pick(rng));

    timecard::Scenario sc;
    std::size_t i = 0;
    for (timecard::Minute m : minutes) {
        sc.user_actions.push_back(
            timecard::UserAction{user_actions[i % user_actions.size()], m});
        ++i;
    }
    std::string text = "# generated scenario: count=" + std::to_string(count) +
                       " seed=" + std::to_string(seed) + "\n" +
                       timecard::render_document(timecard::Ruleset{}, sc);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"table-driven temporal wage engine"};
    app.require_subcommand(1);

    std::string ruleset_path, scenario_path, out_path, mode = "single";
    timecard::Minute granularity = 1;
    timecard::Minute horizon = 0;  // 0: keep the document/default horizon
    timecard::Minute corrupt_at = -1;
    std::vector<timecard::Minute> granularities = {30, 15, 5, 1};
    int repeat = 5;
    int gen_count = 10;
    std::uint64_t seed = 1;

    CLI::App* validate =
        app.add_subcommand("validate", "check a ruleset for problems");
    validate->add_option("ruleset", ruleset_path)->required();
    validate->add_option("scenario", scenario_path);
    validate->add_option("--mode", mode)
        ->check(CLI::IsMember({"single", "changepoint"}));
    validate->add_option("--horizon", horizon);

    CLI::App* run = app.add_subcommand("run", "evaluate a scenario");
    run->add_option("ruleset", ruleset_path)->required();
    run->add_option("scenario", scenario_path)->required();
    run->add_option("--mode", mode)
        ->check(CLI::IsMember({"single", "changepoint"}));
    run->add_option("--granularity", granularity);
    run->add_option("--horizon", horizon);
    run->add_option("--out", out_path);

    CLI::App* diff =
        app.add_subcommand("diff", "run both engines and compare");
    diff->add_option("ruleset", ruleset_path)->required();
    diff->add_option("scenario", scenario_path)->required();
    diff->add_option("--horizon", horizon);
    diff->add_option("--inject-divergence", corrupt_at)
        ->description("test hook: flip one value at this minute");

    CLI::App* bench = app.add_subcommand("bench", "timing sweep, CSV output");
    bench->add_option("ruleset", ruleset_path)->required();
    bench->add_option("scenario", scenario_path)->required();
    bench->add_option("--granularities", granularities)->delimiter(',');
    bench->add_option("--repeat", repeat)->check(CLI::PositiveNumber);
    bench->add_option("--horizon", horizon);
    bench->add_option("--out", out_path);

    CLI::App* gen =
        app.add_subcommand("gen", "generate a random scenario document");
    gen->add_option("ruleset", ruleset_path)->required();
    gen->add_option("--count", gen_count)->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed);
    gen->add_option("--horizon", horizon);
    gen->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed())
            return cmd_validate(ruleset_path, scenario_path, mode, horizon);
        if (run->parsed())
            return cmd_run(ruleset_path, scenario_path, mode, granularity,
                           horizon, out_path);
        if (diff->parsed())
            return cmd_diff(ruleset_path, scenario_path, horizon, corrupt_at);
        if (bench->parsed())
            return cmd_bench(ruleset_path, scenario_path, granularities,
                             repeat, horizon, out_path);
        if (gen->parsed())
            return cmd_gen(ruleset_path, gen_count, seed, horizon, out_path);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const timecard::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const timecard::InconsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInconsistency;
    } catch (const timecard::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        // Validation failures and granularity problems both read as
        // configuration errors.
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
