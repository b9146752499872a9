#ifndef TIMECARD_TESTS_FIXTURE_HPP
#define TIMECARD_TESTS_FIXTURE_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "timecard/ingest.hpp"

namespace timecard::testing {

inline std::string data_file(const std::string& name) {
    std::string path = std::string(TIMECARD_TEST_DATA) + "/" + name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing test data file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// The running example: rules plus the clocked-shift scenario.
inline std::pair<Ruleset, Scenario> fixture() {
    return parse_document(data_file("rules.tbl") + "\n" +
                          data_file("scenario.tbl"));
}

// Same rules, scenario aligned to a 30-minute grid.
inline std::pair<Ruleset, Scenario> fixture_aligned() {
    return parse_document(data_file("rules.tbl") + "\n" +
                          data_file("scenario_aligned.tbl"));
}

}  // namespace timecard::testing

#endif
