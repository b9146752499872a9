#ifndef TIMECARD_CLOCK_HPP
#define TIMECARD_CLOCK_HPP

#include <cstdint>
#include <string>

namespace timecard {

// All times and durations are whole minutes since scenario start.
using Minute = std::int64_t;

constexpr Minute kDefaultHorizon = 2880;  // two days

struct Dhm {
    std::int64_t days;
    std::int64_t hours;
    std::int64_t minutes;
    bool operator==(const Dhm&) const = default;
};

// (days*24 + hours)*60 + minutes. Throws RangeError unless
// days >= 0, 0 <= hours <= 23, 0 <= minutes <= 59.
Minute stamp_from_dhm(std::int64_t days, std::int64_t hours,
                      std::int64_t minutes);

// Inverse of stamp_from_dhm; t must be >= 0.
Dhm dhm_from_stamp(Minute t);

// Canonical clock rendering: "13h45", "0h00", "1d23h30".
std::string format_minutes(Minute t);

}  // namespace timecard

#endif
