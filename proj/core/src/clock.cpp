#include "timecard/clock.hpp"

#include "timecard/errors.hpp"

namespace timecard {

Minute stamp_from_dhm(std::int64_t days, std::int64_t hours,
                      std::int64_t minutes) {
    if (days < 0) throw RangeError("days must be >= 0");
    if (hours < 0 || hours > 23) throw RangeError("hours must be in 0..23");
    if (minutes < 0 || minutes > 59)
        throw RangeError("minutes must be in 0..59");
    return (days * 24 + hours) * 60 + minutes;
}

Dhm dhm_from_stamp(Minute t) {
    if (t < 0) throw RangeError("timepoint must be >= 0");
    return Dhm{t / 1440, (t % 1440) / 60, t % 60};
}

std::string format_minutes(Minute t) {
    Dhm d = dhm_from_stamp(t);
    std::string out;
    if (d.days > 0) out += std::to_string(d.days) + "d";
    out += std::to_string(d.hours);
    out += 'h';
    if (d.minutes < 10) out += '0';
    out += std::to_string(d.minutes);
    return out;
}

}  // namespace timecard
