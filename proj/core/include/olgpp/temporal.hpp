#ifndef OLGPP_TEMPORAL_HPP
#define OLGPP_TEMPORAL_HPP

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace olgpp {

/// Timezone-naive local civil time, second resolution.
using Instant = std::chrono::local_seconds;
using Minutes = std::chrono::minutes;

/// Set of weekdays, bit i = std::chrono::weekday::c_encoding() == i (Sunday = 0).
class DaySet {
public:
    constexpr DaySet() = default;
    static constexpr DaySet all() { return DaySet(0x7f); }
    static constexpr DaySet none() { return DaySet(0); }

    constexpr bool contains(std::chrono::weekday day) const {
        return (bits_ >> day.c_encoding()) & 1u;
    }
    constexpr DaySet with(std::chrono::weekday day) const {
        return DaySet(static_cast<std::uint8_t>(bits_ | (1u << day.c_encoding())));
    }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool is_all() const { return bits_ == 0x7f; }
    constexpr DaySet intersect(DaySet other) const {
        return DaySet(static_cast<std::uint8_t>(bits_ & other.bits_));
    }
    constexpr std::uint8_t bits() const { return bits_; }

    friend constexpr bool operator==(DaySet, DaySet) = default;

private:
    constexpr explicit DaySet(std::uint8_t bits) : bits_(bits) {}
    std::uint8_t bits_ = 0x7f;
};

/// Either an absolute interval [start, end) or a daily time-of-day interval
/// [start, end) restricted to a set of weekdays. Daily windows never wrap
/// past midnight; "until midnight" is written as an end of 24:00.
class TimeWindow {
public:
    enum class Kind { absolute, daily_recurring };

    static TimeWindow absolute(Instant start, Instant end);
    static TimeWindow daily(Minutes start_of_day, Minutes end_of_day, DaySet days = DaySet::all());

    Kind kind() const { return kind_; }
    Instant start() const { return start_; }
    Instant end() const { return end_; }
    Minutes start_of_day() const { return start_of_day_; }
    Minutes end_of_day() const { return end_of_day_; }
    DaySet days() const { return days_; }

    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;

private:
    TimeWindow() = default;

    Kind kind_ = Kind::absolute;
    Instant start_{};
    Instant end_{};
    Minutes start_of_day_{0};
    Minutes end_of_day_{0};
    DaySet days_ = DaySet::all();
};

class DurationLimit {
public:
    explicit DurationLimit(Minutes limit);
    Minutes limit() const { return limit_; }

private:
    Minutes limit_;
};

bool in_window(Instant t, const TimeWindow& window);

/// True iff end - start is strictly longer than the limit.
bool duration_exceeds(Instant start, Instant end, DurationLimit limit);

/// Closed-open intersection test; symmetric.
bool overlaps(const TimeWindow& a, const TimeWindow& b);

/// t2 must not precede t1 and must follow it by at most max_gap.
bool sequence_ok(Instant t1, Instant t2, Minutes max_gap);

// Text forms shared by the document and context formats.
Instant parse_instant(std::string_view iso);           // YYYY-MM-DD[THH:MM[:SS]]
std::string format_instant(Instant t);
Minutes parse_time_of_day(std::string_view hhmm);      // HH:MM, 00:00..24:00
std::string format_time_of_day(Minutes m);
DaySet parse_days(std::string_view text);              // mon-fri, sat+sun, mon
std::string format_days(DaySet days);
Minutes parse_duration(std::string_view text);         // 60min, 2h, 1d
std::string format_window(const TimeWindow& window);   // daily(...) or between(...)

} // namespace olgpp

#endif
