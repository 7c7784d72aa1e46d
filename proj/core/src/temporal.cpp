#include "olgpp/temporal.hpp"

#include "olgpp/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <vector>

namespace olgpp {

namespace {

using namespace std::chrono;

constexpr Minutes kDay{24 * 60};

constexpr std::array<std::string_view, 7> kDayNames = {"sun", "mon", "tue", "wed", "thu", "fri", "sat"};

int read_int(std::string_view text, std::string_view what) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::InvalidValue, "bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return out;
}

std::string two(unsigned v) {
    std::string s = std::to_string(v);
    return s.size() < 2 ? "0" + s : s;
}

weekday parse_day_name(std::string_view name) {
    std::string lower;
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower.size() > 3) lower.resize(3);
    for (unsigned i = 0; i < kDayNames.size(); ++i) {
        if (kDayNames[i] == lower) return weekday{i};
    }
    throw Error(ErrorCode::InvalidValue, "unknown weekday '" + std::string(name) + "'");
}

} // namespace

TimeWindow TimeWindow::absolute(Instant start, Instant end) {
    if (!(start < end)) {
        throw Error(ErrorCode::InvalidWindow, "absolute window requires start < end");
    }
    TimeWindow w;
    w.kind_ = Kind::absolute;
    w.start_ = start;
    w.end_ = end;
    return w;
}

TimeWindow TimeWindow::daily(Minutes start_of_day, Minutes end_of_day, DaySet days) {
    if (start_of_day < Minutes{0} || end_of_day > kDay || !(start_of_day < end_of_day)) {
        throw Error(ErrorCode::InvalidWindow, "daily window requires 00:00 <= start < end <= 24:00");
    }
    if (days.empty()) {
        throw Error(ErrorCode::InvalidWindow, "daily window requires at least one weekday");
    }
    TimeWindow w;
    w.kind_ = Kind::daily_recurring;
    w.start_of_day_ = start_of_day;
    w.end_of_day_ = end_of_day;
    w.days_ = days;
    return w;
}

DurationLimit::DurationLimit(Minutes limit) : limit_(limit) {
    if (limit <= Minutes{0}) {
        throw Error(ErrorCode::InvalidValue, "duration limit must be positive");
    }
}

bool in_window(Instant t, const TimeWindow& window) {
    if (window.kind() == TimeWindow::Kind::absolute) {
        return window.start() <= t && t < window.end();
    }
    auto day = floor<days>(t);
    if (!window.days().contains(weekday{day})) return false;
    auto tod = duration_cast<Minutes>(t - day);
    // Seconds within the end minute are past the window.
    auto tod_exact = t - day;
    return window.start_of_day() <= tod && tod_exact < window.end_of_day();
}

bool duration_exceeds(Instant start, Instant end, DurationLimit limit) {
    if (end < start) {
        throw Error(ErrorCode::NegativeInterval, "interval end precedes start");
    }
    return (end - start) > limit.limit();
}

bool sequence_ok(Instant t1, Instant t2, Minutes max_gap) {
    return t2 >= t1 && (t2 - t1) <= max_gap;
}

namespace {

bool daily_overlaps_absolute(const TimeWindow& daily, const TimeWindow& abs) {
    // Occurrences on the first eight calendar days cover every weekday; any
    // occurrence further out is fully inside the absolute window anyway.
    auto first = floor<days>(abs.start());
    auto last = floor<days>(abs.end());
    for (auto day = first; day <= last && day <= first + days{8}; day += days{1}) {
        if (!daily.days().contains(weekday{day})) continue;
        Instant occ_start = day + daily.start_of_day();
        Instant occ_end = day + daily.end_of_day();
        if (std::max(occ_start, abs.start()) < std::min(occ_end, abs.end())) return true;
    }
    return false;
}

} // namespace

bool overlaps(const TimeWindow& a, const TimeWindow& b) {
    using K = TimeWindow::Kind;
    if (a.kind() == K::absolute && b.kind() == K::absolute) {
        return std::max(a.start(), b.start()) < std::min(a.end(), b.end());
    }
    if (a.kind() == K::daily_recurring && b.kind() == K::daily_recurring) {
        if (a.days().intersect(b.days()).empty()) return false;
        return std::max(a.start_of_day(), b.start_of_day()) < std::min(a.end_of_day(), b.end_of_day());
    }
    return a.kind() == K::daily_recurring ? daily_overlaps_absolute(a, b) : daily_overlaps_absolute(b, a);
}

Instant parse_instant(std::string_view iso) {
    // YYYY-MM-DD[THH:MM[:SS]]
    auto fail = [&] { return Error(ErrorCode::InvalidValue, "bad ISO-8601 instant '" + std::string(iso) + "'"); };
    if (iso.size() < 10 || iso[4] != '-' || iso[7] != '-') throw fail();
    int y = read_int(iso.substr(0, 4), "year");
    int mo = read_int(iso.substr(5, 2), "month");
    int d = read_int(iso.substr(8, 2), "day");
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw fail();
    Instant t = local_days{ymd};
    if (iso.size() == 10) return t;
    if (iso[10] != 'T' && iso[10] != ' ') throw fail();
    auto rest = iso.substr(11);
    if (rest.size() != 5 && rest.size() != 8) throw fail();
    if (rest[2] != ':') throw fail();
    int hh = read_int(rest.substr(0, 2), "hour");
    int mm = read_int(rest.substr(3, 2), "minute");
    int ss = 0;
    if (rest.size() == 8) {
        if (rest[5] != ':') throw fail();
        ss = read_int(rest.substr(6, 2), "second");
    }
    if (hh > 23 || mm > 59 || ss > 59) throw fail();
    return t + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_instant(Instant t) {
    auto day = floor<days>(t);
    year_month_day ymd{day};
    hh_mm_ss<seconds> hms{t - day};
    std::string out = std::to_string(static_cast<int>(ymd.year())) + "-" +
                      two(static_cast<unsigned>(ymd.month())) + "-" + two(static_cast<unsigned>(ymd.day())) +
                      "T" + two(static_cast<unsigned>(hms.hours().count())) + ":" +
                      two(static_cast<unsigned>(hms.minutes().count()));
    if (hms.seconds().count() != 0) out += ":" + two(static_cast<unsigned>(hms.seconds().count()));
    return out;
}

Minutes parse_time_of_day(std::string_view hhmm) {
    auto colon = hhmm.find(':');
    if (colon == std::string_view::npos) {
        throw Error(ErrorCode::InvalidValue, "bad time of day '" + std::string(hhmm) + "'");
    }
    int hh = read_int(hhmm.substr(0, colon), "hour");
    int mm = read_int(hhmm.substr(colon + 1), "minute");
    if (hh < 0 || mm < 0 || mm > 59 || hh > 24 || (hh == 24 && mm != 0)) {
        throw Error(ErrorCode::InvalidValue, "time of day out of range '" + std::string(hhmm) + "'");
    }
    return Minutes{hh * 60 + mm};
}

std::string format_time_of_day(Minutes m) {
    auto count = static_cast<unsigned>(m.count());
    return two(count / 60) + ":" + two(count % 60);
}

DaySet parse_days(std::string_view text) {
    DaySet out = DaySet::none();
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto next = text.find('+', pos);
        auto part = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        auto dash = part.find('-');
        if (dash != std::string_view::npos) {
            auto from = parse_day_name(part.substr(0, dash));
            auto to = parse_day_name(part.substr(dash + 1));
            for (auto d = from;; ++d) {
                out = out.with(d);
                if (d == to) break;
            }
        } else {
            out = out.with(parse_day_name(part));
        }
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

std::string format_days(DaySet days) {
    // Monday-first listing reads naturally.
    std::string out;
    for (unsigned i = 1; i <= 7; ++i) {
        weekday d{i % 7};
        if (!days.contains(d)) continue;
        if (!out.empty()) out += '+';
        out += kDayNames[d.c_encoding()];
    }
    return out;
}

Minutes parse_duration(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == 0) throw Error(ErrorCode::InvalidValue, "bad duration '" + std::string(text) + "'");
    int n = read_int(text.substr(0, i), "duration");
    auto unit = text.substr(i);
    if (unit == "min" || unit == "m" || unit.empty()) return Minutes{n};
    if (unit == "h") return Minutes{n * 60};
    if (unit == "d") return Minutes{n * 60 * 24};
    throw Error(ErrorCode::InvalidValue, "unknown duration unit '" + std::string(unit) + "'");
}

std::string format_window(const TimeWindow& window) {
    if (window.kind() == TimeWindow::Kind::absolute) {
        return "between(" + format_instant(window.start()) + "," + format_instant(window.end()) + ")";
    }
    std::string out = "daily(" + format_time_of_day(window.start_of_day()) + "," +
                      format_time_of_day(window.end_of_day());
    if (!window.days().is_all()) out += "," + format_days(window.days());
    return out + ")";
}

} // namespace olgpp
