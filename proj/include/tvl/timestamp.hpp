// timestamp.hpp - second-precision local civil time ("YYYY-MM-DD HH:MM:SS")
//
// No timezone handling: values are naive civil timestamps, matching the
// GeoLife recording convention. Stored as seconds relative to
// 1970-01-01 00:00:00.
#ifndef TVL_TIMESTAMP_HPP
#define TVL_TIMESTAMP_HPP

#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "tvl/common.hpp"

namespace tvl {

struct CivilTime {
    int year;
    int month;  // 1..12
    int day;    // 1..31
    int hour;   // 0..23
    int minute; // 0..59
    int second; // 0..59
};

namespace detail {

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
inline int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);              // [0, 399]
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;             // [0, 146096]
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

inline void civil_from_days(int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yy = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

inline bool is_leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

inline int days_in_month(int y, int m) {
    static constexpr int lut[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lut[m - 1];
}

}  // namespace detail

struct Timestamp {
    int64_t sec = 0;  // seconds since 1970-01-01 00:00:00 civil

    auto operator<=>(const Timestamp&) const = default;

    static Timestamp from_civil(const CivilTime& c) {
        int64_t days = detail::days_from_civil(c.year, c.month, c.day);
        return Timestamp{days * 86400 + c.hour * 3600 + c.minute * 60 + c.second};
    }

    CivilTime civil() const {
        int64_t days = sec / 86400;
        int64_t rem = sec % 86400;
        if (rem < 0) { rem += 86400; --days; }
        CivilTime c{};
        detail::civil_from_days(days, c.year, c.month, c.day);
        c.hour = static_cast<int>(rem / 3600);
        c.minute = static_cast<int>((rem % 3600) / 60);
        c.second = static_cast<int>(rem % 60);
        return c;
    }
};

enum class BinUnit { Hour, Day, Month, Year };

inline const char* bin_unit_keyword(BinUnit u) {
    switch (u) {
        case BinUnit::Hour: return "HOUR";
        case BinUnit::Day: return "DAY";
        case BinUnit::Month: return "MONTH";
        case BinUnit::Year: return "YEAR";
    }
    return "";
}

inline std::optional<BinUnit> bin_unit_from_keyword(std::string_view kw) {
    if (str::iequals(kw, "HOUR")) return BinUnit::Hour;
    if (str::iequals(kw, "DAY")) return BinUnit::Day;
    if (str::iequals(kw, "MONTH")) return BinUnit::Month;
    if (str::iequals(kw, "YEAR")) return BinUnit::Year;
    return std::nullopt;
}

// Floor a timestamp to the start of its hour/day/month/year.
inline Timestamp truncate(Timestamp t, BinUnit unit) {
    CivilTime c = t.civil();
    switch (unit) {
        case BinUnit::Hour: c.minute = 0; c.second = 0; break;
        case BinUnit::Day: c.hour = 0; c.minute = 0; c.second = 0; break;
        case BinUnit::Month: c.day = 1; c.hour = 0; c.minute = 0; c.second = 0; break;
        case BinUnit::Year: c.month = 1; c.day = 1; c.hour = 0; c.minute = 0; c.second = 0; break;
    }
    return Timestamp::from_civil(c);
}

inline std::string format_timestamp(Timestamp t) {
    CivilTime c = t.civil();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:%02d:%02d",
                  c.year, c.month, c.day, c.hour, c.minute, c.second);
    return buf;
}

// Strict "YYYY-MM-DD HH:MM:SS" parse; rejects out-of-range fields.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
    if (s.size() != 19) return std::nullopt;
    auto digits = [&](size_t pos, size_t n, int& out) {
        int v = 0;
        for (size_t i = 0; i < n; ++i) {
            char c = s[pos + i];
            if (c < '0' || c > '9') return false;
            v = v * 10 + (c - '0');
        }
        out = v;
        return true;
    };
    CivilTime c{};
    if (!digits(0, 4, c.year) || s[4] != '-' || !digits(5, 2, c.month) || s[7] != '-' ||
        !digits(8, 2, c.day) || s[10] != ' ' || !digits(11, 2, c.hour) || s[13] != ':' ||
        !digits(14, 2, c.minute) || s[16] != ':' || !digits(17, 2, c.second))
        return std::nullopt;
    if (c.month < 1 || c.month > 12) return std::nullopt;
    if (c.day < 1 || c.day > detail::days_in_month(c.year, c.month)) return std::nullopt;
    if (c.hour > 23 || c.minute > 59 || c.second > 59) return std::nullopt;
    return Timestamp::from_civil(c);
}

}  // namespace tvl

#endif  // TVL_TIMESTAMP_HPP
