#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "loadcast/errors.hpp"

// UTC-only calendar helpers. Timestamps are int64 seconds since the Unix
// epoch; the civil conversions use the days algorithm from Howard Hinnant's
// chrono notes, valid far beyond any smart-meter horizon.

namespace loadcast {

constexpr std::int64_t kSecondsPerDay = 86400;

/// Days since 1970-01-01 for a civil date (proleptic Gregorian).
constexpr std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    int year;
    int month;
    int day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

/// ISO weekday, 1 = Monday ... 7 = Sunday. Day 0 (1970-01-01) was a Thursday.
constexpr int weekday_from_days(std::int64_t z) {
    return static_cast<int>(((z % 7) + 10) % 7) + 1;
}

constexpr int weekday_utc(std::int64_t utc_seconds) {
    std::int64_t day = utc_seconds / kSecondsPerDay;
    if (utc_seconds < 0 && utc_seconds % kSecondsPerDay != 0) --day;
    return weekday_from_days(day);
}

/// Seconds elapsed since the UTC midnight of the instant's own day.
constexpr std::int64_t seconds_into_day(std::int64_t utc_seconds) {
    std::int64_t r = utc_seconds % kSecondsPerDay;
    if (r < 0) r += kSecondsPerDay;
    return r;
}

namespace detail {
inline bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, long& out) {
    long v = 0;
    if (pos + len > s.size()) return false;
    for (std::size_t i = pos; i < pos + len; ++i) {
        char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}
} // namespace detail

/// Parse `YYYY-MM-DD` into UTC midnight seconds. Throws Error(bad_timestamp).
inline std::int64_t parse_date_utc(std::string_view s, std::int64_t line = -1) {
    long y, m, d;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
        !detail::parse_fixed_uint(s, 0, 4, y) || !detail::parse_fixed_uint(s, 5, 2, m) ||
        !detail::parse_fixed_uint(s, 8, 2, d) || m < 1 || m > 12 || d < 1 || d > 31) {
        throw Error(Errc::bad_timestamp, "expected YYYY-MM-DD, got '" + std::string(s) + "'", line);
    }
    return days_from_civil(static_cast<int>(y), static_cast<int>(m), static_cast<int>(d)) * kSecondsPerDay;
}

/// Parse `YYYY-MM-DDTHH:MM:SS` (space accepted for 'T', trailing 'Z'
/// optional) into UTC seconds. Throws Error(bad_timestamp).
inline std::int64_t parse_iso8601_utc(std::string_view s, std::int64_t line = -1) {
    std::string_view body = s;
    if (!body.empty() && (body.back() == 'Z' || body.back() == 'z')) body.remove_suffix(1);
    long y, mo, d, h, mi, sec;
    bool ok = body.size() == 19 && (body[10] == 'T' || body[10] == ' ') && body[4] == '-' &&
              body[7] == '-' && body[13] == ':' && body[16] == ':' &&
              detail::parse_fixed_uint(body, 0, 4, y) && detail::parse_fixed_uint(body, 5, 2, mo) &&
              detail::parse_fixed_uint(body, 8, 2, d) && detail::parse_fixed_uint(body, 11, 2, h) &&
              detail::parse_fixed_uint(body, 14, 2, mi) && detail::parse_fixed_uint(body, 17, 2, sec);
    if (!ok || mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60) {
        throw Error(Errc::bad_timestamp, "expected ISO-8601 UTC instant, got '" + std::string(s) + "'", line);
    }
    return days_from_civil(static_cast<int>(y), static_cast<int>(mo), static_cast<int>(d)) * kSecondsPerDay +
           h * 3600 + mi * 60 + sec;
}

inline std::string format_iso8601_utc(std::int64_t utc_seconds) {
    std::int64_t day = utc_seconds / kSecondsPerDay;
    std::int64_t rem = utc_seconds % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        --day;
    }
    const CivilDate cd = civil_from_days(day);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", cd.year, cd.month, cd.day,
                  static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

} // namespace loadcast
