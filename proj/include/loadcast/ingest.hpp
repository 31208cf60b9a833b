#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "loadcast/calendar.hpp"
#include "loadcast/errors.hpp"
#include "loadcast/rng.hpp"
#include "loadcast/series.hpp"
#include "loadcast/textio.hpp"

namespace loadcast {

enum class CsvFormat {
    /// `meter_id,ISO-8601 timestamp,kwh`, header row optional.
    simple,
    /// `meter_id,code,kwh` where code = day-since-epoch * 100 + half-hour
    /// slot 1..48 (the CER trial's day/slot encoding).
    code,
};

enum class GapPolicy { error, linear_fill };

constexpr std::int64_t kDefaultCodeEpochUtc = days_from_civil(2009, 1, 1) * kSecondsPerDay;

struct ParseOptions {
    CsvFormat format = CsvFormat::simple;
    std::int64_t code_epoch_utc = kDefaultCodeEpochUtc;
};

namespace detail {

inline bool looks_like_header(const std::vector<std::string_view>& cols) {
    // A header's numeric columns fail to parse as numbers.
    double x;
    return cols.size() == 3 && !try_parse_double(trim(cols[2]), x);
}

} // namespace detail

/// Parse meter readings row by row. Stops at the first offending line and
/// reports it; never returns a partial result on error.
inline std::vector<MeterReading> parse_readings(std::istream& text, const ParseOptions& opt) {
    std::vector<MeterReading> out;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(text, line)) {
        ++line_no;
        std::string_view row = trim(line);
        if (row.empty()) continue;
        auto cols = split_on(row, ',');
        if (line_no == 1 && detail::looks_like_header(cols)) continue;
        if (cols.size() != 3)
            throw Error(Errc::malformed_row, "expected 3 columns, got " + std::to_string(cols.size()), line_no);

        MeterReading r;
        r.meter_id = std::string(trim(cols[0]));
        if (r.meter_id.empty()) throw Error(Errc::malformed_row, "empty meter id", line_no);

        if (opt.format == CsvFormat::simple) {
            r.utc = parse_iso8601_utc(trim(cols[1]), line_no);
        } else {
            std::int64_t code;
            if (!try_parse_int(trim(cols[1]), code))
                throw Error(Errc::malformed_row, "unparseable day/slot code", line_no);
            const std::int64_t day = code / 100;
            const std::int64_t slot = code % 100;
            if (day < 0 || slot < 1 || slot > 48)
                throw Error(Errc::bad_timestamp, "day/slot code " + std::to_string(code) + " out of range", line_no);
            r.utc = opt.code_epoch_utc + day * kSecondsPerDay + slot * 1800;
        }

        double kwh;
        if (!try_parse_double(trim(cols[2]), kwh) || !std::isfinite(kwh))
            throw Error(Errc::malformed_row, "unparseable energy value", line_no);
        if (kwh < 0) throw Error(Errc::negative_energy, "energy " + fmt_double(kwh) + " < 0", line_no);
        r.energy_kwh = kwh;
        out.push_back(std::move(r));
    }
    return out;
}

/// Build a contiguous LoadSeries for one meter. Reading timestamps mark slot
/// ends, so the series starts one step before the earliest reading. Gaps of
/// at most 4 slots are interpolated under linear_fill.
inline LoadSeries assemble_series(const std::vector<MeterReading>& readings, const std::string& meter_id,
                                  int step_minutes, GapPolicy policy) {
    const std::int64_t step = static_cast<std::int64_t>(step_minutes) * 60;
    std::vector<std::pair<std::int64_t, double>> rows;
    for (const auto& r : readings)
        if (r.meter_id == meter_id) rows.emplace_back(r.utc, r.energy_kwh);
    if (rows.empty()) throw Error(Errc::insufficient_data, "no readings for meter '" + meter_id + "'");

    for (const auto& [ts, kwh] : rows) {
        (void)kwh;
        if (ts % step != 0)
            throw Error(Errc::misaligned_timestamp,
                        format_iso8601_utc(ts) + " not on the " + std::to_string(step_minutes) + "-min grid");
    }
    std::sort(rows.begin(), rows.end());

    const std::int64_t min_ts = rows.front().first;
    const std::int64_t max_ts = rows.back().first;
    const std::size_t n = static_cast<std::size_t>((max_ts - min_ts) / step) + 1;

    std::vector<double> values(n, -1.0);
    std::vector<bool> present(n, false);
    for (const auto& [ts, kwh] : rows) {
        const std::size_t i = static_cast<std::size_t>((ts - min_ts) / step);
        if (present[i]) throw Error(Errc::duplicate_timestamp, format_iso8601_utc(ts), static_cast<std::int64_t>(i));
        present[i] = true;
        values[i] = kwh;
    }

    for (std::size_t i = 0; i < n;) {
        if (present[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && !present[j]) ++j;
        const std::size_t run = j - i;
        if (policy == GapPolicy::error)
            throw Error(Errc::gap, "missing slot", static_cast<std::int64_t>(i));
        if (run > 4)
            throw Error(Errc::gap_too_large, std::to_string(run) + " consecutive slots missing",
                        static_cast<std::int64_t>(i));
        // Neighbors exist: min and max slots are always present.
        const double lo = values[i - 1];
        const double hi = values[j];
        for (std::size_t p = i; p < j; ++p) {
            const double t = static_cast<double>(p - i + 1) / static_cast<double>(run + 1);
            values[p] = lo + (hi - lo) * t;
        }
        i = j;
    }

    LoadSeries s;
    s.label = meter_id;
    s.start = min_ts - step;
    s.step_minutes = step_minutes;
    s.values = std::move(values);
    return s;
}

/// 30-min slots split into two equal 15-min slots; energy is conserved
/// exactly. 15-min input passes through unchanged.
inline LoadSeries resample_to_15min(const LoadSeries& s) {
    if (s.step_minutes == 15) return s;
    if (s.step_minutes != 30)
        throw Error(Errc::unsupported_step, std::to_string(s.step_minutes) + "-min input");
    LoadSeries out;
    out.label = s.label;
    out.start = s.start;
    out.step_minutes = 15;
    out.values.reserve(s.values.size() * 2);
    for (double v : s.values) {
        out.values.push_back(v * 0.5);
        out.values.push_back(v * 0.5);
    }
    return out;
}

struct HouseholdSelection {
    std::vector<std::string> pool; // sorted, deduplicated
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> chosen;
};

/// Deterministic draw of n distinct ids. The pool is sorted (and
/// deduplicated) first, so the selection depends only on the pool as a set.
inline HouseholdSelection select_households(std::vector<std::string> pool, std::size_t n,
                                            std::uint64_t seed) {
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (n > pool.size())
        throw Error(Errc::pool_too_small,
                    "need " + std::to_string(n) + " of " + std::to_string(pool.size()));
    HouseholdSelection sel;
    sel.pool = pool;
    sel.n = n;
    sel.seed = seed;
    Rng rng(mix_seed({seed, pool.size(), n}));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    sel.chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
    return sel;
}

/// Element-wise sum of aligned series, labelled "sum<n>".
inline LoadSeries aggregate(const std::vector<LoadSeries>& series_list) {
    if (series_list.empty()) throw Error(Errc::insufficient_data, "no series to aggregate");
    const LoadSeries& first = series_list.front();
    LoadSeries out;
    out.label = "sum" + std::to_string(series_list.size());
    out.start = first.start;
    out.step_minutes = first.step_minutes;
    out.values.assign(first.values.size(), 0.0);
    for (std::size_t idx = 0; idx < series_list.size(); ++idx) {
        const LoadSeries& s = series_list[idx];
        if (s.start != first.start || s.step_minutes != first.step_minutes ||
            s.values.size() != first.values.size())
            throw Error(Errc::misaligned, "series '" + s.label + "' differs in start/step/length",
                        static_cast<std::int64_t>(idx));
        for (std::size_t i = 0; i < s.values.size(); ++i) out.values[i] += s.values[i];
    }
    return out;
}

/// SIMPLE_CSV writer; timestamps mark slot ends, matching parse_readings.
inline void write_simple_csv(std::ostream& os, const LoadSeries& s) {
    os << "meter_id,timestamp,kwh\n";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        os << s.label << ',' << format_iso8601_utc(s.slot_start(i) + s.step_seconds()) << ','
           << fmt_double(s.values[i]) << '\n';
    }
}

/// Parse + assemble convenience for single-meter SIMPLE_CSV files.
inline LoadSeries read_series_csv(std::istream& in, int step_minutes = 15,
                                  GapPolicy policy = GapPolicy::error) {
    ParseOptions opt;
    auto readings = parse_readings(in, opt);
    if (readings.empty()) throw Error(Errc::insufficient_data, "empty series file");
    return assemble_series(readings, readings.front().meter_id, step_minutes, policy);
}

} // namespace loadcast
