#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "loadcast/calendar.hpp"
#include "loadcast/dataset.hpp"
#include "loadcast/errors.hpp"
#include "loadcast/nn.hpp"
#include "loadcast/series.hpp"

namespace loadcast {

enum class ForecastMode { direct, iterative };

struct ForecastResult {
    std::int64_t origin_utc = 0; // end of the input window
    int step_minutes = 15;
    std::vector<double> values_kwh;
    ForecastMode mode = ForecastMode::direct;
};

/// One forward pass of an h=144 network: normalize, forward, denormalize.
inline ForecastResult predict_direct(const Network& net, std::span<const double> raw_window,
                                     const NormStats& stats, std::int64_t origin_utc = 0) {
    if (net.cfg.horizon != 144)
        throw Error(Errc::mode_mismatch,
                    "direct forecast needs h=144, model has h=" + std::to_string(net.cfg.horizon));
    std::vector<double> z(raw_window.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = normalize_value(raw_window[i], stats);
    ForecastResult r;
    r.origin_utc = origin_utc;
    r.mode = ForecastMode::direct;
    r.values_kwh = denormalize(predict_one(net, z), stats);
    return r;
}

/// h=1 network applied `steps` times; each predicted point is appended to
/// the normalized window and the oldest point dropped.
inline ForecastResult predict_iterative(const Network& net, std::span<const double> raw_window,
                                        const NormStats& stats, int steps,
                                        std::int64_t origin_utc = 0) {
    if (net.cfg.horizon != 1)
        throw Error(Errc::mode_mismatch,
                    "iterative forecast needs h=1, model has h=" + std::to_string(net.cfg.horizon));
    if (steps < 1) throw Error(Errc::invalid_config, "steps must be >= 1");
    std::vector<double> window(raw_window.size());
    for (std::size_t i = 0; i < window.size(); ++i) window[i] = normalize_value(raw_window[i], stats);
    std::vector<double> predicted;
    predicted.reserve(static_cast<std::size_t>(steps));
    for (int s = 0; s < steps; ++s) {
        const double next = predict_one(net, window)[0];
        predicted.push_back(next);
        window.erase(window.begin());
        window.push_back(next);
    }
    ForecastResult r;
    r.origin_utc = origin_utc;
    r.mode = ForecastMode::iterative;
    r.values_kwh = denormalize(predicted, stats);
    return r;
}

enum class DayType { weekday = 0, saturday = 1, sunday = 2 };

inline DayType day_type_utc(std::int64_t utc_seconds) {
    const int wd = weekday_utc(utc_seconds);
    if (wd == 6) return DayType::saturday;
    if (wd == 7) return DayType::sunday;
    return DayType::weekday;
}

/// Calendar baseline: mean kWh per (day type, quarter-hour of day).
struct StandardLoadProfile {
    std::array<std::array<double, 96>, 3> profile{};

    double at(DayType d, int quarter) const {
        return profile[static_cast<std::size_t>(d)][static_cast<std::size_t>(quarter)];
    }
};

/// Group-by mean over a 15-min series; needs at least 4 full weeks so every
/// (day type, slot) cell is populated.
inline StandardLoadProfile build_slp(const LoadSeries& series) {
    if (series.step_minutes != 15)
        throw Error(Errc::unsupported_step, "profile needs a 15-min series");
    if (series.values.size() < 28u * 96u)
        throw Error(Errc::insufficient_data, "need at least 4 weeks of training data");
    std::array<std::array<double, 96>, 3> sum{};
    std::array<std::array<std::int64_t, 96>, 3> count{};
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const std::int64_t t = series.slot_start(i);
        const auto d = static_cast<std::size_t>(day_type_utc(t));
        const auto q = static_cast<std::size_t>(seconds_into_day(t) / 900);
        sum[d][q] += series.values[i];
        count[d][q] += 1;
    }
    StandardLoadProfile slp;
    for (std::size_t d = 0; d < 3; ++d)
        for (std::size_t q = 0; q < 96; ++q) {
            if (count[d][q] == 0)
                throw Error(Errc::insufficient_data, "empty profile cell: day type " +
                                                         std::to_string(d) + ", slot " +
                                                         std::to_string(q));
            slp.profile[d][q] = sum[d][q] / static_cast<double>(count[d][q]);
        }
    return slp;
}

/// Profile values for the `steps` slots following origin, rolling over day
/// types at midnight.
inline std::vector<double> slp_forecast_values(const StandardLoadProfile& slp,
                                               std::int64_t origin_utc, int steps) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int s = 0; s < steps; ++s) {
        const std::int64_t t = origin_utc + static_cast<std::int64_t>(s) * 900;
        const auto q = static_cast<int>(seconds_into_day(t) / 900);
        out.push_back(slp.at(day_type_utc(t), q));
    }
    return out;
}

inline ForecastResult slp_forecast(const StandardLoadProfile& slp, std::int64_t origin_utc,
                                   int steps) {
    ForecastResult r;
    r.origin_utc = origin_utc;
    r.mode = ForecastMode::direct;
    r.values_kwh = slp_forecast_values(slp, origin_utc, steps);
    return r;
}

/// Mean squared error in physical units over all validation windows. The
/// forecaster sees the raw (denormalized) window and the origin instant and
/// must return `horizon` physical values.
template <typename Forecaster>
inline double evaluate(Forecaster&& forecaster, const WindowedDataset& val, const NormStats& stats,
                       std::int64_t series_start_utc, int step_minutes = 15) {
    if (val.size() == 0) throw Error(Errc::too_few_windows, "empty validation set");
    const std::int64_t step = static_cast<std::int64_t>(step_minutes) * 60;
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < val.size(); ++i) {
        const std::vector<double> raw_window = denormalize(val.inputs.row(i), stats);
        const std::vector<double> raw_target = denormalize(val.targets.row(i), stats);
        const std::int64_t origin =
            series_start_utc + (val.origin_indices[i] + val.window_len) * step;
        const std::vector<double> pred = forecaster(std::span<const double>(raw_window), origin);
        if (pred.size() != raw_target.size())
            throw Error(Errc::shape_mismatch, "forecaster returned " + std::to_string(pred.size()) +
                                                  " values, expected " +
                                                  std::to_string(raw_target.size()));
        for (std::size_t j = 0; j < pred.size(); ++j) {
            const double d = pred[j] - raw_target[j];
            acc += d * d;
        }
        count += pred.size();
    }
    return acc / static_cast<double>(count);
}

} // namespace loadcast
