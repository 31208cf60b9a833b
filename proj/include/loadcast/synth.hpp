#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "loadcast/calendar.hpp"
#include "loadcast/errors.hpp"
#include "loadcast/rng.hpp"
#include "loadcast/series.hpp"

// Synthetic household loads: volatile singles whose aggregates smooth out.
// Each household is standby load + morning/evening activity bumps (centers
// jittered per household) + random appliance spikes + noise. A shared AR(1)
// day-level factor modulates the bumps so consecutive days resemble each
// other, as real consumption does; forecasters can exploit that persistence
// while a pure calendar profile cannot.

namespace loadcast {

struct SynthConfig {
    int n_households = 40;
    int days = 28;
    std::uint64_t seed = 1;
    double base_kw = 0.12;
    double morning_peak_kw = 0.4;
    double evening_peak_kw = 0.8;
    double spike_rate_per_day = 6.0;
    double spike_kw = 1.5;
    double noise_sd_kw = 0.05;
    double weekend_scale = 1.15;
    /// Relative sd of the shared day-level factor and its lag-1 correlation.
    double day_level_sd = 0.3;
    double day_level_rho = 0.85;

    void validate() const {
        if (n_households < 1 || days < 2 || base_kw <= 0 || morning_peak_kw < 0 ||
            evening_peak_kw < 0 || spike_rate_per_day < 0 || spike_kw <= 0 || noise_sd_kw < 0 ||
            weekend_scale <= 0 || day_level_sd < 0 || day_level_rho < 0 || day_level_rho >= 1)
            throw Error(Errc::invalid_config, "bad synth config");
    }
};

/// All synthetic series start on this Monday midnight.
constexpr std::int64_t kSynthStartUtc = days_from_civil(2009, 7, 13) * kSecondsPerDay;

constexpr int kSlotsPerDay = 96;

namespace detail {

// Shared across the fleet; deterministic in config.seed alone.
inline std::vector<double> day_level_factors(const SynthConfig& cfg) {
    Rng rng(mix_seed({cfg.seed, 0xda71e7e1ULL}));
    std::vector<double> level(static_cast<std::size_t>(cfg.days));
    const double rho = cfg.day_level_rho;
    double z = rng.normal();
    for (int d = 0; d < cfg.days; ++d) {
        if (d > 0) z = rho * z + std::sqrt(1.0 - rho * rho) * rng.normal();
        level[static_cast<std::size_t>(d)] = std::max(0.0, 1.0 + cfg.day_level_sd * z);
    }
    return level;
}

inline double gauss_bump(double hour, double center, double sigma) {
    const double t = (hour - center) / sigma;
    return std::exp(-0.5 * t * t);
}

} // namespace detail

/// One household's 15-min series, length days*96, kWh per slot. Fully
/// determined by (config, index).
inline LoadSeries generate_household(const SynthConfig& cfg, int index) {
    cfg.validate();
    if (index < 0 || index >= cfg.n_households)
        throw Error(Errc::invalid_config, "household index out of range");

    const std::vector<double> level = detail::day_level_factors(cfg);
    Rng rng(mix_seed({cfg.seed, 0x5e1fULL, static_cast<std::uint64_t>(index)}));

    const double morning_center = 7.5 + rng.uniform(-0.75, 0.75);
    const double evening_center = 19.0 + rng.uniform(-1.0, 1.0);
    const double morning_sigma = 1.25;
    const double evening_sigma = 2.0;

    const std::size_t n_slots = static_cast<std::size_t>(cfg.days) * kSlotsPerDay;
    const double spike_start_p = cfg.spike_rate_per_day / kSlotsPerDay;

    LoadSeries s;
    s.label = "household_" + std::to_string(index);
    s.start = kSynthStartUtc;
    s.step_minutes = 15;
    s.values.resize(n_slots);

    int spike_left = 0;
    for (std::size_t i = 0; i < n_slots; ++i) {
        const int day = static_cast<int>(i / kSlotsPerDay);
        const int slot = static_cast<int>(i % kSlotsPerDay);
        const double hour = (slot + 0.5) * 0.25;
        const int wd = weekday_from_days(kSynthStartUtc / kSecondsPerDay + day);
        const bool weekend = wd >= 6;

        double bump = cfg.morning_peak_kw * detail::gauss_bump(hour, morning_center, morning_sigma) +
                      cfg.evening_peak_kw * detail::gauss_bump(hour, evening_center, evening_sigma);
        bump *= level[static_cast<std::size_t>(day)];
        if (weekend) bump *= cfg.weekend_scale;

        if (rng.bernoulli(spike_start_p))
            spike_left += 1 + static_cast<int>(rng.below(4)); // 1..4 slots per event, events stack
        double spike = 0.0;
        if (spike_left > 0) {
            spike = cfg.spike_kw;
            --spike_left;
        }

        const double noise = cfg.noise_sd_kw * rng.normal();
        const double kw = std::max(0.0, cfg.base_kw + bump + spike + noise);
        s.values[i] = kw * 0.25; // kW over a quarter hour
    }
    return s;
}

inline std::vector<LoadSeries> generate_fleet(const SynthConfig& cfg) {
    cfg.validate();
    std::vector<LoadSeries> fleet;
    fleet.reserve(static_cast<std::size_t>(cfg.n_households));
    for (int i = 0; i < cfg.n_households; ++i) fleet.push_back(generate_household(cfg, i));
    return fleet;
}

/// sd/mean of a series; the volatility measure behind the smoothing checks.
inline double coefficient_of_variation(const std::vector<double>& xs) {
    if (xs.empty()) throw Error(Errc::insufficient_data, "empty series");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    if (mean == 0.0) throw Error(Errc::constant_series, "zero-mean series has no CV");
    return std::sqrt(var) / mean;
}

} // namespace loadcast
