#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loadcast/calendar.hpp"
#include "loadcast/errors.hpp"

namespace loadcast {

/// One meter record: energy consumed in the slot *ending* at `utc`.
struct MeterReading {
    std::string meter_id;
    std::int64_t utc = 0;
    double energy_kwh = 0.0;
};

/// Regularly sampled energy series. `start` is the beginning of the first
/// slot; values[i] covers [start + i*step, start + (i+1)*step), in kWh.
struct LoadSeries {
    std::string label;
    std::int64_t start = 0;
    int step_minutes = 15;
    std::vector<double> values;

    std::int64_t step_seconds() const { return static_cast<std::int64_t>(step_minutes) * 60; }
    std::int64_t slot_start(std::size_t i) const { return start + static_cast<std::int64_t>(i) * step_seconds(); }
    /// Instant just after the last slot.
    std::int64_t end() const { return slot_start(values.size()); }
};

} // namespace loadcast
