#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace loadcast {

/// Error categories raised across the library. The CLI maps these onto
/// exit codes: data problems -> 3, numeric failures -> 4.
enum class Errc {
    malformed_row,
    negative_energy,
    bad_timestamp,
    duplicate_timestamp,
    misaligned_timestamp,
    gap,
    gap_too_large,
    unsupported_step,
    pool_too_small,
    misaligned,
    shape_mismatch,
    kernel_too_long,
    invalid_config,
    constant_series,
    series_too_short,
    too_few_windows,
    non_finite_gradient,
    non_finite_loss,
    trace_mismatch,
    mode_mismatch,
    insufficient_data,
    all_failed_row,
    io_error,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::malformed_row: return "malformed_row";
        case Errc::negative_energy: return "negative_energy";
        case Errc::bad_timestamp: return "bad_timestamp";
        case Errc::duplicate_timestamp: return "duplicate_timestamp";
        case Errc::misaligned_timestamp: return "misaligned_timestamp";
        case Errc::gap: return "gap";
        case Errc::gap_too_large: return "gap_too_large";
        case Errc::unsupported_step: return "unsupported_step";
        case Errc::pool_too_small: return "pool_too_small";
        case Errc::misaligned: return "misaligned";
        case Errc::shape_mismatch: return "shape_mismatch";
        case Errc::kernel_too_long: return "kernel_too_long";
        case Errc::invalid_config: return "invalid_config";
        case Errc::constant_series: return "constant_series";
        case Errc::series_too_short: return "series_too_short";
        case Errc::too_few_windows: return "too_few_windows";
        case Errc::non_finite_gradient: return "non_finite_gradient";
        case Errc::non_finite_loss: return "non_finite_loss";
        case Errc::trace_mismatch: return "trace_mismatch";
        case Errc::mode_mismatch: return "mode_mismatch";
        case Errc::insufficient_data: return "insufficient_data";
        case Errc::all_failed_row: return "all_failed_row";
        case Errc::io_error: return "io_error";
    }
    return "unknown";
}

/// Whether an error class counts as a numeric failure (CLI exit 4) rather
/// than a data/usage problem (CLI exit 3).
inline bool is_numeric_error(Errc c) {
    return c == Errc::non_finite_gradient || c == Errc::non_finite_loss;
}

class Error : public std::runtime_error {
public:
    /// `where` carries the offending line number or slot position when the
    /// operation has one; -1 otherwise.
    Error(Errc code, const std::string& msg, std::int64_t where = -1)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg +
                             (where >= 0 ? " (at " + std::to_string(where) + ")" : "")),
          code_(code),
          where_(where) {}

    Errc code() const noexcept { return code_; }
    std::int64_t where() const noexcept { return where_; }

private:
    Errc code_;
    std::int64_t where_;
};

} // namespace loadcast
