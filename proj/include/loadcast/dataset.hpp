#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "loadcast/errors.hpp"
#include "loadcast/numerics.hpp"
#include "loadcast/rng.hpp"
#include "loadcast/series.hpp"

// Windows a load series into normalized (input, horizon) pairs with a
// chronological train/validation split. Normalization statistics come from
// the training region only; the validation slots never touch them.

namespace loadcast {

struct NormStats {
    double mean = 0.0;
    double sd = 1.0;
};

inline double normalize_value(double x, const NormStats& s) { return (x - s.mean) / s.sd; }
inline double denormalize_value(double z, const NormStats& s) { return z * s.sd + s.mean; }

inline std::vector<double> denormalize(std::span<const double> zs, const NormStats& s) {
    std::vector<double> out(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) out[i] = denormalize_value(zs[i], s);
    return out;
}

/// Mean and population standard deviation of a slice.
inline NormStats compute_stats(std::span<const double> slice) {
    if (slice.size() < 2) throw Error(Errc::series_too_short, "need at least 2 values for stats");
    double mean = 0.0;
    for (double x : slice) mean += x;
    mean /= static_cast<double>(slice.size());
    double var = 0.0;
    for (double x : slice) var += (x - mean) * (x - mean);
    var /= static_cast<double>(slice.size());
    if (var == 0.0) throw Error(Errc::constant_series, "constant slice has no scale");
    return {mean, std::sqrt(var)};
}

struct WindowedDataset {
    Mat2 inputs;  // N x W, normalized
    Mat2 targets; // N x h, normalized
    NormStats stats;
    int window_len = 0;
    int horizon = 0;
    std::vector<std::int64_t> origin_indices; // window start slot in the source series

    std::size_t size() const { return inputs.rows; }
};

/// Stride-1 windows over the whole series, z-scored with the given stats.
/// N = len - W - h + 1.
inline WindowedDataset make_windows(const LoadSeries& series, int W, int h, const NormStats& stats) {
    if (W < 1 || h < 1) throw Error(Errc::invalid_config, "W and h must be positive");
    const std::int64_t len = static_cast<std::int64_t>(series.values.size());
    const std::int64_t n = len - W - h + 1;
    if (n < 1)
        throw Error(Errc::series_too_short, "len " + std::to_string(len) + " < W+h = " +
                                                std::to_string(W + h));
    WindowedDataset ds;
    ds.stats = stats;
    ds.window_len = W;
    ds.horizon = h;
    ds.inputs = Mat2(static_cast<std::size_t>(n), static_cast<std::size_t>(W));
    ds.targets = Mat2(static_cast<std::size_t>(n), static_cast<std::size_t>(h));
    ds.origin_indices.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        ds.origin_indices[static_cast<std::size_t>(i)] = i;
        double* in_row = ds.inputs.row(static_cast<std::size_t>(i)).data();
        double* tg_row = ds.targets.row(static_cast<std::size_t>(i)).data();
        for (int j = 0; j < W; ++j)
            in_row[j] = normalize_value(series.values[static_cast<std::size_t>(i + j)], stats);
        for (int j = 0; j < h; ++j)
            tg_row[j] = normalize_value(series.values[static_cast<std::size_t>(i + W + j)], stats);
    }
    return ds;
}

struct SplitSpec {
    double val_fraction = 0.2;
};

namespace detail {

inline WindowedDataset take_rows(const WindowedDataset& ds, std::size_t begin, std::size_t count) {
    WindowedDataset out;
    out.stats = ds.stats;
    out.window_len = ds.window_len;
    out.horizon = ds.horizon;
    out.inputs = Mat2(count, ds.inputs.cols);
    out.targets = Mat2(count, ds.targets.cols);
    out.origin_indices.assign(ds.origin_indices.begin() + static_cast<std::ptrdiff_t>(begin),
                              ds.origin_indices.begin() + static_cast<std::ptrdiff_t>(begin + count));
    std::copy_n(ds.inputs.data.begin() + static_cast<std::ptrdiff_t>(begin * ds.inputs.cols),
                count * ds.inputs.cols, out.inputs.data.begin());
    std::copy_n(ds.targets.data.begin() + static_cast<std::ptrdiff_t>(begin * ds.targets.cols),
                count * ds.targets.cols, out.targets.data.begin());
    return out;
}

} // namespace detail

/// Number of validation windows for a dataset of n windows.
inline std::size_t val_window_count(std::size_t n, const SplitSpec& spec) {
    if (!(spec.val_fraction > 0.0 && spec.val_fraction < 1.0))
        throw Error(Errc::invalid_config, "val_fraction must lie in (0,1)");
    const auto n_val = static_cast<std::size_t>(
        std::ceil(spec.val_fraction * static_cast<double>(n)));
    return n_val;
}

/// Chronological split: the last ceil(val_fraction*N) windows by origin go
/// to validation.
inline std::pair<WindowedDataset, WindowedDataset> split(const WindowedDataset& ds,
                                                         const SplitSpec& spec) {
    const std::size_t n = ds.size();
    if (n < 2) throw Error(Errc::too_few_windows, "need at least 2 windows to split");
    const std::size_t n_val = val_window_count(n, spec);
    if (n_val == 0 || n_val >= n) throw Error(Errc::too_few_windows, "split leaves an empty side");
    const std::size_t n_train = n - n_val;
    return {detail::take_rows(ds, 0, n_train), detail::take_rows(ds, n_train, n_val)};
}

/// Seeded permutation of 0..n-1 chunked into batches; the last batch may be
/// short. The permutation depends on (base_seed, epoch).
inline std::vector<std::vector<std::size_t>> batches(std::size_t n, int batch_size,
                                                     std::uint64_t base_seed, int epoch) {
    if (batch_size < 1) throw Error(Errc::invalid_config, "batch_size must be >= 1");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(mix_seed({base_seed, 0xba7cULL, static_cast<std::uint64_t>(epoch)}));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(perm[i], perm[j]);
    }
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t pos = 0; pos < n; pos += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(n, pos + static_cast<std::size_t>(batch_size));
        out.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                         perm.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

struct PreparedData {
    WindowedDataset train;
    WindowedDataset val;
    NormStats stats;
    /// Slots [0, train_region_len) feed the training windows (inputs and
    /// targets); stats and any baseline profile may use only these.
    std::size_t train_region_len = 0;
};

/// The canonical pipeline: window counts first, stats from the training
/// region only, then windowing and the chronological split.
inline PreparedData prepare_dataset(const LoadSeries& series, int W, int h, const SplitSpec& spec) {
    const std::int64_t len = static_cast<std::int64_t>(series.values.size());
    const std::int64_t n = len - W - h + 1;
    if (n < 2) throw Error(Errc::too_few_windows, "series yields fewer than 2 windows");
    const std::size_t n_val = val_window_count(static_cast<std::size_t>(n), spec);
    const std::size_t n_train = static_cast<std::size_t>(n) - n_val;

    PreparedData out;
    out.train_region_len = n_train + static_cast<std::size_t>(W) + static_cast<std::size_t>(h) - 1;
    out.stats = compute_stats(std::span<const double>(series.values.data(), out.train_region_len));
    WindowedDataset all = make_windows(series, W, h, out.stats);
    auto [train, val] = split(all, spec);
    out.train = std::move(train);
    out.val = std::move(val);
    return out;
}

} // namespace loadcast
