#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "loadcast/dataset.hpp"
#include "loadcast/errors.hpp"
#include "loadcast/nn.hpp"
#include "loadcast/numerics.hpp"
#include "loadcast/train.hpp"

// The three-axis scan: kernel size x filter count x dense size, optionally
// replicated over seeds. Every cell trains an independent network whose seed
// derives from (base seed, k, F, D, replicate seed), so results do not
// depend on scheduling, worker count, or grid extensions.

namespace loadcast {

struct ScanGrid {
    std::vector<int> kernel_sizes{3, 5, 9, 15, 25};
    std::vector<int> filter_counts{2, 4, 8, 16, 32};
    std::vector<int> dense_sizes{1, 2, 4, 6, 8, 16};
    std::vector<std::uint64_t> seeds{1};

    void validate() const {
        if (kernel_sizes.empty() || filter_counts.empty() || dense_sizes.empty() || seeds.empty())
            throw Error(Errc::invalid_config, "scan grid has an empty axis");
        for (int k : kernel_sizes)
            if (k < 1) throw Error(Errc::invalid_config, "kernel size < 1");
        for (int f : filter_counts)
            if (f < 1) throw Error(Errc::invalid_config, "filter count < 1");
        for (int d : dense_sizes)
            if (d < 1) throw Error(Errc::invalid_config, "dense size < 1");
    }

    std::size_t n_cells() const {
        return kernel_sizes.size() * filter_counts.size() * dense_sizes.size() * seeds.size();
    }
};

struct ScanCell {
    int kernel_size = 0;
    int n_filters = 0;
    int dense_size = 0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string fail_reason;
    double val_mse_norm = 0.0;
    double val_mse_phys = 0.0;
    double wall_time_s = 0.0;
    TrainReport report;
};

struct ScanResult {
    ScanGrid grid;
    /// Cells in (k, F, D, seed) nested order, k outermost.
    std::vector<ScanCell> cells;

    std::size_t cell_index(std::size_t ik, std::size_t jf, std::size_t ld, std::size_t s) const {
        return ((ik * grid.filter_counts.size() + jf) * grid.dense_sizes.size() + ld) *
                   grid.seeds.size() +
               s;
    }

    const ScanCell& cell(std::size_t ik, std::size_t jf, std::size_t ld, std::size_t s) const {
        return cells[cell_index(ik, jf, ld, s)];
    }
};

/// Per-cell training seed; independent of grid shape and execution order.
inline std::uint64_t cell_seed(std::uint64_t base_seed, int k, int f, int d,
                               std::uint64_t replicate_seed) {
    return mix_seed({base_seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(f),
                     static_cast<std::uint64_t>(d), replicate_seed});
}

/// Trains one network per grid point. Per-cell failures are recorded, never
/// propagated; `workers` only affects wall time, never results.
inline ScanResult run_scan(const ScanGrid& grid, const NetworkConfig& base_cfg,
                           const TrainingConfig& base_tcfg, const WindowedDataset& train_set,
                           const WindowedDataset& val_set, int workers = 1) {
    grid.validate();
    base_cfg.validate();
    base_tcfg.validate();
    if (workers < 1) workers = 1;

    ScanResult result;
    result.grid = grid;
    result.cells.resize(grid.n_cells());

    struct CellSpec {
        std::size_t slot;
        int k, f, d;
        std::uint64_t replicate_seed;
    };
    std::vector<CellSpec> specs;
    specs.reserve(grid.n_cells());
    for (std::size_t ik = 0; ik < grid.kernel_sizes.size(); ++ik)
        for (std::size_t jf = 0; jf < grid.filter_counts.size(); ++jf)
            for (std::size_t ld = 0; ld < grid.dense_sizes.size(); ++ld)
                for (std::size_t s = 0; s < grid.seeds.size(); ++s)
                    specs.push_back({result.cell_index(ik, jf, ld, s), grid.kernel_sizes[ik],
                                     grid.filter_counts[jf], grid.dense_sizes[ld], grid.seeds[s]});

    const auto run_cell = [&](const CellSpec& spec) {
        ScanCell& cell = result.cells[spec.slot];
        cell.kernel_size = spec.k;
        cell.n_filters = spec.f;
        cell.dense_size = spec.d;
        cell.seed = spec.replicate_seed;
        NetworkConfig cfg = base_cfg;
        cfg.kernel_size = spec.k;
        cfg.n_filters = spec.f;
        cfg.dense_size = spec.d;
        TrainingConfig tcfg = base_tcfg;
        tcfg.seed = cell_seed(base_tcfg.seed, spec.k, spec.f, spec.d, spec.replicate_seed);
        try {
            auto [net, report] = train(cfg, tcfg, train_set, val_set);
            (void)net;
            cell.val_mse_norm = report.final_val_mse_norm;
            cell.val_mse_phys = report.final_val_mse_phys;
            cell.wall_time_s = report.wall_time_s;
            cell.report = std::move(report);
        } catch (const Error& e) {
            cell.failed = true;
            cell.fail_reason = e.what();
        }
    };

    if (workers == 1) {
        for (const auto& spec : specs) run_cell(spec);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= specs.size()) return;
                    run_cell(specs[i]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return result;
}

enum class ScanAxis { kernel, filters, dense };

inline const char* scan_axis_name(ScanAxis a) {
    switch (a) {
        case ScanAxis::kernel: return "kernel_size";
        case ScanAxis::filters: return "n_filters";
        case ScanAxis::dense: return "dense_size";
    }
    return "?";
}

struct Heatmap {
    ScanAxis row_axis;
    ScanAxis col_axis;
    std::vector<int> row_values;
    std::vector<int> col_values;
    Mat2 values; // mean val_mse_norm
};

struct Curve {
    ScanAxis axis;
    std::vector<int> axis_values;
    std::vector<double> means;
};

namespace detail {

inline const std::vector<int>& axis_values(const ScanGrid& g, ScanAxis a) {
    switch (a) {
        case ScanAxis::kernel: return g.kernel_sizes;
        case ScanAxis::filters: return g.filter_counts;
        case ScanAxis::dense: return g.dense_sizes;
    }
    return g.kernel_sizes;
}

inline std::size_t axis_coord(const ScanCell&, ScanAxis a, std::size_t ik, std::size_t jf,
                              std::size_t ld) {
    switch (a) {
        case ScanAxis::kernel: return ik;
        case ScanAxis::filters: return jf;
        case ScanAxis::dense: return ld;
    }
    return 0;
}

} // namespace detail

/// Mean val_mse_norm over the collapsed axis and seeds; FAILED cells are
/// excluded. Throws when every contributor to some entry failed.
inline Heatmap marginal_heatmap(const ScanResult& result, ScanAxis collapse) {
    const ScanGrid& g = result.grid;
    Heatmap hm;
    switch (collapse) {
        case ScanAxis::kernel:
            hm.row_axis = ScanAxis::filters;
            hm.col_axis = ScanAxis::dense;
            break;
        case ScanAxis::filters:
            hm.row_axis = ScanAxis::kernel;
            hm.col_axis = ScanAxis::dense;
            break;
        case ScanAxis::dense:
            hm.row_axis = ScanAxis::kernel;
            hm.col_axis = ScanAxis::filters;
            break;
    }
    hm.row_values = detail::axis_values(g, hm.row_axis);
    hm.col_values = detail::axis_values(g, hm.col_axis);
    hm.values = Mat2(hm.row_values.size(), hm.col_values.size());
    Mat2 counts(hm.row_values.size(), hm.col_values.size());

    for (std::size_t ik = 0; ik < g.kernel_sizes.size(); ++ik)
        for (std::size_t jf = 0; jf < g.filter_counts.size(); ++jf)
            for (std::size_t ld = 0; ld < g.dense_sizes.size(); ++ld)
                for (std::size_t s = 0; s < g.seeds.size(); ++s) {
                    const ScanCell& cell = result.cell(ik, jf, ld, s);
                    if (cell.failed) continue;
                    const std::size_t r = detail::axis_coord(cell, hm.row_axis, ik, jf, ld);
                    const std::size_t c = detail::axis_coord(cell, hm.col_axis, ik, jf, ld);
                    hm.values.at(r, c) += cell.val_mse_norm;
                    counts.at(r, c) += 1.0;
                }
    for (std::size_t r = 0; r < hm.values.rows; ++r)
        for (std::size_t c = 0; c < hm.values.cols; ++c) {
            if (counts.at(r, c) == 0.0)
                throw Error(Errc::all_failed_row, std::string(scan_axis_name(hm.row_axis)) + "=" +
                                                      std::to_string(hm.row_values[r]) + ", " +
                                                      scan_axis_name(hm.col_axis) + "=" +
                                                      std::to_string(hm.col_values[c]));
            hm.values.at(r, c) /= counts.at(r, c);
        }
    return hm;
}

/// Mean over the other two axes and seeds, same exclusion rules.
inline Curve marginal_curve(const ScanResult& result, ScanAxis keep) {
    const ScanGrid& g = result.grid;
    Curve cv;
    cv.axis = keep;
    cv.axis_values = detail::axis_values(g, keep);
    cv.means.assign(cv.axis_values.size(), 0.0);
    std::vector<double> counts(cv.axis_values.size(), 0.0);

    for (std::size_t ik = 0; ik < g.kernel_sizes.size(); ++ik)
        for (std::size_t jf = 0; jf < g.filter_counts.size(); ++jf)
            for (std::size_t ld = 0; ld < g.dense_sizes.size(); ++ld)
                for (std::size_t s = 0; s < g.seeds.size(); ++s) {
                    const ScanCell& cell = result.cell(ik, jf, ld, s);
                    if (cell.failed) continue;
                    const std::size_t i = detail::axis_coord(cell, keep, ik, jf, ld);
                    cv.means[i] += cell.val_mse_norm;
                    counts[i] += 1.0;
                }
    for (std::size_t i = 0; i < cv.means.size(); ++i) {
        if (counts[i] == 0.0)
            throw Error(Errc::all_failed_row, std::string(scan_axis_name(keep)) + "=" +
                                                  std::to_string(cv.axis_values[i]));
        cv.means[i] /= counts[i];
    }
    return cv;
}

} // namespace loadcast
