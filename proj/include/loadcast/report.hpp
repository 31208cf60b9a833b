#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "loadcast/errors.hpp"
#include "loadcast/scan.hpp"
#include "loadcast/textio.hpp"

// Scan reporting: cells.csv is the deterministic record (a pure function of
// the grid and seeds, byte-identical across worker counts); measured wall
// times go to timings.csv, which makes no determinism promise. Heatmaps and
// curves are derived from cells.csv alone.

namespace loadcast {

inline std::string cells_csv_text(const ScanResult& result, bool include_timing = false) {
    std::ostringstream os;
    os << "kernel_size,n_filters,dense_size,seed,status,val_mse_norm,val_mse_phys,wall_time_s\n";
    for (const ScanCell& c : result.cells) {
        os << c.kernel_size << ',' << c.n_filters << ',' << c.dense_size << ',' << c.seed << ',';
        if (c.failed) {
            os << "FAILED,nan,nan,";
        } else {
            os << "OK," << fmt_double(c.val_mse_norm) << ',' << fmt_double(c.val_mse_phys) << ',';
        }
        os << (include_timing ? fmt_double(c.wall_time_s) : std::string("0")) << '\n';
    }
    return os.str();
}

inline std::string timings_csv_text(const ScanResult& result) {
    std::ostringstream os;
    os << "kernel_size,n_filters,dense_size,seed,wall_time_s\n";
    for (const ScanCell& c : result.cells)
        os << c.kernel_size << ',' << c.n_filters << ',' << c.dense_size << ',' << c.seed << ','
           << fmt_double(c.wall_time_s) << '\n';
    return os.str();
}

/// Rebuild a ScanResult (grid + cells, no training reports) from cells.csv.
inline ScanResult read_cells_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) ||
        trim(line) != "kernel_size,n_filters,dense_size,seed,status,val_mse_norm,val_mse_phys,wall_time_s")
        throw Error(Errc::malformed_row, "bad cells.csv header in '" + path + "'", 1);

    std::vector<ScanCell> rows;
    std::set<int> ks, fs, ds;
    std::set<std::uint64_t> seeds;
    std::int64_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        std::string_view row = trim(line);
        if (row.empty()) continue;
        auto cols = split_on(row, ',');
        if (cols.size() != 8) throw Error(Errc::malformed_row, "expected 8 columns", line_no);
        ScanCell c;
        std::int64_t k, f, d, seed;
        if (!try_parse_int(trim(cols[0]), k) || !try_parse_int(trim(cols[1]), f) ||
            !try_parse_int(trim(cols[2]), d) || !try_parse_int(trim(cols[3]), seed))
            throw Error(Errc::malformed_row, "bad grid coordinates", line_no);
        c.kernel_size = static_cast<int>(k);
        c.n_filters = static_cast<int>(f);
        c.dense_size = static_cast<int>(d);
        c.seed = static_cast<std::uint64_t>(seed);
        const std::string_view status = trim(cols[4]);
        if (status == "FAILED") {
            c.failed = true;
        } else if (status == "OK") {
            if (!try_parse_double(trim(cols[5]), c.val_mse_norm) ||
                !try_parse_double(trim(cols[6]), c.val_mse_phys))
                throw Error(Errc::malformed_row, "bad MSE value", line_no);
        } else {
            throw Error(Errc::malformed_row, "unknown status '" + std::string(status) + "'", line_no);
        }
        try_parse_double(trim(cols[7]), c.wall_time_s);
        ks.insert(c.kernel_size);
        fs.insert(c.n_filters);
        ds.insert(c.dense_size);
        seeds.insert(c.seed);
        rows.push_back(std::move(c));
    }

    ScanResult result;
    result.grid.kernel_sizes.assign(ks.begin(), ks.end());
    result.grid.filter_counts.assign(fs.begin(), fs.end());
    result.grid.dense_sizes.assign(ds.begin(), ds.end());
    result.grid.seeds.assign(seeds.begin(), seeds.end());
    if (rows.size() != result.grid.n_cells())
        throw Error(Errc::malformed_row, "cells.csv is not a complete grid: " +
                                             std::to_string(rows.size()) + " rows vs " +
                                             std::to_string(result.grid.n_cells()) + " grid points");
    result.cells.resize(result.grid.n_cells());
    std::vector<bool> seen(result.cells.size(), false);
    const auto index_of = [](const std::vector<int>& xs, int v) {
        return static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), v) - xs.begin());
    };
    for (auto& c : rows) {
        const std::size_t ik = index_of(result.grid.kernel_sizes, c.kernel_size);
        const std::size_t jf = index_of(result.grid.filter_counts, c.n_filters);
        const std::size_t ld = index_of(result.grid.dense_sizes, c.dense_size);
        const std::size_t s = static_cast<std::size_t>(
            std::lower_bound(result.grid.seeds.begin(), result.grid.seeds.end(), c.seed) -
            result.grid.seeds.begin());
        const std::size_t slot = result.cell_index(ik, jf, ld, s);
        if (seen[slot]) throw Error(Errc::malformed_row, "duplicate grid point in cells.csv");
        seen[slot] = true;
        result.cells[slot] = std::move(c);
    }
    return result;
}

inline std::string heatmap_csv_text(const Heatmap& hm) {
    std::ostringstream os;
    os << scan_axis_name(hm.row_axis) << '\\' << scan_axis_name(hm.col_axis);
    for (int cv : hm.col_values) os << ',' << cv;
    os << '\n';
    for (std::size_t r = 0; r < hm.values.rows; ++r) {
        os << hm.row_values[r];
        for (std::size_t c = 0; c < hm.values.cols; ++c) os << ',' << fmt_double(hm.values.at(r, c));
        os << '\n';
    }
    return os.str();
}

inline std::string curve_csv_text(const Curve& cv) {
    std::ostringstream os;
    os << scan_axis_name(cv.axis) << ",mean_val_mse_norm\n";
    for (std::size_t i = 0; i < cv.means.size(); ++i)
        os << cv.axis_values[i] << ',' << fmt_double(cv.means[i]) << '\n';
    return os.str();
}

namespace detail {

inline std::string fmt_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

/// Five-stop dark-to-bright colormap, linear in value.
inline std::string heat_color(double t) {
    static constexpr int stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0);
    const double x = t * 4.0;
    const int lo = std::min(3, static_cast<int>(x));
    const double frac = x - lo;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(stops[lo][0] + frac * (stops[lo + 1][0] - stops[lo][0])),
                  static_cast<int>(stops[lo][1] + frac * (stops[lo + 1][1] - stops[lo][1])),
                  static_cast<int>(stops[lo][2] + frac * (stops[lo + 1][2] - stops[lo][2])));
    return buf;
}

} // namespace detail

/// Self-contained SVG: colored grid, axis tick labels, per-cell values, and
/// a min/max legend bar.
inline std::string heatmap_svg_text(const Heatmap& hm, const std::string& title) {
    const int cell_w = 64, cell_h = 40, left = 90, top = 60, legend_w = 70;
    const int rows = static_cast<int>(hm.values.rows), cols = static_cast<int>(hm.values.cols);
    const int width = left + cols * cell_w + legend_w + 40;
    const int height = top + rows * cell_h + 50;

    double lo = hm.values.data[0], hi = hm.values.data[0];
    for (double v : hm.values.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
    os << "<text x=\"" << left << "\" y=\"" << top - 8 << "\">" << scan_axis_name(hm.col_axis)
       << "</text>\n";
    os << "<text x=\"8\" y=\"" << top - 8 << "\">" << scan_axis_name(hm.row_axis) << "</text>\n";

    for (int c = 0; c < cols; ++c)
        os << "<text x=\"" << left + c * cell_w + cell_w / 2 << "\" y=\"" << top - 8 + 22
           << "\" text-anchor=\"middle\">" << hm.col_values[static_cast<std::size_t>(c)]
           << "</text>\n";
    for (int r = 0; r < rows; ++r)
        os << "<text x=\"" << left - 10 << "\" y=\"" << top + 14 + r * cell_h + cell_h / 2 + 4
           << "\" text-anchor=\"end\">" << hm.row_values[static_cast<std::size_t>(r)] << "</text>\n";

    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double v = hm.values.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            const double t = (v - lo) / span;
            os << "<rect x=\"" << left + c * cell_w << "\" y=\"" << top + 14 + r * cell_h
               << "\" width=\"" << cell_w << "\" height=\"" << cell_h << "\" fill=\""
               << detail::heat_color(t) << "\" stroke=\"white\"/>\n";
            os << "<text x=\"" << left + c * cell_w + cell_w / 2 << "\" y=\""
               << top + 14 + r * cell_h + cell_h / 2 + 4 << "\" text-anchor=\"middle\" fill=\""
               << (t > 0.6 ? "black" : "white") << "\" font-size=\"10\">" << detail::fmt_short(v)
               << "</text>\n";
        }

    // legend: discrete gradient bar, high at top
    const int lx = left + cols * cell_w + 24;
    const int lh = rows * cell_h;
    const int steps = 24;
    for (int i = 0; i < steps; ++i) {
        const double t = 1.0 - static_cast<double>(i) / (steps - 1);
        os << "<rect x=\"" << lx << "\" y=\"" << top + 14 + i * lh / steps << "\" width=\"16\" height=\""
           << (lh + steps - 1) / steps << "\" fill=\"" << detail::heat_color(t) << "\"/>\n";
    }
    os << "<text x=\"" << lx + 20 << "\" y=\"" << top + 22 << "\" font-size=\"10\">"
       << detail::fmt_short(hi) << "</text>\n";
    os << "<text x=\"" << lx + 20 << "\" y=\"" << top + 14 + lh << "\" font-size=\"10\">"
       << detail::fmt_short(lo) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

inline std::string curve_svg_text(const Curve& cv, const std::string& title) {
    const int left = 70, top = 50, plot_w = 420, plot_h = 240;
    const int width = left + plot_w + 30, height = top + plot_h + 60;
    const std::size_t n = cv.means.size();

    double lo = cv.means[0], hi = cv.means[0];
    for (double v : cv.means) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    const auto px = [&](std::size_t i) {
        return n == 1 ? left + plot_w / 2
                      : left + static_cast<int>(static_cast<double>(i) / (n - 1) * plot_w);
    };
    const auto py = [&](double v) {
        return top + static_cast<int>((1.0 - (v - lo) / span) * (plot_h - 20)) + 10;
    };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
       << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(hi) + 4 << "\" text-anchor=\"end\" font-size=\"10\">"
       << detail::fmt_short(hi) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(lo) + 4 << "\" text-anchor=\"end\" font-size=\"10\">"
       << detail::fmt_short(lo) << "</text>\n";

    os << "<polyline fill=\"none\" stroke=\"#3b528b\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < n; ++i) os << px(i) << ',' << py(cv.means[i]) << ' ';
    os << "\"/>\n";
    for (std::size_t i = 0; i < n; ++i) {
        os << "<circle cx=\"" << px(i) << "\" cy=\"" << py(cv.means[i]) << "\" r=\"3\" fill=\"#3b528b\"/>\n";
        os << "<text x=\"" << px(i) << "\" y=\"" << top + plot_h + 16
           << "\" text-anchor=\"middle\" font-size=\"10\">" << cv.axis_values[i] << "</text>\n";
    }
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 36
       << "\" text-anchor=\"middle\">" << scan_axis_name(cv.axis) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

/// Regenerate everything derivable from cells.csv alone: three heatmaps and
/// three curves, CSV and SVG each.
inline void render_derived_report(const ScanResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    struct HeatSpec {
        ScanAxis collapse;
        const char* name;
    };
    const HeatSpec heat_specs[] = {{ScanAxis::kernel, "heatmap_filters_dense"},
                                   {ScanAxis::filters, "heatmap_kernel_dense"},
                                   {ScanAxis::dense, "heatmap_kernel_filters"}};
    for (const auto& spec : heat_specs) {
        const Heatmap hm = marginal_heatmap(result, spec.collapse);
        write_text_file(path(std::string(spec.name) + ".csv"), heatmap_csv_text(hm));
        const std::string title = "mean val MSE (norm), averaged over " +
                                  std::string(scan_axis_name(spec.collapse)) + " and seeds";
        write_text_file(path(std::string(spec.name) + ".svg"), heatmap_svg_text(hm, title));
    }

    struct CurveSpec {
        ScanAxis keep;
        const char* name;
    };
    const CurveSpec curve_specs[] = {{ScanAxis::kernel, "curve_kernel"},
                                     {ScanAxis::filters, "curve_filters"},
                                     {ScanAxis::dense, "curve_dense"}};
    for (const auto& spec : curve_specs) {
        const Curve cv = marginal_curve(result, spec.keep);
        write_text_file(path(std::string(spec.name) + ".csv"), curve_csv_text(cv));
        const std::string title =
            "mean val MSE (norm) by " + std::string(scan_axis_name(spec.keep));
        write_text_file(path(std::string(spec.name) + ".svg"), curve_svg_text(cv, title));
    }
}

/// Full scan report: cells.csv (deterministic), timings.csv (measured),
/// failures.txt when needed, plus all derived heatmaps and curves.
inline void render_report(const ScanResult& result, const std::string& out_dir,
                          bool include_timing = false) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(Errc::io_error, "cannot create '" + out_dir + "': " + ec.message());
    const auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    write_text_file(path("cells.csv"), cells_csv_text(result, include_timing));
    write_text_file(path("timings.csv"), timings_csv_text(result));

    std::size_t n_failed = 0;
    std::ostringstream failures;
    for (const ScanCell& c : result.cells)
        if (c.failed) {
            ++n_failed;
            failures << c.kernel_size << ',' << c.n_filters << ',' << c.dense_size << ',' << c.seed
                     << ": " << c.fail_reason << '\n';
        }
    if (n_failed > 0) write_text_file(path("failures.txt"), failures.str());

    render_derived_report(result, out_dir);
}

} // namespace loadcast
