#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "loadcast/errors.hpp"

// Minimal dense containers and the two kernels the network needs. Plain
// loops over contiguous storage; the optimizer-facing code keeps a fixed
// accumulation order so results are bit-reproducible.

namespace loadcast {

using Vec1 = std::vector<double>;

struct Mat2 {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat2() = default;
    Mat2(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    bool same_shape(const Mat2& o) const { return rows == o.rows && cols == o.cols; }
};

inline bool all_finite(std::span<const double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

inline Vec1 matvec(const Mat2& m, std::span<const double> x) {
    if (m.cols != x.size())
        throw Error(Errc::shape_mismatch, "matvec: " + std::to_string(m.cols) + " cols vs vector of " +
                                              std::to_string(x.size()));
    Vec1 out(m.rows, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = m.data.data() + r * m.cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * x[c];
        out[r] = acc;
    }
    return out;
}

/// Valid 1D cross-correlation, unit stride:
/// out[i] = sum_j x[i+j] * w[j], output length |x| - |w| + 1.
inline void xcorr_valid_into(std::span<const double> x, std::span<const double> w,
                             std::span<double> out) {
    const std::size_t n = x.size() - w.size() + 1;
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double wj = w[j];
        const double* xs = x.data() + j;
        for (std::size_t i = 0; i < n; ++i) out[i] += wj * xs[i];
    }
}

inline Vec1 xcorr_valid(std::span<const double> x, std::span<const double> w) {
    if (w.empty() || w.size() > x.size())
        throw Error(Errc::kernel_too_long, "kernel of " + std::to_string(w.size()) +
                                               " vs input of " + std::to_string(x.size()));
    Vec1 out(x.size() - w.size() + 1);
    xcorr_valid_into(x, w, out);
    return out;
}

} // namespace loadcast
