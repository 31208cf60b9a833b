#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "loadcast/dataset.hpp"
#include "loadcast/errors.hpp"
#include "loadcast/nn.hpp"
#include "loadcast/optim.hpp"

namespace loadcast {

struct TrainingConfig {
    int batch_size = 128;
    int epochs = 40;
    std::uint64_t seed = 1;
    NadamConfig nadam;

    void validate() const {
        if (batch_size < 1 || epochs < 1) throw Error(Errc::invalid_config, "bad training config");
        nadam.validate();
    }
};

struct TrainReport {
    std::vector<double> train_loss;   // per-epoch mean training loss (normalized)
    std::vector<double> val_mse_norm; // per-epoch validation MSE (normalized)
    double final_val_mse_norm = 0.0;
    double final_val_mse_phys = 0.0;
    double wall_time_s = 0.0;
};

namespace detail {

inline Mat2 gather_rows(const Mat2& src, const std::vector<std::size_t>& idx) {
    Mat2 out(idx.size(), src.cols);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const double* from = src.data.data() + idx[r] * src.cols;
        std::copy_n(from, src.cols, out.row(r).data());
    }
    return out;
}

/// Validation MSE in fixed chunks; sequential accumulation keeps it
/// deterministic.
inline double validation_mse(const Network& net, const WindowedDataset& val) {
    constexpr std::size_t kChunk = 256;
    double acc = 0.0;
    std::size_t count = 0;
    std::vector<std::size_t> idx;
    for (std::size_t pos = 0; pos < val.size(); pos += kChunk) {
        const std::size_t end = std::min(val.size(), pos + kChunk);
        idx.resize(end - pos);
        for (std::size_t i = pos; i < end; ++i) idx[i - pos] = i;
        const Mat2 in = gather_rows(val.inputs, idx);
        const Mat2 tg = gather_rows(val.targets, idx);
        const ForwardTrace t = forward(net, in);
        for (std::size_t i = 0; i < t.output.data.size(); ++i) {
            const double d = t.output.data[i] - tg.data[i];
            acc += d * d;
        }
        count += t.output.data.size();
    }
    return acc / static_cast<double>(count);
}

} // namespace detail

/// Fixed-epoch Nadam training on shuffled mini-batches. Deterministic in
/// (config, tcfg, data); a non-finite loss or gradient aborts before any
/// non-finite parameter is written.
inline std::pair<Network, TrainReport> train(const NetworkConfig& cfg, const TrainingConfig& tcfg,
                                             const WindowedDataset& train_set,
                                             const WindowedDataset& val_set) {
    cfg.validate();
    tcfg.validate();
    if (train_set.window_len != cfg.input_len || train_set.horizon != cfg.horizon ||
        val_set.window_len != cfg.input_len || val_set.horizon != cfg.horizon)
        throw Error(Errc::shape_mismatch, "dataset (W=" + std::to_string(train_set.window_len) +
                                              ",h=" + std::to_string(train_set.horizon) +
                                              ") vs network (W=" + std::to_string(cfg.input_len) +
                                              ",h=" + std::to_string(cfg.horizon) + ")");

    const auto t0 = std::chrono::steady_clock::now();
    Network net = init_network(cfg, tcfg.seed);
    NadamState state(net.params.size());
    TrainReport report;
    report.train_loss.reserve(static_cast<std::size_t>(tcfg.epochs));
    report.val_mse_norm.reserve(static_cast<std::size_t>(tcfg.epochs));

    for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
        double epoch_sq = 0.0;
        std::size_t epoch_count = 0;
        int batch_no = 0;
        for (const auto& idx : batches(train_set.size(), tcfg.batch_size, tcfg.seed, epoch)) {
            const Mat2 in = detail::gather_rows(train_set.inputs, idx);
            const Mat2 tg = detail::gather_rows(train_set.targets, idx);
            const ForwardTrace trace = forward(net, in);
            const double loss = mse_loss(trace.output, tg);
            if (!std::isfinite(loss))
                throw Error(Errc::non_finite_loss,
                            "epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch_no));
            epoch_sq += loss * static_cast<double>(trace.output.data.size());
            epoch_count += trace.output.data.size();
            const std::vector<double> grad = backward(net, trace, tg);
            try {
                nadam_step(net.params, grad, state, tcfg.nadam);
            } catch (const Error& e) {
                if (e.code() == Errc::non_finite_gradient)
                    throw Error(Errc::non_finite_loss, "epoch " + std::to_string(epoch) + ", batch " +
                                                           std::to_string(batch_no) +
                                                           ": non-finite gradient");
                throw;
            }
            ++batch_no;
        }
        report.train_loss.push_back(epoch_sq / static_cast<double>(epoch_count));
        report.val_mse_norm.push_back(detail::validation_mse(net, val_set));
    }

    report.final_val_mse_norm = report.val_mse_norm.back();
    report.final_val_mse_phys = report.final_val_mse_norm * train_set.stats.sd * train_set.stats.sd;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(net), std::move(report)};
}

} // namespace loadcast
