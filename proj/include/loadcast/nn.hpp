#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "loadcast/errors.hpp"
#include "loadcast/numerics.hpp"
#include "loadcast/rng.hpp"
#include "loadcast/textio.hpp"

// The forecasting network: one 1D convolution (F filters, kernel k, stride
// 1, no padding), flatten, one hidden dense layer of width D, and a linear
// output layer of width h. ReLU after the conv and the hidden layer.
// Parameters live in a single flat vector so the optimizer, serialization,
// and gradients all share one layout:
//   conv_w [F*k] | conv_b [F] | fc1_w [D*(F*L)] | fc1_b [D] |
//   out_w [h*D] | out_b [h]        with L = W - k + 1.

namespace loadcast {

struct NetworkConfig {
    int input_len = 672; // 7 days of 15-min slots
    int kernel_size = 9;
    int n_filters = 16;
    int dense_size = 6;
    int horizon = 144;

    int conv_out_len() const { return input_len - kernel_size + 1; }

    std::int64_t param_count() const {
        const std::int64_t L = conv_out_len();
        return static_cast<std::int64_t>(n_filters) * (kernel_size + 1) +
               static_cast<std::int64_t>(dense_size) * (static_cast<std::int64_t>(n_filters) * L + 1) +
               static_cast<std::int64_t>(horizon) * (dense_size + 1);
    }

    void validate() const {
        if (input_len < 1 || kernel_size < 1 || kernel_size > input_len || n_filters < 1 ||
            dense_size < 1 || horizon < 1)
            throw Error(Errc::invalid_config,
                        "W=" + std::to_string(input_len) + " k=" + std::to_string(kernel_size) +
                            " F=" + std::to_string(n_filters) + " D=" + std::to_string(dense_size) +
                            " h=" + std::to_string(horizon));
    }
};

struct Network {
    NetworkConfig cfg;
    std::vector<double> params;

    std::size_t conv_w_off() const { return 0; }
    std::size_t conv_b_off() const { return static_cast<std::size_t>(cfg.n_filters) * cfg.kernel_size; }
    std::size_t fc1_w_off() const { return conv_b_off() + cfg.n_filters; }
    std::size_t fc1_b_off() const {
        return fc1_w_off() + static_cast<std::size_t>(cfg.dense_size) * flat_len();
    }
    std::size_t out_w_off() const { return fc1_b_off() + cfg.dense_size; }
    std::size_t out_b_off() const {
        return out_w_off() + static_cast<std::size_t>(cfg.horizon) * cfg.dense_size;
    }

    std::size_t flat_len() const {
        return static_cast<std::size_t>(cfg.n_filters) * cfg.conv_out_len();
    }

    std::span<const double> conv_w() const { return {params.data() + conv_w_off(), conv_b_off()}; }
    std::span<const double> conv_b() const {
        return {params.data() + conv_b_off(), static_cast<std::size_t>(cfg.n_filters)};
    }
    std::span<const double> fc1_w() const {
        return {params.data() + fc1_w_off(), static_cast<std::size_t>(cfg.dense_size) * flat_len()};
    }
    std::span<const double> fc1_b() const {
        return {params.data() + fc1_b_off(), static_cast<std::size_t>(cfg.dense_size)};
    }
    std::span<const double> out_w() const {
        return {params.data() + out_w_off(),
                static_cast<std::size_t>(cfg.horizon) * cfg.dense_size};
    }
    std::span<const double> out_b() const {
        return {params.data() + out_b_off(), static_cast<std::size_t>(cfg.horizon)};
    }
};

/// Glorot-uniform weights (fan counts per layer), zero biases.
inline Network init_network(const NetworkConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Network net;
    net.cfg = cfg;
    net.params.assign(static_cast<std::size_t>(cfg.param_count()), 0.0);

    const auto fill_uniform = [&](std::size_t off, std::size_t count, double limit, std::uint64_t stream) {
        Rng rng(mix_seed({seed, 0x90a7ULL, stream}));
        for (std::size_t i = 0; i < count; ++i) net.params[off + i] = rng.uniform(-limit, limit);
    };

    const double conv_limit =
        std::sqrt(6.0 / (cfg.kernel_size + static_cast<double>(cfg.kernel_size) * cfg.n_filters));
    const double fc1_limit = std::sqrt(6.0 / (static_cast<double>(net.flat_len()) + cfg.dense_size));
    const double out_limit = std::sqrt(6.0 / (static_cast<double>(cfg.dense_size) + cfg.horizon));

    fill_uniform(net.conv_w_off(), net.conv_b_off() - net.conv_w_off(), conv_limit, 1);
    fill_uniform(net.fc1_w_off(), net.fc1_b_off() - net.fc1_w_off(), fc1_limit, 2);
    fill_uniform(net.out_w_off(), net.out_b_off() - net.out_w_off(), out_limit, 3);
    // biases stay zero
    return net;
}

/// Everything backward needs, cached per batch.
struct ForwardTrace {
    Mat2 input;    // B x W
    Mat2 conv_pre; // B x F*L (pre-ReLU)
    Mat2 conv_act; // B x F*L
    Mat2 fc1_pre;  // B x D
    Mat2 fc1_act;  // B x D
    Mat2 output;   // B x h (linear)
};

namespace detail {

inline void forward_row(const Network& net, std::span<const double> x, double* conv_pre,
                        double* conv_act, double* fc1_pre, double* fc1_act, double* out) {
    const NetworkConfig& c = net.cfg;
    const std::size_t L = static_cast<std::size_t>(c.conv_out_len());
    const double* cw = net.params.data() + net.conv_w_off();
    const double* cb = net.params.data() + net.conv_b_off();

    for (int f = 0; f < c.n_filters; ++f) {
        double* pre = conv_pre + static_cast<std::size_t>(f) * L;
        const double* w = cw + static_cast<std::size_t>(f) * c.kernel_size;
        const double bias = cb[f];
        for (std::size_t i = 0; i < L; ++i) pre[i] = bias;
        for (int j = 0; j < c.kernel_size; ++j) {
            const double wj = w[j];
            const double* xs = x.data() + j;
            for (std::size_t i = 0; i < L; ++i) pre[i] += wj * xs[i];
        }
    }
    const std::size_t flat = net.flat_len();
    for (std::size_t i = 0; i < flat; ++i) conv_act[i] = conv_pre[i] > 0.0 ? conv_pre[i] : 0.0;

    const double* fw = net.params.data() + net.fc1_w_off();
    const double* fb = net.params.data() + net.fc1_b_off();
    for (int d = 0; d < c.dense_size; ++d) {
        const double* wrow = fw + static_cast<std::size_t>(d) * flat;
        double acc = fb[d];
        for (std::size_t i = 0; i < flat; ++i) acc += wrow[i] * conv_act[i];
        fc1_pre[d] = acc;
        fc1_act[d] = acc > 0.0 ? acc : 0.0;
    }

    const double* ow = net.params.data() + net.out_w_off();
    const double* ob = net.params.data() + net.out_b_off();
    for (int o = 0; o < c.horizon; ++o) {
        const double* wrow = ow + static_cast<std::size_t>(o) * c.dense_size;
        double acc = ob[o];
        for (int d = 0; d < c.dense_size; ++d) acc += wrow[d] * fc1_act[d];
        out[o] = acc;
    }
}

} // namespace detail

inline ForwardTrace forward(const Network& net, const Mat2& batch) {
    const NetworkConfig& c = net.cfg;
    if (batch.cols != static_cast<std::size_t>(c.input_len))
        throw Error(Errc::shape_mismatch, "batch cols " + std::to_string(batch.cols) + " vs W " +
                                              std::to_string(c.input_len));
    const std::size_t B = batch.rows;
    ForwardTrace t;
    t.input = batch;
    t.conv_pre = Mat2(B, net.flat_len());
    t.conv_act = Mat2(B, net.flat_len());
    t.fc1_pre = Mat2(B, static_cast<std::size_t>(c.dense_size));
    t.fc1_act = Mat2(B, static_cast<std::size_t>(c.dense_size));
    t.output = Mat2(B, static_cast<std::size_t>(c.horizon));
    for (std::size_t b = 0; b < B; ++b) {
        detail::forward_row(net, batch.row(b), t.conv_pre.row(b).data(), t.conv_act.row(b).data(),
                            t.fc1_pre.row(b).data(), t.fc1_act.row(b).data(), t.output.row(b).data());
    }
    return t;
}

/// Single-row forward without trace allocation; used by forecasting.
inline std::vector<double> predict_one(const Network& net, std::span<const double> window) {
    const NetworkConfig& c = net.cfg;
    if (window.size() != static_cast<std::size_t>(c.input_len))
        throw Error(Errc::shape_mismatch, "window of " + std::to_string(window.size()) + " vs W " +
                                              std::to_string(c.input_len));
    std::vector<double> conv_pre(net.flat_len()), conv_act(net.flat_len());
    std::vector<double> fc1_pre(static_cast<std::size_t>(c.dense_size));
    std::vector<double> fc1_act(static_cast<std::size_t>(c.dense_size));
    std::vector<double> out(static_cast<std::size_t>(c.horizon));
    detail::forward_row(net, window, conv_pre.data(), conv_act.data(), fc1_pre.data(),
                        fc1_act.data(), out.data());
    return out;
}

/// Mean over all B*h elements of the squared difference.
inline double mse_loss(const Mat2& pred, const Mat2& target) {
    if (!pred.same_shape(target))
        throw Error(Errc::shape_mismatch, "pred " + std::to_string(pred.rows) + "x" +
                                              std::to_string(pred.cols) + " vs target " +
                                              std::to_string(target.rows) + "x" +
                                              std::to_string(target.cols));
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double d = pred.data[i] - target.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.data.size());
}

/// Gradient of mse_loss w.r.t. every parameter, flat layout matching
/// Network::params. ReLU subgradient at 0 is 0.
inline std::vector<double> backward(const Network& net, const ForwardTrace& t, const Mat2& target) {
    const NetworkConfig& c = net.cfg;
    const std::size_t B = t.input.rows;
    if (t.input.cols != static_cast<std::size_t>(c.input_len) ||
        t.conv_pre.cols != net.flat_len() || t.fc1_pre.cols != static_cast<std::size_t>(c.dense_size) ||
        t.output.rows != B)
        throw Error(Errc::trace_mismatch, "trace does not match network shape");
    if (!t.output.same_shape(target))
        throw Error(Errc::shape_mismatch, "target shape differs from output");

    std::vector<double> grad(net.params.size(), 0.0);
    double* g_conv_w = grad.data() + net.conv_w_off();
    double* g_conv_b = grad.data() + net.conv_b_off();
    double* g_fc1_w = grad.data() + net.fc1_w_off();
    double* g_fc1_b = grad.data() + net.fc1_b_off();
    double* g_out_w = grad.data() + net.out_w_off();
    double* g_out_b = grad.data() + net.out_b_off();

    const std::size_t L = static_cast<std::size_t>(c.conv_out_len());
    const std::size_t flat = net.flat_len();
    const double scale = 2.0 / static_cast<double>(t.output.data.size());

    std::vector<double> delta_out(static_cast<std::size_t>(c.horizon));
    std::vector<double> delta_fc1(static_cast<std::size_t>(c.dense_size));
    std::vector<double> delta_flat(flat);

    const double* ow = net.params.data() + net.out_w_off();
    const double* fw = net.params.data() + net.fc1_w_off();

    for (std::size_t b = 0; b < B; ++b) {
        const double* out = t.output.row(b).data();
        const double* tgt = target.row(b).data();
        const double* f_act = t.fc1_act.row(b).data();
        const double* f_pre = t.fc1_pre.row(b).data();
        const double* c_act = t.conv_act.row(b).data();
        const double* c_pre = t.conv_pre.row(b).data();
        const double* x = t.input.row(b).data();

        for (int o = 0; o < c.horizon; ++o) delta_out[static_cast<std::size_t>(o)] = scale * (out[o] - tgt[o]);

        for (int o = 0; o < c.horizon; ++o) {
            const double d = delta_out[static_cast<std::size_t>(o)];
            g_out_b[o] += d;
            double* gw = g_out_w + static_cast<std::size_t>(o) * c.dense_size;
            for (int j = 0; j < c.dense_size; ++j) gw[j] += d * f_act[j];
        }

        for (int j = 0; j < c.dense_size; ++j) {
            double acc = 0.0;
            for (int o = 0; o < c.horizon; ++o)
                acc += ow[static_cast<std::size_t>(o) * c.dense_size + j] * delta_out[static_cast<std::size_t>(o)];
            delta_fc1[static_cast<std::size_t>(j)] = f_pre[j] > 0.0 ? acc : 0.0;
        }

        for (int j = 0; j < c.dense_size; ++j) {
            const double d = delta_fc1[static_cast<std::size_t>(j)];
            if (d == 0.0) continue;
            g_fc1_b[j] += d;
            double* gw = g_fc1_w + static_cast<std::size_t>(j) * flat;
            for (std::size_t i = 0; i < flat; ++i) gw[i] += d * c_act[i];
        }

        for (std::size_t i = 0; i < flat; ++i) {
            double acc = 0.0;
            for (int j = 0; j < c.dense_size; ++j)
                acc += fw[static_cast<std::size_t>(j) * flat + i] * delta_fc1[static_cast<std::size_t>(j)];
            delta_flat[i] = c_pre[i] > 0.0 ? acc : 0.0;
        }

        for (int f = 0; f < c.n_filters; ++f) {
            const double* df = delta_flat.data() + static_cast<std::size_t>(f) * L;
            double acc_b = 0.0;
            for (std::size_t i = 0; i < L; ++i) acc_b += df[i];
            g_conv_b[f] += acc_b;
            double* gw = g_conv_w + static_cast<std::size_t>(f) * c.kernel_size;
            for (int j = 0; j < c.kernel_size; ++j) {
                const double* xs = x + j;
                double acc = 0.0;
                for (std::size_t i = 0; i < L; ++i) acc += xs[i] * df[i];
                gw[j] += acc;
            }
        }
    }
    return grad;
}

/// Flat text model format: one `W k F D h` header line, then one parameter
/// per line in storage order, shortest round-trip precision.
inline void save_network(std::ostream& os, const Network& net) {
    os << net.cfg.input_len << ' ' << net.cfg.kernel_size << ' ' << net.cfg.n_filters << ' '
       << net.cfg.dense_size << ' ' << net.cfg.horizon << '\n';
    for (double p : net.params) os << fmt_double(p) << '\n';
}

inline Network load_network(std::istream& is) {
    NetworkConfig cfg;
    if (!(is >> cfg.input_len >> cfg.kernel_size >> cfg.n_filters >> cfg.dense_size >> cfg.horizon))
        throw Error(Errc::io_error, "bad model header");
    cfg.validate();
    Network net;
    net.cfg = cfg;
    net.params.resize(static_cast<std::size_t>(cfg.param_count()));
    std::string tok;
    for (std::size_t i = 0; i < net.params.size(); ++i) {
        if (!(is >> tok) || !try_parse_double(tok, net.params[i]))
            throw Error(Errc::io_error, "bad parameter at index " + std::to_string(i));
    }
    return net;
}

} // namespace loadcast
