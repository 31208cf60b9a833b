#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "loadcast/nn.hpp"
#include "loadcast/rng.hpp"

using namespace loadcast;

namespace {

// Straight-line re-implementation of the forward pass, independent of the
// library's loop structure; nested vectors, one element at a time.
std::vector<double> forward_oracle(const Network& net, const std::vector<double>& x) {
    const NetworkConfig& c = net.cfg;
    const int L = c.conv_out_len();
    auto relu = [](double v) { return v > 0.0 ? v : 0.0; };

    std::vector<std::vector<double>> maps(static_cast<std::size_t>(c.n_filters));
    for (int f = 0; f < c.n_filters; ++f) {
        maps[f].resize(static_cast<std::size_t>(L));
        for (int i = 0; i < L; ++i) {
            double acc = net.conv_b()[f];
            for (int j = 0; j < c.kernel_size; ++j)
                acc += x[static_cast<std::size_t>(i + j)] * net.conv_w()[f * c.kernel_size + j];
            maps[f][i] = relu(acc);
        }
    }
    std::vector<double> flat;
    for (const auto& m : maps) flat.insert(flat.end(), m.begin(), m.end());

    std::vector<double> hidden(static_cast<std::size_t>(c.dense_size));
    for (int d = 0; d < c.dense_size; ++d) {
        double acc = net.fc1_b()[d];
        for (std::size_t i = 0; i < flat.size(); ++i) acc += net.fc1_w()[d * flat.size() + i] * flat[i];
        hidden[d] = relu(acc);
    }
    std::vector<double> out(static_cast<std::size_t>(c.horizon));
    for (int o = 0; o < c.horizon; ++o) {
        double acc = net.out_b()[o];
        for (int d = 0; d < c.dense_size; ++d) acc += net.out_w()[o * c.dense_size + d] * hidden[d];
        out[o] = acc;
    }
    return out;
}

Mat2 random_batch(Rng& rng, std::size_t rows, std::size_t cols) {
    Mat2 m(rows, cols);
    for (auto& x : m.data) x = rng.uniform(-1.5, 1.5);
    return m;
}

double loss_at(const Network& net, const Mat2& in, const Mat2& target) {
    return mse_loss(forward(net, in).output, target);
}

} // namespace

TEST_CASE("init is deterministic with zero biases") {
    const NetworkConfig cfg{.input_len = 32, .kernel_size = 5, .n_filters = 3, .dense_size = 4, .horizon = 6};
    const Network a = init_network(cfg, 77);
    const Network b = init_network(cfg, 77);
    CHECK(a.params == b.params);
    const Network c = init_network(cfg, 78);
    CHECK(a.params != c.params);

    for (double v : a.conv_b()) CHECK(v == 0.0);
    for (double v : a.fc1_b()) CHECK(v == 0.0);
    for (double v : a.out_b()) CHECK(v == 0.0);
}

TEST_CASE("init weight spread matches the Glorot-uniform scale") {
    // fc1 layer with >= 1000 weights: 4 x (2 * 254)
    const NetworkConfig cfg{.input_len = 256, .kernel_size = 3, .n_filters = 2, .dense_size = 4, .horizon = 2};
    const Network net = init_network(cfg, 5);
    const auto w = net.fc1_w();
    REQUIRE(w.size() >= 1000);
    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= static_cast<double>(w.size());
    double var = 0.0;
    for (double v : w) var += (v - mean) * (v - mean);
    var /= static_cast<double>(w.size());
    const double limit = std::sqrt(6.0 / (static_cast<double>(net.flat_len()) + cfg.dense_size));
    const double expected_sd = limit / std::sqrt(3.0);
    CHECK(std::sqrt(var) == Catch::Approx(expected_sd).epsilon(0.10));
}

TEST_CASE("parameter count closed form") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        NetworkConfig cfg;
        cfg.input_len = 4 + static_cast<int>(rng.below(60));
        cfg.kernel_size = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.input_len)));
        cfg.n_filters = 1 + static_cast<int>(rng.below(8));
        cfg.dense_size = 1 + static_cast<int>(rng.below(8));
        cfg.horizon = 1 + static_cast<int>(rng.below(12));
        const Network net = init_network(cfg, trial);
        const std::int64_t L = cfg.input_len - cfg.kernel_size + 1;
        const std::int64_t expected = cfg.n_filters * (cfg.kernel_size + 1) +
                                      cfg.dense_size * (cfg.n_filters * L + 1) +
                                      cfg.horizon * (cfg.dense_size + 1);
        CHECK(static_cast<std::int64_t>(net.params.size()) == expected);
        CHECK(cfg.param_count() == expected);
    }
}

TEST_CASE("conv output length law") {
    for (int k = 1; k <= 24; ++k) {
        NetworkConfig cfg{.input_len = 24, .kernel_size = k, .n_filters = 1, .dense_size = 1, .horizon = 1};
        CHECK(cfg.conv_out_len() == 24 - k + 1);
        const Network net = init_network(cfg, 3);
        CHECK(net.flat_len() == static_cast<std::size_t>(24 - k + 1));
    }
    NetworkConfig bad{.input_len = 8, .kernel_size = 9, .n_filters = 1, .dense_size = 1, .horizon = 1};
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("all-zero network outputs zeros") {
    const NetworkConfig cfg{.input_len = 10, .kernel_size = 3, .n_filters = 2, .dense_size = 3, .horizon = 4};
    Network net;
    net.cfg = cfg;
    net.params.assign(static_cast<std::size_t>(cfg.param_count()), 0.0);
    Rng rng(2);
    const Mat2 batch = random_batch(rng, 5, 10);
    const ForwardTrace t = forward(net, batch);
    for (double v : t.output.data) CHECK(v == 0.0);
}

TEST_CASE("k=W single-unit network is hand-computable") {
    const NetworkConfig cfg{.input_len = 3, .kernel_size = 3, .n_filters = 1, .dense_size = 1, .horizon = 2};
    Network net;
    net.cfg = cfg;
    net.params = {0.5, -0.25, 0.1, // conv w
                  0.2,             // conv b
                  1.5,             // fc1 w (flat len 1)
                  -0.05,           // fc1 b
                  2.0, -1.0,       // out w (h x D = 2x1)
                  0.3, 0.7};       // out b
    Mat2 batch(1, 3);
    batch.data = {1.0, 2.0, -1.0};

    const double conv = std::max(0.0, 0.5 * 1.0 - 0.25 * 2.0 + 0.1 * -1.0 + 0.2); // 0.1
    const double hidden = std::max(0.0, 1.5 * conv - 0.05);                        // 0.1
    const ForwardTrace t = forward(net, batch);
    CHECK(t.output.at(0, 0) == Catch::Approx(2.0 * hidden + 0.3).margin(1e-15));
    CHECK(t.output.at(0, 1) == Catch::Approx(-1.0 * hidden + 0.7).margin(1e-15));
}

TEST_CASE("forward matches the straight-line oracle") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        NetworkConfig cfg;
        cfg.input_len = 12 + static_cast<int>(rng.below(20));
        cfg.kernel_size = 1 + static_cast<int>(rng.below(7));
        cfg.n_filters = 1 + static_cast<int>(rng.below(4));
        cfg.dense_size = 1 + static_cast<int>(rng.below(5));
        cfg.horizon = 1 + static_cast<int>(rng.below(6));
        const Network net = init_network(cfg, 1000 + trial);

        Mat2 batch = random_batch(rng, 3, static_cast<std::size_t>(cfg.input_len));
        const ForwardTrace t = forward(net, batch);
        for (std::size_t b = 0; b < batch.rows; ++b) {
            const auto row = batch.row(b);
            const std::vector<double> expect =
                forward_oracle(net, std::vector<double>(row.begin(), row.end()));
            for (int o = 0; o < cfg.horizon; ++o) {
                CHECK(std::abs(t.output.at(b, static_cast<std::size_t>(o)) -
                               expect[static_cast<std::size_t>(o)]) <= 1e-10);
            }
        }
    }
}

TEST_CASE("forward is deterministic") {
    const NetworkConfig cfg{.input_len = 20, .kernel_size = 4, .n_filters = 3, .dense_size = 2, .horizon = 3};
    const Network net = init_network(cfg, 8);
    Rng rng(4);
    const Mat2 batch = random_batch(rng, 6, 20);
    const ForwardTrace a = forward(net, batch);
    const ForwardTrace b = forward(net, batch);
    CHECK(a.output.data == b.output.data);
}

TEST_CASE("predict_one agrees with batched forward") {
    const NetworkConfig cfg{.input_len = 16, .kernel_size = 3, .n_filters = 2, .dense_size = 3, .horizon = 5};
    const Network net = init_network(cfg, 21);
    Rng rng(22);
    const Mat2 batch = random_batch(rng, 4, 16);
    const ForwardTrace t = forward(net, batch);
    for (std::size_t b = 0; b < batch.rows; ++b) {
        const auto one = predict_one(net, batch.row(b));
        for (std::size_t o = 0; o < one.size(); ++o) CHECK(one[o] == t.output.at(b, o));
    }
}

TEST_CASE("mse_loss basics") {
    Mat2 a(1, 1), b(1, 1);
    a.data = {0.0};
    b.data = {2.0};
    CHECK(mse_loss(a, a) == 0.0);
    CHECK(mse_loss(a, b) == 4.0);

    Mat2 p(1, 2), t(1, 2);
    p.data = {1.0, 1.0};
    t.data = {0.0, 2.0};
    CHECK(mse_loss(p, t) == 1.0);

    Mat2 wrong(2, 1);
    CHECK_THROWS_AS(mse_loss(a, wrong), Error);
}

TEST_CASE("backward returns zero gradients at a perfect fit") {
    const NetworkConfig cfg{.input_len = 12, .kernel_size = 3, .n_filters = 2, .dense_size = 2, .horizon = 3};
    const Network net = init_network(cfg, 9);
    Rng rng(10);
    const Mat2 batch = random_batch(rng, 4, 12);
    const ForwardTrace t = forward(net, batch);
    const auto grads = backward(net, t, t.output);
    for (double g : grads) CHECK(g == 0.0);
}

TEST_CASE("gradient check against central finite differences") {
    const double eps = 1e-5;
    for (std::uint64_t seed : {101u, 102u, 103u}) {
        const NetworkConfig cfg{.input_len = 16, .kernel_size = 3, .n_filters = 2, .dense_size = 3, .horizon = 2};
        Network net = init_network(cfg, seed);
        Rng rng(seed + 5000);
        const Mat2 batch = random_batch(rng, 4, 16);
        Mat2 target(4, 2);
        for (auto& v : target.data) v = rng.uniform(-1.0, 1.0);

        const ForwardTrace t = forward(net, batch);
        const auto grads = backward(net, t, target);

        double worst = 0.0;
        for (std::size_t i = 0; i < net.params.size(); ++i) {
            const double save = net.params[i];
            net.params[i] = save + eps;
            const double up = loss_at(net, batch, target);
            net.params[i] = save - eps;
            const double down = loss_at(net, batch, target);
            net.params[i] = save;
            const double fd = (up - down) / (2.0 * eps);
            const double rel = std::abs(grads[i] - fd) / std::max({std::abs(grads[i]), std::abs(fd), 1e-5});
            worst = std::max(worst, rel);
        }
        INFO("seed " << seed);
        CHECK(worst <= 1e-4);
    }
}

TEST_CASE("conv weight gradient equals the brute-force window sum") {
    const NetworkConfig cfg{.input_len = 4, .kernel_size = 2, .n_filters = 1, .dense_size = 1, .horizon = 1};
    Network net;
    net.cfg = cfg;
    // all-positive so both ReLUs stay active
    net.params = {0.5, 0.25, // conv w
                  0.1,       // conv b
                  0.4, 0.3, 0.2, // fc1 w over flat len 3
                  0.05,      // fc1 b
                  1.25,      // out w
                  0.0};      // out b
    Mat2 x(1, 4);
    x.data = {0.3, 0.6, 0.9, 1.2};
    Mat2 target(1, 1);
    target.data = {0.0};

    const ForwardTrace t = forward(net, x);
    const auto grads = backward(net, t, target);

    // chain rule by hand for this fixed case
    const double pre0 = 0.1 + 0.5 * 0.3 + 0.25 * 0.6;
    const double pre1 = 0.1 + 0.5 * 0.6 + 0.25 * 0.9;
    const double pre2 = 0.1 + 0.5 * 0.9 + 0.25 * 1.2;
    const double hidden_pre = 0.05 + 0.4 * pre0 + 0.3 * pre1 + 0.2 * pre2;
    const double out = 1.25 * hidden_pre;
    const double dout = 2.0 * (out - 0.0); // B*h = 1
    const double dhidden = dout * 1.25;
    const double dconv[3] = {dhidden * 0.4, dhidden * 0.3, dhidden * 0.2};
    const double gw0 = dconv[0] * 0.3 + dconv[1] * 0.6 + dconv[2] * 0.9;
    const double gw1 = dconv[0] * 0.6 + dconv[1] * 0.9 + dconv[2] * 1.2;

    CHECK(grads[0] == Catch::Approx(gw0).margin(1e-12));
    CHECK(grads[1] == Catch::Approx(gw1).margin(1e-12));
    CHECK(grads[2] == Catch::Approx(dconv[0] + dconv[1] + dconv[2]).margin(1e-12));
}

TEST_CASE("output bias gradients scale with the residual") {
    const NetworkConfig cfg{.input_len = 14, .kernel_size = 3, .n_filters = 2, .dense_size = 2, .horizon = 3};
    const Network net = init_network(cfg, 55);
    Rng rng(56);
    const Mat2 batch = random_batch(rng, 3, 14);
    const ForwardTrace t = forward(net, batch);

    Mat2 target1(3, 3), target2(3, 3);
    const double c = 3.5;
    for (std::size_t i = 0; i < target1.data.size(); ++i) {
        target1.data[i] = t.output.data[i] - 0.37 * static_cast<double>(i + 1);
        target2.data[i] = t.output.data[i] - c * 0.37 * static_cast<double>(i + 1);
    }
    const auto g1 = backward(net, t, target1);
    const auto g2 = backward(net, t, target2);
    for (std::size_t o = net.out_b_off(); o < net.params.size(); ++o)
        CHECK(g2[o] == Catch::Approx(c * g1[o]).epsilon(1e-12));
}

TEST_CASE("model text round trip is bit exact") {
    const NetworkConfig cfg{.input_len = 24, .kernel_size = 5, .n_filters = 3, .dense_size = 4, .horizon = 6};
    const Network net = init_network(cfg, 123);
    std::stringstream ss;
    save_network(ss, net);
    const Network back = load_network(ss);
    CHECK(back.cfg.input_len == cfg.input_len);
    CHECK(back.cfg.kernel_size == cfg.kernel_size);
    CHECK(back.cfg.n_filters == cfg.n_filters);
    CHECK(back.cfg.dense_size == cfg.dense_size);
    CHECK(back.cfg.horizon == cfg.horizon);
    CHECK(back.params == net.params);
}
