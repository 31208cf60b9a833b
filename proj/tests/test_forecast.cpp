#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "loadcast/forecast.hpp"
#include "loadcast/rng.hpp"
#include "loadcast/synth.hpp"

using namespace loadcast;

namespace {

Network zero_network(const NetworkConfig& cfg) {
    Network net;
    net.cfg = cfg;
    net.params.assign(static_cast<std::size_t>(cfg.param_count()), 0.0);
    return net;
}

LoadSeries weekly_series(int weeks, double (*f)(DayType, int)) {
    LoadSeries s;
    s.label = "cal";
    s.start = kSynthStartUtc; // Monday midnight
    s.step_minutes = 15;
    s.values.resize(static_cast<std::size_t>(weeks) * 7 * 96);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const std::int64_t t = s.slot_start(i);
        s.values[i] = f(day_type_utc(t), static_cast<int>(seconds_into_day(t) / 900));
    }
    return s;
}

double daytype_pattern(DayType d, int q) {
    return static_cast<double>(d) * 10.0 + q * 0.01;
}

} // namespace

TEST_CASE("zero direct network forecasts the mean") {
    const NetworkConfig cfg{.input_len = 8, .kernel_size = 3, .n_filters = 2, .dense_size = 2, .horizon = 144};
    const Network net = zero_network(cfg);
    const NormStats st{3.7, 1.4};
    const std::vector<double> window(8, 5.0);
    const ForecastResult r = predict_direct(net, window, st, 1234);
    REQUIRE(r.values_kwh.size() == 144);
    for (double v : r.values_kwh) CHECK(v == 3.7);
    CHECK(r.origin_utc == 1234);
}

TEST_CASE("direct forecast requires h = 144") {
    const NetworkConfig cfg{.input_len = 8, .kernel_size = 3, .n_filters = 1, .dense_size = 1, .horizon = 4};
    const Network net = zero_network(cfg);
    const std::vector<double> window(8, 0.0);
    try {
        predict_direct(net, window, NormStats{0.0, 1.0});
        FAIL("expected mode_mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::mode_mismatch);
    }
}

TEST_CASE("direct forecast equals the manual composition") {
    const NetworkConfig cfg{.input_len = 16, .kernel_size = 5, .n_filters = 3, .dense_size = 4, .horizon = 144};
    const Network net = init_network(cfg, 77);
    const NormStats st{0.8, 2.5};
    Rng rng(78);
    std::vector<double> window(16);
    for (auto& v : window) v = rng.uniform(0.0, 4.0);

    const ForecastResult r = predict_direct(net, window, st);

    std::vector<double> z(window.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (window[i] - st.mean) / st.sd;
    const std::vector<double> raw = predict_one(net, z);
    REQUIRE(r.values_kwh.size() == raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        CHECK(std::abs(r.values_kwh[i] - (raw[i] * st.sd + st.mean)) <= 1e-12);
}

TEST_CASE("constant-output iterative network repeats its value") {
    const NetworkConfig cfg{.input_len = 6, .kernel_size = 2, .n_filters = 1, .dense_size = 1, .horizon = 1};
    Network net = zero_network(cfg);
    net.params[net.out_b_off()] = 0.5; // output bias c
    const NormStats st{2.0, 4.0};
    const std::vector<double> window(6, 1.0);
    const ForecastResult r = predict_iterative(net, window, st, 5);
    REQUIRE(r.values_kwh.size() == 5);
    for (double v : r.values_kwh) CHECK(v == 0.5 * 4.0 + 2.0);
}

TEST_CASE("iterative forecast requires h = 1 and positive steps") {
    const NetworkConfig cfg{.input_len = 6, .kernel_size = 2, .n_filters = 1, .dense_size = 1, .horizon = 2};
    const Network net = zero_network(cfg);
    const std::vector<double> window(6, 0.0);
    CHECK_THROWS_AS(predict_iterative(net, window, NormStats{0, 1}, 3), Error);
}

TEST_CASE("iterative loop matches a manual append-and-cut replay") {
    const NetworkConfig cfg{.input_len = 10, .kernel_size = 3, .n_filters = 2, .dense_size = 3, .horizon = 1};
    const Network net = init_network(cfg, 13);
    const NormStats st{1.0, 0.5};
    Rng rng(14);
    std::vector<double> window(10);
    for (auto& v : window) v = rng.uniform(0.0, 2.0);

    const ForecastResult r = predict_iterative(net, window, st, 7);

    // manual replay in normalized space
    std::vector<double> z(window.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (window[i] - st.mean) / st.sd;
    std::vector<double> collected;
    for (int s = 0; s < 7; ++s) {
        const double next = predict_one(net, z)[0];
        collected.push_back(next);
        // window content after step s is original[s+1:] ++ predictions[0:s+1]
        z.erase(z.begin());
        z.push_back(next);
    }
    for (std::size_t i = 0; i < collected.size(); ++i)
        CHECK(r.values_kwh[i] == collected[i] * st.sd + st.mean);

    CHECK(predict_iterative(net, window, st, 1).values_kwh[0] == collected[0] * st.sd + st.mean);
}

TEST_CASE("slp of a constant series is constant") {
    LoadSeries s;
    s.label = "c";
    s.start = kSynthStartUtc;
    s.step_minutes = 15;
    s.values.assign(5 * 7 * 96, 0.42);
    const StandardLoadProfile slp = build_slp(s);
    for (int d = 0; d < 3; ++d)
        for (int q = 0; q < 96; ++q)
            CHECK(slp.profile[d][q] == Catch::Approx(0.42).margin(1e-12));

    const auto fc = slp_forecast(slp, kSynthStartUtc + 12345 * 900, 20);
    for (double v : fc.values_kwh) CHECK(v == Catch::Approx(0.42).margin(1e-12));
}

TEST_CASE("slp recovers an exact day-type pattern") {
    const LoadSeries s = weekly_series(5, daytype_pattern);
    const StandardLoadProfile slp = build_slp(s);
    for (int d = 0; d < 3; ++d)
        for (int q = 0; q < 96; ++q)
            CHECK(slp.profile[d][q] == Catch::Approx(daytype_pattern(static_cast<DayType>(d), q)).margin(1e-12));
}

TEST_CASE("slp matches a brute-force group-by mean") {
    SynthConfig scfg;
    scfg.n_households = 1;
    scfg.days = 35;
    scfg.seed = 3;
    const LoadSeries s = generate_household(scfg, 0);
    const StandardLoadProfile slp = build_slp(s);

    for (int d = 0; d < 3; ++d)
        for (int q = 0; q < 96; ++q) {
            double sum = 0.0;
            int count = 0;
            for (std::size_t i = 0; i < s.values.size(); ++i) {
                const std::int64_t t = s.slot_start(i);
                if (static_cast<int>(day_type_utc(t)) == d &&
                    static_cast<int>(seconds_into_day(t) / 900) == q) {
                    sum += s.values[i];
                    ++count;
                }
            }
            REQUIRE(count > 0);
            CHECK(std::abs(slp.profile[d][q] - sum / count) <= 1e-12);
        }
}

TEST_CASE("slp forecasts its own replay exactly") {
    const LoadSeries s = weekly_series(6, daytype_pattern);
    LoadSeries train_part = s;
    train_part.values.resize(4 * 7 * 96);
    const StandardLoadProfile slp = build_slp(train_part);

    const NormStats ident{0.0, 1.0};
    const WindowedDataset ds = make_windows(s, 96, 48, ident);
    const double mse = evaluate(
        [&](std::span<const double>, std::int64_t origin) {
            return slp_forecast_values(slp, origin, 48);
        },
        ds, ident, s.start);
    CHECK(mse <= 1e-24);
}

TEST_CASE("slp requires four weeks of data") {
    LoadSeries s;
    s.start = kSynthStartUtc;
    s.step_minutes = 15;
    s.values.assign(20 * 96, 0.1);
    try {
        build_slp(s);
        FAIL("expected insufficient_data");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::insufficient_data);
    }
}

TEST_CASE("slp forecast rolls over day types at midnight") {
    StandardLoadProfile slp;
    for (int d = 0; d < 3; ++d)
        for (int q = 0; q < 96; ++q) slp.profile[d][q] = d * 1000.0 + q;

    // Friday 23:45 of the synth start week
    const std::int64_t friday_2345 = kSynthStartUtc + 4 * kSecondsPerDay + 23 * 3600 + 45 * 60;
    const auto fc = slp_forecast(slp, friday_2345, 2);
    CHECK(fc.values_kwh[0] == 95.0);          // last weekday slot
    CHECK(fc.values_kwh[1] == 1000.0);        // first saturday slot

    const auto monday = slp_forecast(slp, kSynthStartUtc, 96);
    for (int q = 0; q < 96; ++q) CHECK(monday.values_kwh[static_cast<std::size_t>(q)] == q);
}

TEST_CASE("evaluate scores a perfect and a constant forecaster") {
    Rng rng(31);
    LoadSeries s;
    s.start = kSynthStartUtc;
    s.step_minutes = 15;
    s.values.resize(80);
    for (auto& v : s.values) v = rng.uniform(0.0, 3.0);
    const NormStats st = compute_stats(s.values);
    const WindowedDataset ds = make_windows(s, 10, 4, st);

    const double perfect = evaluate(
        [&](std::span<const double>, std::int64_t origin) {
            // read the true future directly from the series
            std::vector<double> out;
            const std::size_t first = static_cast<std::size_t>((origin - s.start) / 900);
            for (std::size_t j = 0; j < 4; ++j) out.push_back(s.values[first + j]);
            return out;
        },
        ds, st, s.start);
    CHECK(perfect <= 1e-24);

    // constant forecaster at the mean of all target values
    double tmean = 0.0;
    std::size_t tcount = 0;
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (double z : ds.targets.row(i)) {
            tmean += denormalize_value(z, st);
            ++tcount;
        }
    tmean /= static_cast<double>(tcount);
    const double const_mse = evaluate(
        [&](std::span<const double>, std::int64_t) { return std::vector<double>(4, tmean); }, ds,
        st, s.start);

    double variance = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (double z : ds.targets.row(i)) {
            const double d = denormalize_value(z, st) - tmean;
            variance += d * d;
        }
    variance /= static_cast<double>(tcount);
    CHECK(const_mse == Catch::Approx(variance).epsilon(1e-12));
}

TEST_CASE("evaluate matches a naive accumulation oracle") {
    Rng rng(33);
    LoadSeries s;
    s.start = 0;
    s.step_minutes = 15;
    s.values.resize(60);
    for (auto& v : s.values) v = rng.uniform(0.5, 2.5);
    const NormStats st = compute_stats(s.values);
    const WindowedDataset ds = make_windows(s, 8, 3, st);

    // arbitrary deterministic forecaster: echo the last 3 window values
    const auto echo = [](std::span<const double> w, std::int64_t) {
        return std::vector<double>(w.end() - 3, w.end());
    };
    const double got = evaluate(echo, ds, st, s.start);

    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::vector<double> w = denormalize(ds.inputs.row(i), st);
        const std::vector<double> t = denormalize(ds.targets.row(i), st);
        const std::vector<double> pred(w.end() - 3, w.end());
        for (std::size_t j = 0; j < 3; ++j) {
            acc += (pred[j] - t[j]) * (pred[j] - t[j]);
            ++count;
        }
    }
    CHECK(got == Catch::Approx(acc / static_cast<double>(count)).epsilon(1e-12));
}

TEST_CASE("physical MSE equals sd^2 times normalized MSE") {
    Rng rng(35);
    LoadSeries s;
    s.start = 0;
    s.step_minutes = 15;
    s.values.resize(50);
    for (auto& v : s.values) v = rng.uniform(0.0, 5.0);
    const NormStats st = compute_stats(s.values);
    const WindowedDataset ds = make_windows(s, 6, 2, st);

    const auto last_value = [](std::span<const double> w, std::int64_t) {
        return std::vector<double>(2, w.back());
    };
    const double phys = evaluate(last_value, ds, st, s.start);

    // same forecaster scored in normalized space
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double zpred = ds.inputs.at(i, ds.inputs.cols - 1);
        for (double zt : ds.targets.row(i)) {
            acc += (zpred - zt) * (zpred - zt);
            ++count;
        }
    }
    const double norm = acc / static_cast<double>(count);
    CHECK(phys == Catch::Approx(st.sd * st.sd * norm).epsilon(1e-12));
}
