#include <catch2/catch_amalgamated.hpp>

#include "loadcast/ingest.hpp"
#include "loadcast/synth.hpp"

using namespace loadcast;

TEST_CASE("degenerate config is a constant baseline") {
    SynthConfig cfg;
    cfg.n_households = 1;
    cfg.days = 3;
    cfg.noise_sd_kw = 0.0;
    cfg.spike_rate_per_day = 0.0;
    cfg.morning_peak_kw = 0.0;
    cfg.evening_peak_kw = 0.0;
    const LoadSeries s = generate_household(cfg, 0);
    REQUIRE(s.values.size() == 3u * 96u);
    for (double v : s.values) CHECK(v == cfg.base_kw * 0.25);
}

TEST_CASE("generation is deterministic in (config, index)") {
    SynthConfig cfg;
    cfg.n_households = 3;
    cfg.days = 5;
    cfg.seed = 99;
    const LoadSeries a = generate_household(cfg, 1);
    const LoadSeries b = generate_household(cfg, 1);
    CHECK(a.values == b.values);
    const LoadSeries c = generate_household(cfg, 2);
    CHECK(a.values != c.values);

    cfg.seed = 100;
    const LoadSeries d = generate_household(cfg, 1);
    CHECK(a.values != d.values);
}

TEST_CASE("all generated values are non-negative") {
    SynthConfig cfg;
    cfg.n_households = 4;
    cfg.days = 14;
    cfg.noise_sd_kw = 0.5; // exaggerated noise to stress the clip
    for (const LoadSeries& s : generate_fleet(cfg)) {
        for (double v : s.values) CHECK(v >= 0.0);
    }
}

TEST_CASE("household mean stays within the regression band") {
    SynthConfig cfg;
    cfg.n_households = 1;
    cfg.days = 28;
    const LoadSeries s = generate_household(cfg, 0);
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= static_cast<double>(s.values.size());
    const double base_slot_kwh = cfg.base_kw * 0.25;
    CHECK(mean >= 0.25 * base_slot_kwh);
    CHECK(mean <= 10.0 * base_slot_kwh);
}

TEST_CASE("aggregation smooths volatility across cohort sizes") {
    SynthConfig cfg;
    cfg.n_households = 350;
    cfg.days = 14;
    cfg.seed = 1;
    const std::vector<LoadSeries> fleet = generate_fleet(cfg);

    const double cv_single = coefficient_of_variation(fleet[0].values);
    const std::vector<LoadSeries> first40(fleet.begin(), fleet.begin() + 40);
    const double cv_40 = coefficient_of_variation(aggregate(first40).values);
    const double cv_350 = coefficient_of_variation(aggregate(fleet).values);

    CHECK(cv_350 < cv_40);
    CHECK(cv_40 < cv_single);
}

TEST_CASE("a one-household fleet is a singleton") {
    SynthConfig cfg;
    cfg.n_households = 1;
    cfg.days = 2;
    const auto fleet = generate_fleet(cfg);
    REQUIRE(fleet.size() == 1);
    CHECK(fleet[0].values == generate_household(cfg, 0).values);
}

TEST_CASE("fleet starts aligned on the configured Monday") {
    SynthConfig cfg;
    cfg.n_households = 2;
    cfg.days = 2;
    const auto fleet = generate_fleet(cfg);
    for (const auto& s : fleet) {
        CHECK(s.start == kSynthStartUtc);
        CHECK(s.step_minutes == 15);
    }
    CHECK(weekday_utc(kSynthStartUtc) == 1); // Monday
}

TEST_CASE("bad configs are rejected") {
    SynthConfig cfg;
    cfg.days = 1;
    CHECK_THROWS_AS(cfg.validate(), Error);
    SynthConfig cfg2;
    cfg2.base_kw = 0.0;
    CHECK_THROWS_AS(cfg2.validate(), Error);
    SynthConfig cfg3;
    CHECK_THROWS_AS(generate_household(cfg3, cfg3.n_households), Error);
}
