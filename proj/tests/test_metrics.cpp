#include <stdexcept>

#include <doctest.h>

#include "oracles.hpp"
#include "rts/engine.hpp"
#include "rts/metrics.hpp"

using rts::SimConfig;
using rts::StrategyKind;
namespace metrics = rts::metrics;

TEST_CASE("progress is the consumed fraction") {
    CHECK(metrics::progress(1000.0, 1000.0) == 0.0);
    CHECK(metrics::progress(1000.0, 900.0) == doctest::Approx(0.1));
    CHECK(metrics::progress(0.0, 0.0) == 0.0);  // flat landscape convention
}

TEST_CASE("coverage counts visited patches") {
    rts::LandscapeConfig config;
    config.width = 10;
    config.height = 10;
    rts::Landscape ls(config);
    CHECK(metrics::coverage(ls) == 0.0);
    ls.mark_visited({0, 0});
    ls.mark_visited({0, 0});
    ls.mark_visited({5, 5});
    CHECK(metrics::coverage(ls) == doctest::Approx(0.02));
}

TEST_CASE("gini handles the textbook cases") {
    CHECK(metrics::gini(std::vector<double>{5, 5, 5, 5}) == 0.0);
    CHECK(metrics::gini(std::vector<double>{0, 0, 0, 10}) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(metrics::gini(std::vector<double>{0, 0, 0, 0}) == 0.0);  // zero mean convention
    CHECK(metrics::gini(std::vector<double>{3.0}) == 0.0);
    CHECK_THROWS_AS(metrics::gini(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("gini agrees with the pairwise double sum and is scale invariant") {
    rts::Rng rng(555);
    for (int i = 0; i < 60; ++i) {
        std::vector<double> values;
        const std::size_t n = 1 + rng.uniform_index(40);
        for (std::size_t j = 0; j < n; ++j) {
            values.push_back(rng.uniform_index(4) == 0 ? 0.0 : rng.uniform_real(0.0, 20.0));
        }
        const double g = metrics::gini(values);
        CHECK(g == doctest::Approx(oracles::gini_double_sum(values)).epsilon(1e-9));
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);

        std::vector<double> scaled = values;
        for (double& v : scaled) {
            v *= 7.5;
        }
        CHECK(metrics::gini(scaled) == doctest::Approx(g).epsilon(1e-9));

        std::vector<double> shuffled = values;
        rng.shuffle(shuffled);
        CHECK(metrics::gini(shuffled) == doctest::Approx(g).epsilon(1e-12));
    }
}

TEST_CASE("ica distribution is per kind in id order and conserves mass") {
    SimConfig config = rts::default_sim_config();
    config.max_ticks = 30;
    const rts::RunResult result = rts::run(config);

    double across_kinds = 0.0;
    for (StrategyKind kind : rts::kAllStrategyKinds) {
        const auto values = metrics::ica_distribution(result.agents_final, kind);
        CHECK(values.size() == 50);
        for (double v : values) {
            across_kinds += v;
        }
    }
    const double depleted = result.landscape_initial_total - result.landscape_final_total;
    CHECK(across_kinds == doctest::Approx(depleted).epsilon(1e-6));
    CHECK(across_kinds ==
          doctest::Approx(result.ticks.back().progress * result.landscape_initial_total)
              .epsilon(1e-6));
}

TEST_CASE("an agent with no gains contributes a zero entry") {
    SimConfig config = rts::default_sim_config();
    config.landscape.gaussians.clear();
    config.landscape.noise_amplitude = 0.0;
    config.population = {{StrategyKind::Maverick, 4}};
    config.max_ticks = 5;
    const rts::RunResult result = rts::run(config);
    const auto values = metrics::ica_distribution(result.agents_final, StrategyKind::Maverick);
    REQUIRE(values.size() == 4);
    for (double v : values) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("survival curve starts at the population and is non-increasing") {
    SimConfig config = rts::default_sim_config();
    config.max_ticks = 50;
    config.retirement_age = 30;
    const rts::RunResult result = rts::run(config);
    for (StrategyKind kind : rts::kAllStrategyKinds) {
        const auto curve = metrics::survival_curve(result, kind);
        REQUIRE(!curve.empty());
        CHECK(curve[0] == 50);
        for (std::size_t t = 1; t < curve.size(); ++t) {
            CHECK(curve[t] <= curve[t - 1]);
        }
    }
}

TEST_CASE("zero metabolism keeps the curve flat until the retirement cliff") {
    SimConfig config = rts::default_sim_config();
    config.population = {{StrategyKind::Conservative, 20}};
    config.metabolism_rate = 0.0;
    config.retirement_age = 8;
    config.max_ticks = 20;
    const rts::RunResult result = rts::run(config);
    const auto curve = metrics::survival_curve(result, StrategyKind::Conservative);
    REQUIRE(curve.size() == 9);  // run stops when everyone retires at tick 8
    for (std::size_t t = 0; t < 8; ++t) {
        CHECK(curve[t] == 20);
    }
    CHECK(curve[8] == 0);
}

TEST_CASE("all-starve runs step to zero at the closed-form tick") {
    SimConfig config = rts::default_sim_config();
    config.landscape.gaussians.clear();
    config.landscape.noise_amplitude = 0.0;
    config.population = {{StrategyKind::Follower, 12}};
    config.initial_wealth = 10.0;
    config.metabolism_rate = 0.2;
    config.survival_threshold = 1.0;
    config.max_ticks = 40;
    const auto schedule = oracles::decay_schedule(10.0, 0.2, 1.0, config.retirement_age, 40);
    const rts::RunResult result = rts::run(config);
    const auto curve = metrics::survival_curve(result, StrategyKind::Follower);
    REQUIRE(curve.size() == static_cast<std::size_t>(schedule.departure_tick) + 1);
    for (int t = 0; t < schedule.departure_tick; ++t) {
        CHECK(curve[static_cast<std::size_t>(t)] == 12);
    }
    CHECK(curve.back() == 0);
}

TEST_CASE("summarize rolls up per-kind statistics") {
    SimConfig config = rts::default_sim_config();
    config.population = {{StrategyKind::Expert, 30}, {StrategyKind::Maverick, 20}};
    config.max_ticks = 25;
    const rts::RunResult result = rts::run(config);
    const auto summary = metrics::summarize(result);

    CHECK(summary.progress == result.ticks.back().progress);
    CHECK(summary.coverage == result.ticks.back().coverage);
    CHECK(summary.count_by_kind[rts::kind_index(StrategyKind::Expert)] == 30);
    CHECK(summary.count_by_kind[rts::kind_index(StrategyKind::Maverick)] == 20);
    CHECK(summary.count_by_kind[rts::kind_index(StrategyKind::Follower)] == 0);
    CHECK(summary.ica_values_by_kind[rts::kind_index(StrategyKind::Follower)].empty());

    const auto k = rts::kind_index(StrategyKind::Expert);
    double mean = 0.0;
    for (double v : summary.ica_values_by_kind[k]) {
        mean += v;
    }
    mean /= 30.0;
    CHECK(summary.mean_ica_by_kind[k] == doctest::Approx(mean).epsilon(1e-12));
    CHECK(summary.survival_curve_by_kind[k].size() == result.ticks.size());
    const int departed = summary.starved_by_kind[k] + summary.retired_by_kind[k];
    CHECK(departed + summary.survivors_final_by_kind[k] == 30);
}
