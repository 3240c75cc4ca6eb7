#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "rts/error.hpp"
#include "rts/experiments.hpp"
#include "rts/serialize.hpp"

using nlohmann::json;
using rts::ExperimentSpec;
using rts::SimConfig;
using rts::StrategyKind;
using rts::SweepOptions;

namespace {

// small, fast base config for harness tests
SimConfig tiny_config() {
    SimConfig config = rts::default_sim_config();
    config.landscape.width = 12;
    config.landscape.height = 12;
    config.landscape.gaussians = {{6.0, 6.0, 5.0, 3.0}};
    config.population = {{StrategyKind::Expert, 2},
                         {StrategyKind::Follower, 2},
                         {StrategyKind::Maverick, 2},
                         {StrategyKind::Conservative, 2}};
    config.max_ticks = 6;
    return config;
}

}  // namespace

TEST_CASE("axis application covers the supported parameter paths") {
    SimConfig base = tiny_config();
    CHECK(rts::apply_axis(base, "vision", json(7)).vision == 7);
    CHECK(rts::apply_axis(base, "metabolism_rate", json(0.8)).metabolism_rate == 0.8);
    CHECK(rts::apply_axis(base, "kdr", json(0.5)).kdr == 0.5);
    CHECK_THROWS_AS(rts::apply_axis(base, "gravity", json(1)), rts::ConfigError);
    CHECK_THROWS_AS(rts::apply_axis(base, "vision", json("high")), rts::ConfigError);
}

TEST_CASE("population_total redistributes by largest remainder") {
    SimConfig base = tiny_config();  // 2/2/2/2
    const auto even = rts::apply_axis(base, "population_total", json(200)).population;
    for (const auto& group : even) {
        CHECK(group.count == 50);
    }
    // 50 over four equal groups: 12.5 each, first two groups win the remainder
    const auto uneven = rts::apply_axis(base, "population_total", json(50)).population;
    CHECK(uneven[0].count == 13);
    CHECK(uneven[1].count == 13);
    CHECK(uneven[2].count == 12);
    CHECK(uneven[3].count == 12);

    SimConfig solo = tiny_config();
    solo.population = {{StrategyKind::Maverick, 10}};
    CHECK(rts::apply_axis(solo, "population_total", json(123)).population[0].count == 123);
}

TEST_CASE("population_mix accepts a kind name, an object, or an array") {
    SimConfig base = tiny_config();  // total 8
    const auto named = rts::apply_axis(base, "population_mix", json("maverick")).population;
    REQUIRE(named.size() == 1);
    CHECK(named[0].kind == StrategyKind::Maverick);
    CHECK(named[0].count == 8);

    const auto object =
        rts::apply_axis(base, "population_mix", json{{"expert", 5}, {"follower", 7}}).population;
    REQUIRE(object.size() == 2);
    CHECK(object[0].kind == StrategyKind::Expert);
    CHECK(object[0].count == 5);
    CHECK(object[1].kind == StrategyKind::Follower);
    CHECK(object[1].count == 7);

    const json array = json::array({{{"kind", "conservative"}, {"count", 3}}});
    const auto listed = rts::apply_axis(base, "population_mix", array).population;
    REQUIRE(listed.size() == 1);
    CHECK(listed[0].kind == StrategyKind::Conservative);
    CHECK(listed[0].count == 3);

    CHECK_THROWS_AS(rts::apply_axis(base, "population_mix", json("wizard")), rts::ConfigError);
}

TEST_CASE("sweep enumerates the cross product with stable seeds") {
    ExperimentSpec spec;
    spec.base = tiny_config();
    spec.axes = {{"vision", {1, 3}}, {"kdr", {0.05, 0.2, 0.5}}};
    spec.replications = 4;
    spec.base_seed = 9000;
    const auto result = rts::run_sweep(spec, SweepOptions{.jobs = 2});
    REQUIRE(result.rows.size() == 2 * 3 * 4);
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& row = result.rows[i];
        CHECK(row.ok);
        CHECK(row.seed == 9000 + i);
        CHECK(row.replication == static_cast<int>(i % 4));
        // first axis outermost, replication fastest
        const std::size_t point = i / 4;
        CHECK(row.axis_values[0] == spec.axes[0].values[point / 3]);
        CHECK(row.axis_values[1] == spec.axes[1].values[point % 3]);
    }
    // one aggregate entry per (point, kind)
    CHECK(result.aggregates.size() == 6 * 4);
}

TEST_CASE("a single-point single-replication sweep equals a direct run") {
    ExperimentSpec spec;
    spec.base = tiny_config();
    spec.replications = 1;
    spec.base_seed = 777;
    const auto sweep = rts::run_sweep(spec);
    REQUIRE(sweep.rows.size() == 1);

    SimConfig direct = spec.base;
    direct.run_seed = 777;
    const auto expected = rts::metrics::summarize(rts::run(direct));
    CHECK(rts::metrics_summary_to_json(sweep.rows[0].summary).dump() ==
          rts::metrics_summary_to_json(expected).dump());
}

TEST_CASE("sweep output is independent of the parallelism degree") {
    ExperimentSpec spec;
    spec.base = tiny_config();
    spec.axes = {{"metabolism_rate", {0.1, 0.6}}};
    spec.replications = 6;
    spec.base_seed = 31;
    const auto serial = rts::run_sweep(spec, SweepOptions{.jobs = 1});
    const auto parallel = rts::run_sweep(spec, SweepOptions{.jobs = 4});
    CHECK(rts::sweep_result_to_json(serial).dump() == rts::sweep_result_to_json(parallel).dump());
    CHECK(rts::sweep_rows_csv(serial) == rts::sweep_rows_csv(parallel));
    CHECK(rts::sweep_aggregates_csv(serial) == rts::sweep_aggregates_csv(parallel));
}

TEST_CASE("individual run failures are recorded per row without aborting") {
    ExperimentSpec spec;
    spec.base = tiny_config();
    spec.axes = {{"vision", {1, 0}}};  // vision 0 is invalid
    spec.replications = 2;
    const auto result = rts::run_sweep(spec);
    REQUIRE(result.rows.size() == 4);
    CHECK(result.rows[0].ok);
    CHECK(result.rows[1].ok);
    CHECK(!result.rows[2].ok);
    CHECK(!result.rows[3].ok);
    CHECK(result.rows[2].error.find("vision") != std::string::npos);
    // aggregates exist only for the healthy axis point
    for (const auto& agg : result.aggregates) {
        CHECK(agg.axis_values[0] == json(1));
    }
    const std::string csv = rts::sweep_rows_csv(result);
    CHECK(csv.find("vision must be >= 1") != std::string::npos);
}

TEST_CASE("builtin scenarios match the published study grid") {
    const auto scenarios = rts::builtin_scenarios();
    REQUIRE(scenarios.size() == 5);
    CHECK(scenarios[0].name == "single-coverage");
    CHECK(scenarios[1].name == "single-ica");
    CHECK(scenarios[2].name == "mixed-vision");
    CHECK(scenarios[3].name == "mixed-metabolism");
    CHECK(scenarios[4].name == "mixed-kdr");

    for (const auto& spec : scenarios) {
        CHECK(spec.replications == 30);
        int total = 0;
        for (const auto& group : spec.base.population) {
            CHECK(group.count == 50);
            total += group.count;
        }
        CHECK(total == 200);  // 200 agents, equally assigned
        CHECK(spec.base.max_ticks == 100);
    }

    CHECK(scenarios[0].axes[0].path == "population_mix");
    CHECK(scenarios[0].axes[0].values.size() == 4);
    CHECK(scenarios[0].axes[1].path == "population_total");
    CHECK(scenarios[0].axes[1].values ==
          std::vector<json>{50, 100, 150, 200, 250, 300});
    CHECK(scenarios[2].axes[0].values == std::vector<json>{1, 10});
    CHECK(scenarios[3].axes[0].values == std::vector<json>{0.2, 0.8});
    CHECK(scenarios[4].axes[0].values == std::vector<json>{0.05, 0.5});

    CHECK(rts::scenario_by_name("mixed-kdr").has_value());
    CHECK(!rts::scenario_by_name("nope").has_value());
}

TEST_CASE("sim config json round-trips and rejects junk") {
    const SimConfig config = tiny_config();
    const json j = rts::sim_config_to_json(config);
    CHECK(j.at("schema") == 1);
    const SimConfig back = rts::sim_config_from_json(j);
    CHECK(rts::sim_config_to_json(back).dump() == j.dump());

    json bad = j;
    bad["metabolizm_rate"] = 0.3;
    CHECK_THROWS_AS(rts::sim_config_from_json(bad), rts::ConfigError);

    json wrong_schema = j;
    wrong_schema["schema"] = 2;
    CHECK_THROWS_AS(rts::sim_config_from_json(wrong_schema), rts::ConfigError);

    json bad_kind = j;
    bad_kind["population"][0]["kind"] = "guru";
    CHECK_THROWS_AS(rts::sim_config_from_json(bad_kind), rts::ConfigError);
}

TEST_CASE("partial configs overlay onto the defaults") {
    const SimConfig config = rts::sim_config_from_json(json{{"vision", 9}});
    CHECK(config.vision == 9);
    CHECK(config.landscape.width == 50);
    CHECK(config.population.size() == 4);

    const SimConfig nested =
        rts::sim_config_from_json(json{{"landscape", {{"noise_amplitude", 0.0}}}});
    CHECK(nested.landscape.noise_amplitude == 0.0);
    CHECK(nested.landscape.gaussians.size() == 2);
}

TEST_CASE("experiment spec json round-trips") {
    ExperimentSpec spec;
    spec.name = "demo";
    spec.base = tiny_config();
    spec.axes = {{"vision", {1, 10}}, {"population_mix", {"expert", "maverick"}}};
    spec.replications = 3;
    spec.base_seed = 123456789;
    const json j = rts::experiment_spec_to_json(spec);
    const ExperimentSpec back = rts::experiment_spec_from_json(j);
    CHECK(rts::experiment_spec_to_json(back).dump() == j.dump());
    CHECK(back.axes[1].values[0] == json("expert"));
}

TEST_CASE("set overrides reach nested fields and parse json values") {
    json j = rts::sim_config_to_json(rts::default_sim_config());
    rts::apply_overrides(j, {"vision=7", "landscape.noise_amplitude=0.5",
                             "population=[{\"kind\":\"expert\",\"count\":3}]"});
    const SimConfig config = rts::sim_config_from_json(j);
    CHECK(config.vision == 7);
    CHECK(config.landscape.noise_amplitude == 0.5);
    REQUIRE(config.population.size() == 1);
    CHECK(config.population[0].count == 3);

    CHECK_THROWS_AS(rts::apply_overrides(j, {"novalue"}), rts::ConfigError);
}

TEST_CASE("csv outputs carry the pinned headers") {
    SimConfig config = tiny_config();
    config.max_ticks = 3;
    const auto result = rts::run(config);
    const std::string ticks = rts::ticks_csv(result);
    CHECK(ticks.rfind("tick,expert_alive,follower_alive,maverick_alive,conservative_alive,"
                      "progress,coverage\n",
                      0) == 0);
    const std::string agents = rts::agents_csv(result);
    CHECK(agents.rfind("id,kind,ica,final_wealth,departure_cause,departure_tick\n", 0) == 0);
    // one line per agent plus header
    CHECK(std::count(agents.begin(), agents.end(), '\n') == 9);

    ExperimentSpec spec;
    spec.base = config;
    spec.axes = {{"vision", {1, 2}}};
    spec.replications = 1;
    const auto sweep = rts::run_sweep(spec);
    CHECK(rts::sweep_aggregates_csv(sweep).rfind(
              "axis_name,axis_value,kind,mean_ica,sd_ica,gini_mean,coverage_mean,"
              "progress_mean,survivors_final_mean\n",
              0) == 0);
    CHECK(rts::sweep_rows_csv(sweep).rfind(
              "vision,replication,seed,kind,count,mean_ica,gini,survivors_final,starved,"
              "retired,progress,coverage,status\n",
              0) == 0);
}

TEST_CASE("ica histograms pool replications into 20 bins with edges") {
    ExperimentSpec spec;
    spec.base = tiny_config();
    spec.base.population = {{StrategyKind::Expert, 5}};
    spec.axes = {{"kdr", {0.1, 0.3}}};
    spec.replications = 3;
    const auto result = rts::run_sweep(spec);
    const std::string csv = rts::sweep_ica_histograms_csv(result);
    REQUIRE(csv.rfind("axis_name,axis_value,kind,bin_lo,bin_hi,count\n", 0) == 0);
    // 2 axis points x 1 kind x 20 bins
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 20);
    // pooled counts per point equal population x replications
    long total = 0;
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        total += std::stol(line.substr(line.rfind(',') + 1));
    }
    CHECK(total == 2 * 3 * 5);
}

TEST_CASE("pgm snapshots scale against the initial maximum") {
    rts::LandscapeConfig config;
    config.width = 3;
    config.height = 2;
    config.gaussians = {{0.0, 0.0, 10.0, 0.4}};
    rts::Landscape ls(config);
    const auto path = std::filesystem::temp_directory_path() / "rts_test_snapshot.pgm";
    rts::write_pgm(ls, path);
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(content.rfind("P5\n3 2\n255\n", 0) == 0);
    const std::string pixels = content.substr(11);
    REQUIRE(pixels.size() == 6);
    CHECK(static_cast<unsigned char>(pixels[0]) == 255);  // the peak patch
    std::filesystem::remove(path);
}

TEST_CASE("format_double emits shortest round-trip forms") {
    CHECK(rts::format_double(0.1) == "0.1");
    CHECK(rts::format_double(0.0) == "0");
    CHECK(rts::format_double(2.5) == "2.5");
    CHECK(rts::csv_escape("plain") == "plain");
    CHECK(rts::csv_escape("a,b") == "\"a,b\"");
    CHECK(rts::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}
