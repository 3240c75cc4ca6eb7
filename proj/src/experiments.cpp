#include "rts/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

#include "rts/error.hpp"

namespace rts {

using nlohmann::json;

namespace {

int population_total(const SimConfig& config) {
    int total = 0;
    for (const auto& group : config.population) {
        total += group.count;
    }
    return total;
}

// Largest-remainder apportionment of `total` over the existing mix.
void redistribute_population(SimConfig& config, int total) {
    const int old_total = population_total(config);
    if (old_total < 1) {
        throw ConfigError("population_total needs a nonempty base population");
    }
    const std::size_t n = config.population.size();
    std::vector<double> remainder(n);
    int assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double exact =
            static_cast<double>(total) * config.population[i].count / old_total;
        const int floor_count = static_cast<int>(exact);
        config.population[i].count = floor_count;
        remainder[i] = exact - floor_count;
        assigned += floor_count;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&remainder](std::size_t a, std::size_t b) {
                         return remainder[a] > remainder[b];
                     });
    for (int i = 0; i < total - assigned; ++i) {
        ++config.population[order[static_cast<std::size_t>(i)]].count;
    }
}

std::vector<PopulationGroup> parse_mix(const json& value, int current_total) {
    std::vector<PopulationGroup> mix;
    if (value.is_string()) {
        const auto kind = strategy_from_string(value.get<std::string>());
        if (!kind) {
            throw ConfigError("population_mix: unknown strategy kind \"" +
                              value.get<std::string>() + "\"");
        }
        mix.push_back({*kind, current_total});
        return mix;
    }
    if (value.is_object()) {
        for (StrategyKind kind : kAllStrategyKinds) {
            const std::string name(to_string(kind));
            if (value.contains(name)) {
                mix.push_back({kind, value.at(name).get<int>()});
            }
        }
        if (mix.size() != value.size()) {
            throw ConfigError("population_mix object has unknown strategy keys");
        }
        return mix;
    }
    if (value.is_array()) {
        for (const auto& item : value) {
            const auto kind = strategy_from_string(item.at("kind").get<std::string>());
            if (!kind) {
                throw ConfigError("population_mix: unknown strategy kind");
            }
            mix.push_back({*kind, item.at("count").get<int>()});
        }
        return mix;
    }
    throw ConfigError("population_mix must be a kind name, object or array");
}

std::string render_axis_value(const json& value) {
    return value.is_string() ? value.get<std::string>() : value.dump();
}

}  // namespace

SimConfig apply_axis(SimConfig config, const std::string& path, const json& value) {
    try {
        if (path == "vision") {
            config.vision = value.get<int>();
        } else if (path == "metabolism_rate") {
            config.metabolism_rate = value.get<double>();
        } else if (path == "kdr") {
            config.kdr = value.get<double>();
        } else if (path == "population_total") {
            redistribute_population(config, value.get<int>());
        } else if (path == "population_mix") {
            config.population = parse_mix(value, population_total(config));
        } else {
            throw ConfigError("unsupported sweep axis \"" + path + "\"");
        }
    } catch (const json::exception& e) {
        throw ConfigError("axis \"" + path + "\": bad value " + value.dump() + ": " + e.what());
    }
    return config;
}

namespace {

std::size_t axis_point_count(const ExperimentSpec& spec) {
    std::size_t points = 1;
    for (const auto& axis : spec.axes) {
        points *= axis.values.size();
    }
    return points;
}

// First axis outermost: point = ((i0 * s1) + i1) * s2 + i2 ...
std::vector<std::size_t> decode_point(const ExperimentSpec& spec, std::size_t point) {
    std::vector<std::size_t> idx(spec.axes.size());
    for (std::size_t a = spec.axes.size(); a > 0; --a) {
        const std::size_t size = spec.axes[a - 1].values.size();
        idx[a - 1] = point % size;
        point /= size;
    }
    return idx;
}

std::string run_file_stem(std::size_t flat_index) {
    std::ostringstream name;
    name << "run-" << std::setw(5) << std::setfill('0') << flat_index;
    return name.str();
}

SweepRow execute_row(const ExperimentSpec& spec, const SweepOptions& options,
                     std::size_t flat_index) {
    const std::size_t reps = static_cast<std::size_t>(spec.replications);
    const std::size_t point = flat_index / reps;
    const auto idx = decode_point(spec, point);

    SweepRow row;
    row.replication = static_cast<int>(flat_index % reps);
    row.seed = spec.base_seed + flat_index;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        row.axis_values.push_back(spec.axes[a].values[idx[a]]);
    }
    try {
        SimConfig config = spec.base;
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            config = apply_axis(std::move(config), spec.axes[a].path, spec.axes[a].values[idx[a]]);
        }
        config.run_seed = row.seed;

        std::function<void(const SimState&)> on_tick;
        if (!options.snapshot_ticks.empty() && options.snapshot_dir) {
            const auto dir = *options.snapshot_dir;
            const auto stem = run_file_stem(flat_index);
            const auto ticks = options.snapshot_ticks;
            on_tick = [dir, stem, ticks](const SimState& state) {
                if (std::find(ticks.begin(), ticks.end(), state.tick()) != ticks.end()) {
                    write_pgm(state.landscape(),
                              dir / (stem + "_landscape_t" + std::to_string(state.tick()) +
                                     ".pgm"));
                }
            };
        }
        const RunResult result = run(config, on_tick);
        if (options.per_run_json_dir) {
            write_text_file(*options.per_run_json_dir / (run_file_stem(flat_index) + ".json"),
                            run_result_to_json(result).dump(2) + "\n");
        }
        row.summary = metrics::summarize(result);
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
    return row;
}

double mean_of(const std::vector<double>& values) {
    if (values.empty()) {
        return 0.0;
    }
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

double sample_sd(const std::vector<double>& values) {
    if (values.size() < 2) {
        return 0.0;
    }
    const double m = mean_of(values);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - m) * (v - m);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::vector<AxisAggregate> aggregate(const ExperimentSpec& spec,
                                     const std::vector<SweepRow>& rows) {
    std::vector<AxisAggregate> out;
    const std::size_t reps = static_cast<std::size_t>(spec.replications);
    const std::size_t points = axis_point_count(spec);
    for (std::size_t p = 0; p < points; ++p) {
        std::vector<const SweepRow*> ok_rows;
        for (std::size_t r = p * reps; r < (p + 1) * reps; ++r) {
            if (rows[r].ok) {
                ok_rows.push_back(&rows[r]);
            }
        }
        if (ok_rows.empty()) {
            continue;
        }
        for (StrategyKind kind : kAllStrategyKinds) {
            const auto k = static_cast<std::size_t>(kind_index(kind));
            if (ok_rows.front()->summary.count_by_kind[k] == 0) {
                continue;
            }
            std::vector<double> mean_icas, ginis, coverages, progresses, survivors;
            for (const SweepRow* row : ok_rows) {
                mean_icas.push_back(row->summary.mean_ica_by_kind[k]);
                ginis.push_back(row->summary.gini_by_kind[k]);
                coverages.push_back(row->summary.coverage);
                progresses.push_back(row->summary.progress);
                survivors.push_back(row->summary.survivors_final_by_kind[k]);
            }
            AxisAggregate agg;
            agg.axis_values = ok_rows.front()->axis_values;
            agg.kind = kind;
            agg.replications_ok = static_cast<int>(ok_rows.size());
            agg.mean_ica = mean_of(mean_icas);
            agg.sd_ica = sample_sd(mean_icas);
            agg.gini_mean = mean_of(ginis);
            agg.coverage_mean = mean_of(coverages);
            agg.progress_mean = mean_of(progresses);
            agg.survivors_final_mean = mean_of(survivors);
            out.push_back(std::move(agg));
        }
    }
    return out;
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec, const SweepOptions& options) {
    if (spec.replications < 1) {
        throw ConfigError("replications must be >= 1");
    }
    for (const auto& axis : spec.axes) {
        if (axis.values.empty()) {
            throw ConfigError("sweep axis \"" + axis.path + "\" has no values");
        }
    }
    const std::size_t total = axis_point_count(spec) * static_cast<std::size_t>(spec.replications);

    SweepResult result;
    result.spec = spec;
    result.rows.resize(total);

    unsigned jobs = options.jobs > 0 ? static_cast<unsigned>(options.jobs)
                                     : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));

    if (jobs <= 1) {
        for (std::size_t i = 0; i < total; ++i) {
            result.rows[i] = execute_row(spec, options, i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= total) {
                        return;
                    }
                    result.rows[i] = execute_row(spec, options, i);
                }
            });
        }
        for (auto& worker : workers) {
            worker.join();
        }
    }

    result.aggregates = aggregate(spec, result.rows);
    return result;
}

std::vector<ExperimentSpec> builtin_scenarios() {
    const json kinds = json::array({"expert", "follower", "maverick", "conservative"});
    std::vector<ExperimentSpec> specs;

    ExperimentSpec single_coverage;
    single_coverage.name = "single-coverage";
    single_coverage.base = default_sim_config();
    single_coverage.axes = {{"population_mix", {kinds.begin(), kinds.end()}},
                            {"population_total", {50, 100, 150, 200, 250, 300}}};
    single_coverage.base_seed = 101000;
    specs.push_back(single_coverage);

    ExperimentSpec single_ica;
    single_ica.name = "single-ica";
    single_ica.base = default_sim_config();
    single_ica.axes = {{"population_mix", {kinds.begin(), kinds.end()}}};
    single_ica.base_seed = 102000;
    specs.push_back(single_ica);

    ExperimentSpec mixed_vision;
    mixed_vision.name = "mixed-vision";
    mixed_vision.base = default_sim_config();
    mixed_vision.axes = {{"vision", {1, 10}}};
    mixed_vision.base_seed = 103000;
    specs.push_back(mixed_vision);

    ExperimentSpec mixed_metabolism;
    mixed_metabolism.name = "mixed-metabolism";
    mixed_metabolism.base = default_sim_config();
    mixed_metabolism.axes = {{"metabolism_rate", {0.2, 0.8}}};
    mixed_metabolism.base_seed = 104000;
    specs.push_back(mixed_metabolism);

    ExperimentSpec mixed_kdr;
    mixed_kdr.name = "mixed-kdr";
    mixed_kdr.base = default_sim_config();
    mixed_kdr.axes = {{"kdr", {0.05, 0.5}}};
    mixed_kdr.base_seed = 105000;
    specs.push_back(mixed_kdr);

    return specs;
}

std::optional<ExperimentSpec> scenario_by_name(std::string_view name) {
    for (auto& spec : builtin_scenarios()) {
        if (spec.name == name) {
            return spec;
        }
    }
    return std::nullopt;
}

json experiment_spec_to_json(const ExperimentSpec& spec) {
    json axes = json::array();
    for (const auto& axis : spec.axes) {
        axes.push_back({{"path", axis.path}, {"values", axis.values}});
    }
    return {{"schema", 1},
            {"name", spec.name},
            {"base", sim_config_to_json(spec.base)},
            {"axes", axes},
            {"replications", spec.replications},
            {"base_seed", spec.base_seed}};
}

ExperimentSpec experiment_spec_from_json(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("experiment spec must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        static const std::vector<std::string> allowed = {"schema", "name",         "base",
                                                         "axes",   "replications", "base_seed"};
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("unknown field \"" + key + "\" in experiment spec");
        }
    }
    if (j.contains("schema") &&
        (!j.at("schema").is_number_integer() || j.at("schema").get<int>() != 1)) {
        throw ConfigError("unsupported schema version in experiment spec (expected 1)");
    }
    ExperimentSpec spec;
    spec.base = default_sim_config();
    if (j.contains("name")) {
        spec.name = j.at("name").get<std::string>();
    }
    if (j.contains("base")) {
        spec.base = sim_config_from_json(j.at("base"));
    }
    if (j.contains("axes")) {
        for (const auto& item : j.at("axes")) {
            SweepAxis axis;
            axis.path = item.at("path").get<std::string>();
            for (const auto& value : item.at("values")) {
                axis.values.push_back(value);
            }
            spec.axes.push_back(std::move(axis));
        }
    }
    if (j.contains("replications")) {
        spec.replications = j.at("replications").get<int>();
    }
    if (j.contains("base_seed")) {
        spec.base_seed = j.at("base_seed").get<std::uint64_t>();
    }
    return spec;
}

json sweep_result_to_json(const SweepResult& result) {
    json rows = json::array();
    for (const SweepRow& row : result.rows) {
        json entry = {{"axis_values", row.axis_values},
                      {"replication", row.replication},
                      {"seed", row.seed},
                      {"ok", row.ok}};
        if (row.ok) {
            entry["summary"] = metrics_summary_to_json(row.summary);
        } else {
            entry["error"] = row.error;
        }
        rows.push_back(entry);
    }
    json aggregates = json::array();
    for (const AxisAggregate& agg : result.aggregates) {
        aggregates.push_back({{"axis_values", agg.axis_values},
                              {"kind", std::string(to_string(agg.kind))},
                              {"replications_ok", agg.replications_ok},
                              {"mean_ica", agg.mean_ica},
                              {"sd_ica", agg.sd_ica},
                              {"gini_mean", agg.gini_mean},
                              {"coverage_mean", agg.coverage_mean},
                              {"progress_mean", agg.progress_mean},
                              {"survivors_final_mean", agg.survivors_final_mean}});
    }
    return {{"schema", 1},
            {"spec", experiment_spec_to_json(result.spec)},
            {"rows", rows},
            {"aggregates", aggregates}};
}

std::string sweep_rows_csv(const SweepResult& result) {
    std::string out;
    for (const auto& axis : result.spec.axes) {
        out += csv_escape(axis.path);
        out += ',';
    }
    out +=
        "replication,seed,kind,count,mean_ica,gini,survivors_final,starved,retired,"
        "progress,coverage,status\n";
    for (const SweepRow& row : result.rows) {
        std::string prefix;
        for (const auto& value : row.axis_values) {
            prefix += csv_escape(render_axis_value(value));
            prefix += ',';
        }
        prefix += std::to_string(row.replication);
        prefix += ',';
        prefix += std::to_string(row.seed);
        prefix += ',';
        if (!row.ok) {
            out += prefix + "-,,,,,,,," + csv_escape(row.error) + "\n";
            continue;
        }
        for (StrategyKind kind : kAllStrategyKinds) {
            const auto k = static_cast<std::size_t>(kind_index(kind));
            if (row.summary.count_by_kind[k] == 0) {
                continue;
            }
            out += prefix;
            out += to_string(kind);
            out += ',';
            out += std::to_string(row.summary.count_by_kind[k]);
            out += ',';
            out += format_double(row.summary.mean_ica_by_kind[k]);
            out += ',';
            out += format_double(row.summary.gini_by_kind[k]);
            out += ',';
            out += std::to_string(row.summary.survivors_final_by_kind[k]);
            out += ',';
            out += std::to_string(row.summary.starved_by_kind[k]);
            out += ',';
            out += std::to_string(row.summary.retired_by_kind[k]);
            out += ',';
            out += format_double(row.summary.progress);
            out += ',';
            out += format_double(row.summary.coverage);
            out += ",ok\n";
        }
    }
    return out;
}

std::string sweep_aggregates_csv(const SweepResult& result) {
    std::string axis_name;
    for (std::size_t a = 0; a < result.spec.axes.size(); ++a) {
        if (a > 0) {
            axis_name += '|';
        }
        axis_name += result.spec.axes[a].path;
    }
    std::string out =
        "axis_name,axis_value,kind,mean_ica,sd_ica,gini_mean,coverage_mean,progress_mean,"
        "survivors_final_mean\n";
    for (const AxisAggregate& agg : result.aggregates) {
        std::string axis_value;
        for (std::size_t a = 0; a < agg.axis_values.size(); ++a) {
            if (a > 0) {
                axis_value += '|';
            }
            axis_value += render_axis_value(agg.axis_values[a]);
        }
        out += csv_escape(axis_name);
        out += ',';
        out += csv_escape(axis_value);
        out += ',';
        out += to_string(agg.kind);
        out += ',';
        out += format_double(agg.mean_ica);
        out += ',';
        out += format_double(agg.sd_ica);
        out += ',';
        out += format_double(agg.gini_mean);
        out += ',';
        out += format_double(agg.coverage_mean);
        out += ',';
        out += format_double(agg.progress_mean);
        out += ',';
        out += format_double(agg.survivors_final_mean);
        out += '\n';
    }
    return out;
}

std::string sweep_ica_histograms_csv(const SweepResult& result) {
    constexpr int kBins = 20;
    std::string axis_name;
    for (std::size_t a = 0; a < result.spec.axes.size(); ++a) {
        if (a > 0) {
            axis_name += '|';
        }
        axis_name += result.spec.axes[a].path;
    }
    std::string out = "axis_name,axis_value,kind,bin_lo,bin_hi,count\n";
    const auto reps = static_cast<std::size_t>(result.spec.replications);
    const std::size_t points = result.rows.size() / std::max<std::size_t>(reps, 1);
    for (std::size_t p = 0; p < points; ++p) {
        std::string axis_value;
        bool have_values = false;
        std::array<std::vector<double>, 4> pooled;
        for (std::size_t r = p * reps; r < (p + 1) * reps; ++r) {
            const SweepRow& row = result.rows[r];
            if (!row.ok) {
                continue;
            }
            if (!have_values) {
                for (std::size_t a = 0; a < row.axis_values.size(); ++a) {
                    if (a > 0) {
                        axis_value += '|';
                    }
                    axis_value += render_axis_value(row.axis_values[a]);
                }
                have_values = true;
            }
            for (std::size_t k = 0; k < 4; ++k) {
                const auto& values = row.summary.ica_values_by_kind[k];
                pooled[k].insert(pooled[k].end(), values.begin(), values.end());
            }
        }
        if (!have_values) {
            continue;
        }
        for (StrategyKind kind : kAllStrategyKinds) {
            const auto k = static_cast<std::size_t>(kind_index(kind));
            if (pooled[k].empty()) {
                continue;
            }
            const double max = *std::max_element(pooled[k].begin(), pooled[k].end());
            const double width = max / kBins;
            std::array<long, kBins> counts{};
            for (double v : pooled[k]) {
                int bin = width > 0.0 ? static_cast<int>(v / width) : 0;
                bin = std::clamp(bin, 0, kBins - 1);
                ++counts[static_cast<std::size_t>(bin)];
            }
            for (int b = 0; b < kBins; ++b) {
                out += csv_escape(axis_name);
                out += ',';
                out += csv_escape(axis_value);
                out += ',';
                out += to_string(kind);
                out += ',';
                out += format_double(width * b);
                out += ',';
                out += format_double(b + 1 == kBins ? max : width * (b + 1));
                out += ',';
                out += std::to_string(counts[static_cast<std::size_t>(b)]);
                out += '\n';
            }
        }
    }
    return out;
}

void write_report(const SweepResult& result, const std::filesystem::path& out_dir,
                  OutputFormat format) {
    write_text_file(out_dir / "resolved-config.json",
                    experiment_spec_to_json(result.spec).dump(2) + "\n");
    if (format == OutputFormat::Csv || format == OutputFormat::Both) {
        write_text_file(out_dir / "rows.csv", sweep_rows_csv(result));
        write_text_file(out_dir / "aggregates.csv", sweep_aggregates_csv(result));
        write_text_file(out_dir / "histograms.csv", sweep_ica_histograms_csv(result));
    }
    if (format == OutputFormat::Json || format == OutputFormat::Both) {
        write_text_file(out_dir / "sweep.json", sweep_result_to_json(result).dump(2) + "\n");
    }
}

}  // namespace rts
