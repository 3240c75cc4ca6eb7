#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rts/engine.hpp"
#include "rts/metrics.hpp"
#include "rts/serialize.hpp"

namespace rts {

/// One sweep dimension. Supported paths: population_total, population_mix,
/// vision, metabolism_rate, kdr.
struct SweepAxis {
    std::string path;
    std::vector<nlohmann::json> values;
};

/// A base config plus sweep axes and replication count. The run set is the
/// cross product of the axis values (first axis outermost) times the
/// replications; run i executes with run_seed = base_seed + i. The base
/// landscape (including its seed) is held fixed across the whole sweep.
struct ExperimentSpec {
    std::string name = "sweep";
    SimConfig base;
    std::vector<SweepAxis> axes;
    int replications = 30;
    std::uint64_t base_seed = 1000;
};

struct SweepRow {
    std::vector<nlohmann::json> axis_values;
    int replication = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;  ///< set when ok is false; the run never aborts the sweep
    metrics::MetricsSummary summary;
};

/// Mean/sd across the successful replications of one axis point, per kind.
struct AxisAggregate {
    std::vector<nlohmann::json> axis_values;
    StrategyKind kind = StrategyKind::Expert;
    int replications_ok = 0;
    double mean_ica = 0.0;
    double sd_ica = 0.0;
    double gini_mean = 0.0;
    double coverage_mean = 0.0;
    double progress_mean = 0.0;
    double survivors_final_mean = 0.0;
};

struct SweepResult {
    ExperimentSpec spec;
    std::vector<SweepRow> rows;  ///< axis-major order, replication fastest
    std::vector<AxisAggregate> aggregates;
};

struct SweepOptions {
    int jobs = 0;  ///< worker threads; 0 means all available cores
    std::optional<std::filesystem::path> per_run_json_dir;
    std::optional<std::filesystem::path> snapshot_dir;
    std::vector<int> snapshot_ticks;  ///< PGM per run at these ticks, when snapshot_dir is set
};

/// Applies one axis value to a config. population_total redistributes the
/// total over the existing groups proportionally (largest remainder, earlier
/// groups win ties); population_mix accepts a kind name (everyone becomes that
/// kind, total preserved), a {kind: count} object, or a [{kind, count}] array.
SimConfig apply_axis(SimConfig config, const std::string& path, const nlohmann::json& value);

/// Executes every (axis point, replication) run. Runs are independent and
/// execute concurrently; row order and content are deterministic regardless
/// of the parallelism degree. Individual run failures are recorded per row.
SweepResult run_sweep(const ExperimentSpec& spec, const SweepOptions& options = {});

/// The five predefined studies: single-coverage, single-ica, mixed-vision,
/// mixed-metabolism, mixed-kdr.
std::vector<ExperimentSpec> builtin_scenarios();

std::optional<ExperimentSpec> scenario_by_name(std::string_view name);

nlohmann::json experiment_spec_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_spec_from_json(const nlohmann::json& j);

nlohmann::json sweep_result_to_json(const SweepResult& result);

/// Columns: one per axis path, then replication, seed, kind, count, mean_ica,
/// gini, survivors_final, starved, retired, progress, coverage, status. One
/// row per (run, present kind); failed runs emit a single row with the error
/// in the status column.
std::string sweep_rows_csv(const SweepResult& result);

/// Columns: axis_name, axis_value, kind, mean_ica, sd_ica, gini_mean,
/// coverage_mean, progress_mean, survivors_final_mean. Multi-axis names and
/// values are joined with '|'.
std::string sweep_aggregates_csv(const SweepResult& result);

/// Per-agent ICA distribution per (axis point, kind), pooled across
/// replications: 20 equal-width bins over [0, max], edges included.
/// Columns: axis_name, axis_value, kind, bin_lo, bin_hi, count.
std::string sweep_ica_histograms_csv(const SweepResult& result);

/// Writes rows.csv / aggregates.csv (csv or both), sweep.json (json or both)
/// and resolved-config.json into out_dir.
void write_report(const SweepResult& result, const std::filesystem::path& out_dir,
                  OutputFormat format);

}  // namespace rts
