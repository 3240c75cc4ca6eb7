#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rts/engine.hpp"
#include "rts/metrics.hpp"

namespace rts {

enum class OutputFormat { Json, Csv, Both };

std::optional<OutputFormat> format_from_string(std::string_view name);

std::string_view to_string(VisionMetric metric);
std::optional<VisionMetric> vision_metric_from_string(std::string_view name);

/// Shortest round-trip decimal form; stable across runs.
std::string format_double(double value);

/// Quotes a CSV field only when it needs it.
std::string csv_escape(std::string_view field);

// --- JSON config schema (versioned, "schema": 1) ---------------------------
// Reading overlays the given JSON onto defaults, so files may specify any
// subset of fields. Unknown keys and type mismatches raise ConfigError.

nlohmann::json sim_config_to_json(const SimConfig& config);
SimConfig sim_config_from_json(const nlohmann::json& j);

nlohmann::json landscape_config_to_json(const LandscapeConfig& config);
LandscapeConfig landscape_config_from_json(const nlohmann::json& j, const LandscapeConfig& base);

// --- results ----------------------------------------------------------------

nlohmann::json metrics_summary_to_json(const metrics::MetricsSummary& summary);
nlohmann::json run_result_to_json(const RunResult& result);

/// Columns: tick, expert_alive, follower_alive, maverick_alive,
/// conservative_alive, progress, coverage.
std::string ticks_csv(const RunResult& result);

/// Columns: id, kind, ica, final_wealth, departure_cause, departure_tick.
/// Living agents have cause "none" and tick -1.
std::string agents_csv(const RunResult& result);

/// One row per present kind: kind, count, mean_ica, gini, survivors_final.
std::string summary_csv(const metrics::MetricsSummary& summary);

// --- files -------------------------------------------------------------------

/// Parses a JSON file; IoError when unreadable, ConfigError on bad JSON.
nlohmann::json parse_json_file(const std::filesystem::path& path);

/// Creates parent directories as needed; IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// 8-bit binary PGM (P5), one pixel per patch, row-major, with
/// value = round(255 * h / max initial h).
void write_pgm(const Landscape& landscape, const std::filesystem::path& path);

/// Applies `--set path=value` overrides onto a config JSON. Paths are dotted
/// (e.g. landscape.noise_amplitude); values are parsed as JSON when possible
/// and treated as strings otherwise.
void apply_overrides(nlohmann::json& j, const std::vector<std::string>& overrides);

}  // namespace rts
