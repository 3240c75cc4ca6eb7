#include "rts/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "rts/error.hpp"

namespace rts {

using nlohmann::json;

std::optional<OutputFormat> format_from_string(std::string_view name) {
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    if (name == "both") return OutputFormat::Both;
    return std::nullopt;
}

std::string_view to_string(VisionMetric metric) {
    return metric == VisionMetric::Chebyshev ? "chebyshev" : "euclidean";
}

std::optional<VisionMetric> vision_metric_from_string(std::string_view name) {
    if (name == "chebyshev") return VisionMetric::Chebyshev;
    if (name == "euclidean") return VisionMetric::Euclidean;
    return std::nullopt;
}

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("unknown field \"" + key + "\" in " + where);
        }
    }
}

template <typename T>
T get_field(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field \"") + key + "\" in " + where +
                          " has the wrong type");
    }
}

void check_schema(const json& j, const std::string& where) {
    if (j.contains("schema")) {
        if (!j.at("schema").is_number_integer() || j.at("schema").get<int>() != 1) {
            throw ConfigError("unsupported schema version in " + where + " (expected 1)");
        }
    }
}

}  // namespace

json landscape_config_to_json(const LandscapeConfig& config) {
    json gaussians = json::array();
    for (const auto& g : config.gaussians) {
        gaussians.push_back({{"center", {g.center_x, g.center_y}},
                             {"amplitude", g.amplitude},
                             {"sigma", g.sigma}});
    }
    return {{"width", config.width},
            {"height", config.height},
            {"gaussians", gaussians},
            {"noise_amplitude", config.noise_amplitude},
            {"landscape_seed", config.landscape_seed}};
}

LandscapeConfig landscape_config_from_json(const json& j, const LandscapeConfig& base) {
    if (!j.is_object()) {
        throw ConfigError("landscape config must be a JSON object");
    }
    check_keys(j, {"width", "height", "gaussians", "noise_amplitude", "landscape_seed"},
               "landscape");
    LandscapeConfig config = base;
    config.width = get_field(j, "width", base.width, "landscape");
    config.height = get_field(j, "height", base.height, "landscape");
    config.noise_amplitude = get_field(j, "noise_amplitude", base.noise_amplitude, "landscape");
    config.landscape_seed = get_field(j, "landscape_seed", base.landscape_seed, "landscape");
    if (j.contains("gaussians")) {
        if (!j.at("gaussians").is_array()) {
            throw ConfigError("landscape.gaussians must be an array");
        }
        config.gaussians.clear();
        for (const auto& item : j.at("gaussians")) {
            check_keys(item, {"center", "amplitude", "sigma"}, "gaussian");
            GaussianSpec g;
            if (!item.contains("center") || !item.at("center").is_array() ||
                item.at("center").size() != 2) {
                throw ConfigError("gaussian center must be [x, y]");
            }
            g.center_x = item.at("center").at(0).get<double>();
            g.center_y = item.at("center").at(1).get<double>();
            g.amplitude = get_field(item, "amplitude", 0.0, "gaussian");
            g.sigma = get_field(item, "sigma", 1.0, "gaussian");
            config.gaussians.push_back(g);
        }
    }
    return config;
}

json sim_config_to_json(const SimConfig& config) {
    json population = json::array();
    for (const auto& group : config.population) {
        population.push_back(
            {{"kind", std::string(to_string(group.kind))}, {"count", group.count}});
    }
    return {{"schema", 1},
            {"landscape", landscape_config_to_json(config.landscape)},
            {"population", population},
            {"vision", config.vision},
            {"vision_metric", std::string(to_string(config.vision_metric))},
            {"metabolism_rate", config.metabolism_rate},
            {"kdr", config.kdr},
            {"retirement_age", config.retirement_age},
            {"initial_wealth", config.initial_wealth},
            {"survival_threshold", config.survival_threshold},
            {"max_ticks", config.max_ticks},
            {"run_seed", config.run_seed}};
}

SimConfig sim_config_from_json(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("run config must be a JSON object");
    }
    check_schema(j, "run config");
    check_keys(j,
               {"schema", "landscape", "population", "vision", "vision_metric",
                "metabolism_rate", "kdr", "retirement_age", "initial_wealth",
                "survival_threshold", "max_ticks", "run_seed"},
               "run config");
    SimConfig config = default_sim_config();
    if (j.contains("landscape")) {
        config.landscape = landscape_config_from_json(j.at("landscape"), config.landscape);
    }
    if (j.contains("population")) {
        if (!j.at("population").is_array()) {
            throw ConfigError("population must be an array of {kind, count}");
        }
        config.population.clear();
        for (const auto& item : j.at("population")) {
            check_keys(item, {"kind", "count"}, "population entry");
            const std::string name = get_field<std::string>(item, "kind", "", "population entry");
            const auto kind = strategy_from_string(name);
            if (!kind) {
                throw ConfigError("unknown strategy kind \"" + name + "\"");
            }
            config.population.push_back({*kind, get_field(item, "count", 0, "population entry")});
        }
    }
    config.vision = get_field(j, "vision", config.vision, "run config");
    if (j.contains("vision_metric")) {
        const auto name = j.at("vision_metric").get<std::string>();
        const auto metric = vision_metric_from_string(name);
        if (!metric) {
            throw ConfigError("vision_metric must be \"chebyshev\" or \"euclidean\"");
        }
        config.vision_metric = *metric;
    }
    config.metabolism_rate = get_field(j, "metabolism_rate", config.metabolism_rate, "run config");
    config.kdr = get_field(j, "kdr", config.kdr, "run config");
    config.retirement_age = get_field(j, "retirement_age", config.retirement_age, "run config");
    config.initial_wealth = get_field(j, "initial_wealth", config.initial_wealth, "run config");
    config.survival_threshold =
        get_field(j, "survival_threshold", config.survival_threshold, "run config");
    config.max_ticks = get_field(j, "max_ticks", config.max_ticks, "run config");
    config.run_seed = get_field(j, "run_seed", config.run_seed, "run config");
    return config;
}

json metrics_summary_to_json(const metrics::MetricsSummary& summary) {
    json kinds = json::object();
    for (StrategyKind kind : kAllStrategyKinds) {
        const auto k = static_cast<std::size_t>(kind_index(kind));
        if (summary.count_by_kind[k] == 0) {
            continue;
        }
        kinds[std::string(to_string(kind))] = {
            {"count", summary.count_by_kind[k]},
            {"mean_ica", summary.mean_ica_by_kind[k]},
            {"gini", summary.gini_by_kind[k]},
            {"survivors_final", summary.survivors_final_by_kind[k]},
            {"starved", summary.starved_by_kind[k]},
            {"retired", summary.retired_by_kind[k]},
            {"ica", summary.ica_values_by_kind[k]},
            {"survival_curve", summary.survival_curve_by_kind[k]}};
    }
    return {{"progress", summary.progress}, {"coverage", summary.coverage}, {"kinds", kinds}};
}

json run_result_to_json(const RunResult& result) {
    json ticks = json::array();
    for (const TickReport& report : result.ticks) {
        json departures = json::array();
        for (const auto& [id, cause] : report.departures) {
            departures.push_back({{"id", id}, {"cause", std::string(to_string(cause))}});
        }
        json survivors = json::object();
        for (StrategyKind kind : kAllStrategyKinds) {
            survivors[std::string(to_string(kind))] =
                report.survivors_by_kind[static_cast<std::size_t>(kind_index(kind))];
        }
        ticks.push_back({{"tick", report.tick},
                         {"survivors", survivors},
                         {"progress", report.progress},
                         {"coverage", report.coverage},
                         {"departures", departures}});
    }
    json agents = json::array();
    for (const Agent& agent : result.agents_final) {
        json entry = {{"id", agent.id},
                      {"kind", std::string(to_string(agent.kind))},
                      {"pos", {agent.pos.x, agent.pos.y}},
                      {"wealth", agent.wealth},
                      {"ica", agent.ica},
                      {"age", agent.age},
                      {"alive", agent.alive}};
        if (agent.departure) {
            entry["departure_cause"] = std::string(to_string(agent.departure->cause));
            entry["departure_tick"] = agent.departure->tick;
        }
        agents.push_back(entry);
    }
    return {{"schema", 1},
            {"config", sim_config_to_json(result.config)},
            {"landscape_initial_total", result.landscape_initial_total},
            {"landscape_final_total", result.landscape_final_total},
            {"summary", metrics_summary_to_json(metrics::summarize(result))},
            {"ticks", ticks},
            {"agents", agents}};
}

std::string ticks_csv(const RunResult& result) {
    std::string out =
        "tick,expert_alive,follower_alive,maverick_alive,conservative_alive,progress,coverage\n";
    for (const TickReport& report : result.ticks) {
        out += std::to_string(report.tick);
        for (StrategyKind kind : kAllStrategyKinds) {
            out += ',';
            out += std::to_string(
                report.survivors_by_kind[static_cast<std::size_t>(kind_index(kind))]);
        }
        out += ',';
        out += format_double(report.progress);
        out += ',';
        out += format_double(report.coverage);
        out += '\n';
    }
    return out;
}

std::string agents_csv(const RunResult& result) {
    std::string out = "id,kind,ica,final_wealth,departure_cause,departure_tick\n";
    for (const Agent& agent : result.agents_final) {
        out += std::to_string(agent.id);
        out += ',';
        out += to_string(agent.kind);
        out += ',';
        out += format_double(agent.ica);
        out += ',';
        out += format_double(agent.wealth);
        out += ',';
        out += agent.departure ? to_string(agent.departure->cause) : "none";
        out += ',';
        out += std::to_string(agent.departure ? agent.departure->tick : -1);
        out += '\n';
    }
    return out;
}

std::string summary_csv(const metrics::MetricsSummary& summary) {
    std::string out = "kind,count,mean_ica,gini,survivors_final\n";
    for (StrategyKind kind : kAllStrategyKinds) {
        const auto k = static_cast<std::size_t>(kind_index(kind));
        if (summary.count_by_kind[k] == 0) {
            continue;
        }
        out += to_string(kind);
        out += ',';
        out += std::to_string(summary.count_by_kind[k]);
        out += ',';
        out += format_double(summary.mean_ica_by_kind[k]);
        out += ',';
        out += format_double(summary.gini_by_kind[k]);
        out += ',';
        out += std::to_string(summary.survivors_final_by_kind[k]);
        out += '\n';
    }
    return out;
}

json parse_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " +
                          ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

void write_pgm(const Landscape& landscape, const std::filesystem::path& path) {
    const double scale = landscape.max_initial_significance();
    std::string body;
    body.reserve(static_cast<std::size_t>(landscape.patch_count()) + 32);
    body += "P5\n";
    body += std::to_string(landscape.width());
    body += ' ';
    body += std::to_string(landscape.height());
    body += "\n255\n";
    for (int y = 0; y < landscape.height(); ++y) {
        for (int x = 0; x < landscape.width(); ++x) {
            long v = 0;
            if (scale > 0.0) {
                v = std::lround(255.0 * landscape.significance_at({x, y}) / scale);
            }
            v = std::clamp(v, 0L, 255L);
            body += static_cast<char>(static_cast<unsigned char>(v));
        }
    }
    write_text_file(path, body);
}

void apply_overrides(json& j, const std::vector<std::string>& overrides) {
    for (const std::string& entry : overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("--set expects path=value, got \"" + entry + "\"");
        }
        std::string path = entry.substr(0, eq);
        const std::string raw = entry.substr(eq + 1);
        std::replace(path.begin(), path.end(), '.', '/');
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::parse_error&) {
            value = raw;  // bare strings stay strings
        }
        try {
            j[json::json_pointer("/" + path)] = value;
        } catch (const json::exception& e) {
            throw ConfigError("cannot apply override \"" + entry + "\": " + e.what());
        }
    }
}

}  // namespace rts
