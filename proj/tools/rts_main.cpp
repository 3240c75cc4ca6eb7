#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rts/error.hpp"
#include "rts/experiments.hpp"
#include "rts/serialize.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir = ".";
    int jobs = 0;
    std::string format = "both";
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_jobs) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--set", opts.sets, "Override a config field, path=value (repeatable)");
    cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Override the seed (run_seed / base_seed)");
    cmd->add_option("--format", opts.format, "Output format: json|csv|both")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
    if (with_jobs) {
        cmd->add_option("--jobs", opts.jobs, "Worker threads (0 = all cores)")
            ->capture_default_str();
    }
}

rts::OutputFormat parse_format(const std::string& name) {
    const auto format = rts::format_from_string(name);
    if (!format) {
        throw rts::ConfigError("unknown format \"" + name + "\"");
    }
    return *format;
}

rts::SimConfig load_sim_config(const CommonOpts& opts) {
    nlohmann::json j = opts.config_path.empty()
                           ? rts::sim_config_to_json(rts::default_sim_config())
                           : rts::parse_json_file(opts.config_path);
    rts::apply_overrides(j, opts.sets);
    rts::SimConfig config = rts::sim_config_from_json(j);
    if (opts.seed) {
        config.run_seed = *opts.seed;
    }
    return config;
}

void write_run_outputs(const rts::RunResult& result, const std::filesystem::path& out,
                       rts::OutputFormat format) {
    rts::write_text_file(out / "resolved-config.json",
                         rts::sim_config_to_json(result.config).dump(2) + "\n");
    if (format == rts::OutputFormat::Json || format == rts::OutputFormat::Both) {
        rts::write_text_file(out / "run.json", rts::run_result_to_json(result).dump(2) + "\n");
    }
    if (format == rts::OutputFormat::Csv || format == rts::OutputFormat::Both) {
        rts::write_text_file(out / "ticks.csv", rts::ticks_csv(result));
        rts::write_text_file(out / "agents.csv", rts::agents_csv(result));
        rts::write_text_file(out / "summary.csv",
                             rts::summary_csv(rts::metrics::summarize(result)));
    }
}

int cmd_run(const CommonOpts& opts, const std::vector<int>& snapshot_ticks) {
    const rts::SimConfig config = load_sim_config(opts);
    const std::filesystem::path out(opts.out_dir);
    std::function<void(const rts::SimState&)> on_tick;
    if (!snapshot_ticks.empty()) {
        on_tick = [&](const rts::SimState& state) {
            if (std::find(snapshot_ticks.begin(), snapshot_ticks.end(), state.tick()) !=
                snapshot_ticks.end()) {
                rts::write_pgm(state.landscape(),
                               out / ("landscape_t" + std::to_string(state.tick()) + ".pgm"));
            }
        };
    }
    const rts::RunResult result = rts::run(config, on_tick);
    write_run_outputs(result, out, parse_format(opts.format));
    const auto& last = result.ticks.back();
    int survivors = 0;
    for (int s : last.survivors_by_kind) {
        survivors += s;
    }
    std::cout << "run finished: ticks=" << last.tick << " survivors=" << survivors
              << " progress=" << rts::format_double(last.progress)
              << " coverage=" << rts::format_double(last.coverage) << "\n";
    return rts::exit_code::ok;
}

int run_and_report(rts::ExperimentSpec spec, const CommonOpts& opts, bool per_run_json,
                   const std::vector<int>& snapshot_ticks) {
    if (opts.seed) {
        spec.base_seed = *opts.seed;
    }
    const std::filesystem::path out(opts.out_dir);
    rts::SweepOptions sweep_opts;
    sweep_opts.jobs = opts.jobs;
    if (per_run_json) {
        sweep_opts.per_run_json_dir = out / "runs";
    }
    if (!snapshot_ticks.empty()) {
        sweep_opts.snapshot_dir = out / "snapshots";
        sweep_opts.snapshot_ticks = snapshot_ticks;
    }
    const rts::SweepResult result = rts::run_sweep(spec, sweep_opts);
    rts::write_report(result, out, parse_format(opts.format));
    std::size_t failed = 0;
    for (const auto& row : result.rows) {
        if (!row.ok) {
            ++failed;
        }
    }
    std::cout << "sweep \"" << spec.name << "\": " << result.rows.size() << " runs, " << failed
              << " failed, report in " << out.string() << "\n";
    if (failed > 0) {
        for (const auto& row : result.rows) {
            if (!row.ok) {
                std::cerr << "  seed " << row.seed << ": " << row.error << "\n";
            }
        }
    }
    return rts::exit_code::ok;
}

int cmd_sweep(const CommonOpts& opts, bool per_run_json, const std::vector<int>& snapshot_ticks) {
    if (opts.config_path.empty()) {
        throw rts::ConfigError("sweep requires --config with an experiment spec");
    }
    nlohmann::json j = rts::parse_json_file(opts.config_path);
    rts::apply_overrides(j, opts.sets);
    return run_and_report(rts::experiment_spec_from_json(j), opts, per_run_json, snapshot_ticks);
}

int cmd_scenario(const std::string& name, bool list, const CommonOpts& opts, bool per_run_json) {
    if (list) {
        for (const auto& spec : rts::builtin_scenarios()) {
            std::cout << spec.name << "\n";
        }
        return rts::exit_code::ok;
    }
    auto spec = rts::scenario_by_name(name);
    if (!spec) {
        throw rts::ConfigError("unknown scenario \"" + name + "\" (see scenario --list)");
    }
    nlohmann::json j = rts::experiment_spec_to_json(*spec);
    rts::apply_overrides(j, opts.sets);
    return run_and_report(rts::experiment_spec_from_json(j), opts, per_run_json, {});
}

int cmd_render(const CommonOpts& opts, std::vector<int> ticks) {
    const rts::SimConfig config = load_sim_config(opts);
    if (ticks.empty()) {
        ticks.push_back(0);
    }
    const std::filesystem::path out(opts.out_dir);
    rts::write_text_file(out / "resolved-config.json",
                         rts::sim_config_to_json(config).dump(2) + "\n");
    int written = 0;
    rts::run(config, [&](const rts::SimState& state) {
        if (std::find(ticks.begin(), ticks.end(), state.tick()) != ticks.end()) {
            rts::write_pgm(state.landscape(),
                           out / ("landscape_t" + std::to_string(state.tick()) + ".pgm"));
            ++written;
        }
    });
    std::cout << "wrote " << written << " snapshot(s) to " << out.string() << "\n";
    return rts::exit_code::ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rts - scholar topic-mobility simulator and sweep harness"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    std::vector<int> run_snapshots;
    CLI::App* run_cmd = app.add_subcommand("run", "Execute one seeded run");
    add_common(run_cmd, run_opts, false);
    run_cmd->add_option("--snapshots", run_snapshots, "Write landscape PGMs at these ticks")
        ->delimiter(',');

    CommonOpts sweep_opts;
    bool sweep_per_run_json = false;
    std::vector<int> sweep_snapshots;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Execute an experiment spec");
    add_common(sweep_cmd, sweep_opts, true);
    sweep_cmd->add_flag("--per-run-json", sweep_per_run_json, "Write one JSON file per run");
    sweep_cmd->add_option("--snapshots", sweep_snapshots, "Write landscape PGMs at these ticks")
        ->delimiter(',');

    CommonOpts scenario_opts;
    bool scenario_per_run_json = false;
    bool scenario_list = false;
    std::string scenario_name;
    CLI::App* scenario_cmd = app.add_subcommand("scenario", "Execute a builtin study");
    scenario_cmd->add_option("name", scenario_name, "Scenario name");
    scenario_cmd->add_flag("--list", scenario_list, "List available scenarios");
    add_common(scenario_cmd, scenario_opts, true);
    scenario_cmd->add_flag("--per-run-json", scenario_per_run_json,
                           "Write one JSON file per run");

    CommonOpts render_opts;
    std::vector<int> render_ticks;
    CLI::App* render_cmd = app.add_subcommand("render", "Write landscape snapshots");
    add_common(render_cmd, render_opts, false);
    render_cmd->add_option("--ticks", render_ticks, "Ticks to snapshot (default 0)")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return rts::exit_code::config;
    }

    try {
        if (*run_cmd) {
            return cmd_run(run_opts, run_snapshots);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sweep_opts, sweep_per_run_json, sweep_snapshots);
        }
        if (*scenario_cmd) {
            if (!scenario_list && scenario_name.empty()) {
                throw rts::ConfigError("scenario requires a name (see scenario --list)");
            }
            return cmd_scenario(scenario_name, scenario_list, scenario_opts,
                                scenario_per_run_json);
        }
        if (*render_cmd) {
            return cmd_render(render_opts, render_ticks);
        }
    } catch (const rts::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return rts::exit_code::config;
    } catch (const rts::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return rts::exit_code::io;
    } catch (const rts::InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return rts::exit_code::invariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rts::exit_code::ok;
}
