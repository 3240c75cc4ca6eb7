#include "rts/engine.hpp"

#include <sstream>
#include <string>

#include "rts/error.hpp"
#include "rts/metrics.hpp"

namespace rts {

std::string_view to_string(DepartureCause cause) {
    return cause == DepartureCause::Starvation ? "starvation" : "retirement";
}

SimConfig default_sim_config() {
    SimConfig config;
    config.landscape.width = 50;
    config.landscape.height = 50;
    // Two unequal peaks over a noisy plain. Calibrated so that the four
    // strategies separate: the peaks are rich but small enough for crowds to
    // exhaust, and the plain sustains a lone forager but not a stacked one.
    config.landscape.gaussians = {
        {12.0, 12.0, 30.0, 3.0},
        {38.0, 38.0, 24.0, 4.0},
    };
    config.landscape.noise_amplitude = 5.0;
    config.landscape.landscape_seed = 42;
    config.population = {
        {StrategyKind::Expert, 50},
        {StrategyKind::Follower, 50},
        {StrategyKind::Maverick, 50},
        {StrategyKind::Conservative, 50},
    };
    return config;
}

void validate_config(const SimConfig& config) {
    if (config.landscape.width < 1 || config.landscape.height < 1) {
        throw ConfigError("landscape dimensions must be >= 1");
    }
    for (const auto& g : config.landscape.gaussians) {
        if (g.sigma <= 0.0) {
            throw ConfigError("gaussian sigma must be > 0");
        }
        if (g.amplitude < 0.0) {
            throw ConfigError("gaussian amplitude must be >= 0");
        }
    }
    if (config.landscape.noise_amplitude < 0.0) {
        throw ConfigError("noise_amplitude must be >= 0");
    }
    int total = 0;
    for (const auto& group : config.population) {
        if (group.count < 0) {
            throw ConfigError("population counts must be >= 0");
        }
        total += group.count;
    }
    if (total < 1) {
        throw ConfigError("population must contain at least one agent");
    }
    if (config.vision < 1) {
        throw ConfigError("vision must be >= 1");
    }
    if (config.metabolism_rate < 0.0 || config.metabolism_rate >= 1.0) {
        throw ConfigError("metabolism_rate must be in [0, 1)");
    }
    if (config.kdr <= 0.0 || config.kdr > 1.0) {
        throw ConfigError("kdr must be in (0, 1]");
    }
    if (config.retirement_age < 1) {
        throw ConfigError("retirement_age must be >= 1");
    }
    if (config.initial_wealth < 0.0) {
        throw ConfigError("initial_wealth must be >= 0");
    }
    if (config.survival_threshold <= 0.0) {
        throw ConfigError("survival_threshold must be > 0");
    }
    if (config.max_ticks < 0) {
        throw ConfigError("max_ticks must be >= 0");
    }
}

namespace {

SimConfig validated(SimConfig config) {
    validate_config(config);
    return config;
}

}  // namespace

SimState::SimState(const SimConfig& config)
    : config_(validated(config)), landscape_(config_.landscape), rng_(config_.run_seed) {
    int total = 0;
    for (const auto& group : config_.population) {
        total += group.count;
    }
    agents_.reserve(static_cast<std::size_t>(total));
    const int w = landscape_.width();
    int id = 0;
    for (const auto& group : config_.population) {
        for (int i = 0; i < group.count; ++i, ++id) {
            const std::size_t patch = rng_.uniform_index(static_cast<std::size_t>(
                landscape_.patch_count()));
            const Position pos{static_cast<int>(patch) % w, static_cast<int>(patch) / w};
            Agent agent;
            agent.id = id;
            agent.kind = group.kind;
            agent.pos = pos;
            agent.wealth = config_.initial_wealth;
            agent.vision = config_.vision;
            agents_.push_back(agent);
            landscape_.mark_visited(pos);
            landscape_.adjust_occupancy(std::nullopt, pos);
        }
    }
    living_ = total;
}

void SimState::build_world_view(const Agent& agent) {
    view_.current = PatchView{agent.pos, landscape_.significance_at(agent.pos),
                              landscape_.visited_at(agent.pos),
                              landscape_.occupancy_at(agent.pos) > 1};
    view_.candidates.clear();
    landscape_.for_each_neighbor(
        agent.pos, agent.vision, config_.vision_metric, [this](Position q) {
            view_.candidates.push_back(PatchView{q, landscape_.significance_at(q),
                                                 landscape_.visited_at(q),
                                                 landscape_.occupancy_at(q) >= 1});
        });
}

TickReport SimState::step() {
    ++tick_;

    // 1. fresh activation order over the living
    order_.clear();
    for (const Agent& a : agents_) {
        if (a.alive) {
            order_.push_back(a.id);
        }
    }
    rng_.shuffle(order_);

    // 2. sequential activation: each agent sees the world as left by earlier
    //    movers, then collects at its (possibly new) patch
    for (int id : order_) {
        Agent& agent = agents_[static_cast<std::size_t>(id)];
        build_world_view(agent);
        const Decision decision = decide(agent.kind, view_, rng_);
        if (decision) {
            landscape_.adjust_occupancy(agent.pos, *decision);
            landscape_.mark_visited(*decision);
            agent.pos = *decision;
        }
        const double gain = landscape_.extract(agent.pos, config_.kdr);
        agent.wealth += gain;
        agent.ica += gain;
    }

    // 3. metabolism and aging
    const double keep = 1.0 - config_.metabolism_rate;
    for (Agent& agent : agents_) {
        if (agent.alive) {
            agent.wealth *= keep;
            agent.age += 1;
        }
    }

    // 4. departures; starvation takes precedence over retirement
    std::vector<std::pair<int, DepartureCause>> departures;
    for (Agent& agent : agents_) {
        if (!agent.alive) {
            continue;
        }
        std::optional<DepartureCause> cause;
        if (agent.wealth < config_.survival_threshold) {
            cause = DepartureCause::Starvation;
        } else if (agent.age >= config_.retirement_age) {
            cause = DepartureCause::Retirement;
        }
        if (cause) {
            agent.alive = false;
            agent.departure = Departure{*cause, tick_};
            landscape_.adjust_occupancy(agent.pos, std::nullopt);
            --living_;
            departures.emplace_back(agent.id, *cause);
        }
    }

    check_tick_invariants();
    return make_report(std::move(departures));
}

void SimState::check_tick_invariants() const {
    if (landscape_.total_occupancy() != living_) {
        std::ostringstream msg;
        msg << "tick " << tick_ << ": occupancy total " << landscape_.total_occupancy()
            << " != living agents " << living_;
        throw InvariantError(msg.str());
    }
    for (const Agent& agent : agents_) {
        if (agent.wealth < 0.0) {
            std::ostringstream msg;
            msg << "tick " << tick_ << ": agent " << agent.id << " wealth " << agent.wealth
                << " < 0";
            throw InvariantError(msg.str());
        }
    }
}

TickReport SimState::make_report(std::vector<std::pair<int, DepartureCause>> departures) const {
    TickReport report;
    report.tick = tick_;
    for (const Agent& agent : agents_) {
        if (agent.alive) {
            ++report.survivors_by_kind[static_cast<std::size_t>(kind_index(agent.kind))];
        }
    }
    report.progress = metrics::progress(landscape_.initial_total(),
                                        landscape_.total_significance());
    report.coverage = metrics::coverage(landscape_);
    report.departures = std::move(departures);
    return report;
}

TickReport SimState::initial_report() const {
    return make_report({});
}

RunResult run(const SimConfig& config, const std::function<void(const SimState&)>& on_tick) {
    SimState state(config);
    RunResult result;
    result.config = config;
    result.landscape_initial_total = state.landscape().initial_total();
    result.ticks.reserve(static_cast<std::size_t>(config.max_ticks) + 1);
    result.ticks.push_back(state.initial_report());
    if (on_tick) {
        on_tick(state);
    }
    for (int t = 1; t <= config.max_ticks; ++t) {
        result.ticks.push_back(state.step());
        if (on_tick) {
            on_tick(state);
        }
        if (state.all_departed()) {
            break;
        }
    }
    result.agents_final = state.agents();
    for (const Agent& agent : result.agents_final) {
        result.ica_by_kind[static_cast<std::size_t>(kind_index(agent.kind))].push_back(agent.ica);
    }
    result.landscape_final_total = state.landscape().total_significance();
    return result;
}

}  // namespace rts
