#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rts/landscape.hpp"
#include "rts/rng.hpp"
#include "rts/strategy.hpp"

namespace rts {

enum class DepartureCause { Starvation, Retirement };

std::string_view to_string(DepartureCause cause);

struct Departure {
    DepartureCause cause;
    int tick = 0;
};

/// One scholar. `wealth` is the decaying collected significance; `ica` is the
/// lifetime sum of gains and never decays.
struct Agent {
    int id = 0;
    StrategyKind kind = StrategyKind::Expert;
    Position pos;
    double wealth = 0.0;
    double ica = 0.0;
    int age = 0;
    int vision = 1;
    bool alive = true;
    std::optional<Departure> departure;
};

struct PopulationGroup {
    StrategyKind kind = StrategyKind::Expert;
    int count = 0;
};

/// Full parameterization of one seeded run.
struct SimConfig {
    LandscapeConfig landscape;
    std::vector<PopulationGroup> population;
    int vision = 3;
    VisionMetric vision_metric = VisionMetric::Chebyshev;
    double metabolism_rate = 0.2;   ///< lambda, wealth decay per tick, in [0, 1)
    double kdr = 0.12;              ///< alpha, fraction of patch significance gained, in (0, 1]
    int retirement_age = 150;       ///< forced departure once age reaches this
    double initial_wealth = 5.0;    ///< S0
    double survival_threshold = 0.5;
    int max_ticks = 100;
    std::uint64_t run_seed = 1;
};

/// The default setup: 50x50 grid with two unequal peaks, 200 agents split
/// equally across the four strategies, 100 ticks.
SimConfig default_sim_config();

/// Throws ConfigError when any field is out of range. Runs validate before
/// allocating anything.
void validate_config(const SimConfig& config);

struct TickReport {
    int tick = 0;
    std::array<int, 4> survivors_by_kind{};  ///< indexed by kind_index()
    double progress = 0.0;
    double coverage = 0.0;
    std::vector<std::pair<int, DepartureCause>> departures;  ///< (agent id, cause)
};

/// Everything one seeded run produces. Reproducible bit-for-bit from the
/// config alone.
struct RunResult {
    SimConfig config;
    std::vector<TickReport> ticks;  ///< index 0 is the pre-step census
    std::vector<Agent> agents_final;
    std::array<std::vector<double>, 4> ica_by_kind;
    double landscape_initial_total = 0.0;
    double landscape_final_total = 0.0;
};

/// One live run. Owns its landscape, population and rng stream; strictly
/// single-threaded. Tests may step it manually and inspect the state.
class SimState {
public:
    /// Generates the landscape, then spawns agents with wealth S0 and age 0 on
    /// patches drawn uniformly (with replacement) from the run stream, one
    /// row-major patch index per agent in id order. Ids run 0..n-1 grouped by
    /// strategy in config order. Spawn marks the patch visited and occupied;
    /// nothing is collected until the first step.
    explicit SimState(const SimConfig& config);

    /// Advances one tick: shuffle the living into a fresh activation order,
    /// let each agent decide on the current world state and move, collect
    /// alpha * h at its patch, then decay wealth by (1 - lambda) and age
    /// everyone, then process departures (starvation before retirement).
    TickReport step();

    /// Census before any step (tick 0).
    TickReport initial_report() const;

    bool all_departed() const { return living_ == 0; }
    int tick() const { return tick_; }
    const Landscape& landscape() const { return landscape_; }
    const std::vector<Agent>& agents() const { return agents_; }
    const SimConfig& config() const { return config_; }

private:
    void build_world_view(const Agent& agent);
    TickReport make_report(std::vector<std::pair<int, DepartureCause>> departures) const;
    void check_tick_invariants() const;

    SimConfig config_;
    Landscape landscape_;
    std::vector<Agent> agents_;
    Rng rng_;
    int tick_ = 0;
    int living_ = 0;
    // scratch buffers, reused across ticks
    std::vector<int> order_;
    WorldView view_;
};

/// Steps a fresh SimState max_ticks times (stopping early once everyone has
/// departed) and assembles the result. `on_tick`, when set, fires after
/// initialization and after every step.
RunResult run(const SimConfig& config,
              const std::function<void(const SimState&)>& on_tick = {});

}  // namespace rts
