#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "rts/landscape.hpp"
#include "rts/rng.hpp"

namespace rts {

enum class StrategyKind : int { Expert = 0, Follower = 1, Maverick = 2, Conservative = 3 };

inline constexpr std::array<StrategyKind, 4> kAllStrategyKinds = {
    StrategyKind::Expert, StrategyKind::Follower, StrategyKind::Maverick,
    StrategyKind::Conservative};

constexpr int kind_index(StrategyKind k) { return static_cast<int>(k); }

std::string_view to_string(StrategyKind k);
std::optional<StrategyKind> strategy_from_string(std::string_view name);

/// Snapshot of one patch as seen by a deciding agent.
struct PatchView {
    Position pos;
    double significance = 0.0;
    bool visited = false;             ///< ever visited by anyone, including self
    bool occupied_by_others = false;  ///< occupancy excluding the viewing agent >= 1
};

/// The agent's own patch plus its neighborhood candidates, taken as a
/// consistent snapshot at the moment the agent acts. Candidates never include
/// the agent's own patch.
struct WorldView {
    PatchView current;
    std::vector<PatchView> candidates;
};

/// nullopt means stay; otherwise the move target, always one of the candidates.
using Decision = std::optional<Position>;

/// Movement rule per strategy. All rules are pure: nothing mutates but the rng
/// stream. Random selections draw uniformly over the qualifying candidates in
/// row-major candidate order. "Higher significance" always compares strictly
/// against the agent's current patch. An empty candidate list yields stay.
Decision decide(StrategyKind kind, const WorldView& view, Rng& rng);

/// Move to the highest-significance candidate that beats the current patch,
/// ties broken uniformly; otherwise stay.
Decision decide_expert(const WorldView& view, Rng& rng);

/// Prefer candidates that currently have other visitors and beat the current
/// patch; failing that, move to an unoccupied candidate; with no occupied
/// candidate in sight, move anywhere.
Decision decide_follower(const WorldView& view, Rng& rng);

/// Prefer unvisited candidates; failing that, any candidate that beats the
/// current patch; otherwise stay.
Decision decide_maverick(const WorldView& view, Rng& rng);

/// Prefer visited candidates that beat the current patch; failing that, an
/// unvisited candidate; with no visited candidate in sight, move anywhere.
Decision decide_conservative(const WorldView& view, Rng& rng);

}  // namespace rts
