#include "rts/strategy.hpp"

#include <algorithm>

namespace rts {

std::string_view to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::Expert:
            return "expert";
        case StrategyKind::Follower:
            return "follower";
        case StrategyKind::Maverick:
            return "maverick";
        case StrategyKind::Conservative:
            return "conservative";
    }
    return "unknown";
}

std::optional<StrategyKind> strategy_from_string(std::string_view name) {
    for (StrategyKind k : kAllStrategyKinds) {
        if (name == to_string(k)) {
            return k;
        }
    }
    return std::nullopt;
}

namespace {

// Uniform pick among candidates satisfying pred; nullopt when none qualify.
// Two passes (count, then select) so no per-decision allocation happens.
template <typename Pred>
Decision pick_uniform(const std::vector<PatchView>& candidates, Rng& rng, Pred pred) {
    std::size_t count = 0;
    for (const PatchView& c : candidates) {
        if (pred(c)) {
            ++count;
        }
    }
    if (count == 0) {
        return std::nullopt;
    }
    std::size_t k = rng.uniform_index(count);
    for (const PatchView& c : candidates) {
        if (pred(c)) {
            if (k == 0) {
                return c.pos;
            }
            --k;
        }
    }
    return std::nullopt;  // unreachable
}

}  // namespace

Decision decide_expert(const WorldView& view, Rng& rng) {
    // Check: any patch in vision higher than my current patch?
    // Yes -> the highest one (ties uniform); no -> stay.
    double best = view.current.significance;
    bool found = false;
    for (const PatchView& c : view.candidates) {
        if (c.significance > best) {
            best = c.significance;
            found = true;
        }
    }
    if (!found) {
        return std::nullopt;
    }
    return pick_uniform(view.candidates, rng,
                        [best](const PatchView& c) { return c.significance == best; });
}

Decision decide_maverick(const WorldView& view, Rng& rng) {
    // Check: any patch in vision not visited yet? Yes -> one of those.
    if (Decision d = pick_uniform(view.candidates, rng,
                                  [](const PatchView& c) { return !c.visited; })) {
        return d;
    }
    // No -> any patch higher than current? Yes -> one of those; no -> stay.
    const double cur = view.current.significance;
    return pick_uniform(view.candidates, rng,
                        [cur](const PatchView& c) { return c.significance > cur; });
}

Decision decide_follower(const WorldView& view, Rng& rng) {
    const bool any_occupied =
        std::any_of(view.candidates.begin(), view.candidates.end(),
                    [](const PatchView& c) { return c.occupied_by_others; });
    if (!any_occupied) {
        // No visitors in sight: move anywhere.
        return pick_uniform(view.candidates, rng, [](const PatchView&) { return true; });
    }
    // Occupied and higher than current?
    const double cur = view.current.significance;
    if (Decision d = pick_uniform(view.candidates, rng, [cur](const PatchView& c) {
            return c.occupied_by_others && c.significance > cur;
        })) {
        return d;
    }
    // Otherwise a currently unoccupied candidate, if any; else stay.
    return pick_uniform(view.candidates, rng,
                        [](const PatchView& c) { return !c.occupied_by_others; });
}

Decision decide_conservative(const WorldView& view, Rng& rng) {
    const bool any_visited = std::any_of(view.candidates.begin(), view.candidates.end(),
                                         [](const PatchView& c) { return c.visited; });
    if (!any_visited) {
        // Nothing established in sight: move anywhere.
        return pick_uniform(view.candidates, rng, [](const PatchView&) { return true; });
    }
    // Visited and higher than current?
    const double cur = view.current.significance;
    if (Decision d = pick_uniform(view.candidates, rng, [cur](const PatchView& c) {
            return c.visited && c.significance > cur;
        })) {
        return d;
    }
    // Otherwise an unvisited candidate, if any; else stay.
    return pick_uniform(view.candidates, rng, [](const PatchView& c) { return !c.visited; });
}

Decision decide(StrategyKind kind, const WorldView& view, Rng& rng) {
    switch (kind) {
        case StrategyKind::Expert:
            return decide_expert(view, rng);
        case StrategyKind::Follower:
            return decide_follower(view, rng);
        case StrategyKind::Maverick:
            return decide_maverick(view, rng);
        case StrategyKind::Conservative:
            return decide_conservative(view, rng);
    }
    return std::nullopt;
}

}  // namespace rts
