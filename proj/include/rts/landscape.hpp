#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

namespace rts {

struct Position {
    int x = 0;  ///< column index, 0 <= x < width
    int y = 0;  ///< row index, 0 <= y < height
    bool operator==(const Position&) const = default;
};

/// Neighborhood geometry. Chebyshev (square) is the default; Euclidean keeps
/// candidates inside the integer in-radius instead.
enum class VisionMetric { Chebyshev, Euclidean };

/// One additive significance bump. Centers may fall between patches.
struct GaussianSpec {
    double center_x = 0.0;
    double center_y = 0.0;
    double amplitude = 0.0;  ///< peak height, >= 0
    double sigma = 1.0;      ///< spatial spread in patch units, > 0
};

struct LandscapeConfig {
    int width = 50;
    int height = 50;
    std::vector<GaussianSpec> gaussians;  ///< may be empty (flat terrain)
    double noise_amplitude = 0.0;         ///< uniform noise half-range, >= 0
    std::uint64_t landscape_seed = 0;
};

/// The depletable topic grid: per-patch significance h(x,y) plus visited flags
/// and live-agent occupancy counts. A Landscape is owned by exactly one run
/// and all mutation is single-threaded within that run.
class Landscape {
public:
    /// Builds the height field: the sum of the configured Gaussians plus one
    /// uniform noise draw in [-noise_amplitude, +noise_amplitude] per patch,
    /// clamped at zero. Noise comes from a stream seeded by landscape_seed,
    /// consumed in row-major patch order, so the grid is a pure function of
    /// the config. Throws ConfigError on invalid dimensions or sigma <= 0.
    explicit Landscape(const LandscapeConfig& config);

    int width() const { return config_.width; }
    int height() const { return config_.height; }
    int patch_count() const { return config_.width * config_.height; }
    const LandscapeConfig& config() const { return config_; }

    bool in_bounds(Position p) const {
        return p.x >= 0 && p.x < config_.width && p.y >= 0 && p.y < config_.height;
    }

    double significance_at(Position p) const { return significance_[index(p)]; }
    bool visited_at(Position p) const { return visited_[index(p)] != 0; }
    int occupancy_at(Position p) const { return occupancy_[index(p)]; }

    /// Sum of h at construction time. Immutable afterwards.
    double initial_total() const { return initial_total_; }

    /// Largest single-patch h at construction time (PGM scaling).
    double max_initial_significance() const { return max_initial_; }

    /// Current sum of h over all patches.
    double total_significance() const;

    int visited_count() const { return visited_count_; }
    int total_occupancy() const { return total_occupancy_; }

    /// Removes alpha * h(p) from the patch and returns it. Multiple callers on
    /// one patch within a tick each see the remainder left by earlier callers.
    double extract(Position p, double alpha);

    /// Idempotent; visited flags never revert.
    void mark_visited(Position p);

    /// Transfers one agent's occupancy. Pass nullopt `from` on placement and
    /// nullopt `to` on departure. Underflow throws InvariantError.
    void adjust_occupancy(std::optional<Position> from, std::optional<Position> to);

    /// Calls fn(Position) for every in-bounds patch q != p within `vision` of
    /// p under `metric`, in row-major order. The caller's own patch is never a
    /// candidate. Clips at grid edges; no wrap-around.
    template <typename Fn>
    void for_each_neighbor(Position p, int vision, VisionMetric metric, Fn&& fn) const {
        assert(in_bounds(p) && vision >= 1);
        const int x0 = p.x - vision < 0 ? 0 : p.x - vision;
        const int x1 = p.x + vision >= config_.width ? config_.width - 1 : p.x + vision;
        const int y0 = p.y - vision < 0 ? 0 : p.y - vision;
        const int y1 = p.y + vision >= config_.height ? config_.height - 1 : p.y + vision;
        const int r2 = vision * vision;
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                if (x == p.x && y == p.y) {
                    continue;
                }
                if (metric == VisionMetric::Euclidean) {
                    const int dx = x - p.x;
                    const int dy = y - p.y;
                    if (dx * dx + dy * dy > r2) {
                        continue;
                    }
                }
                fn(Position{x, y});
            }
        }
    }

    /// Candidate positions as a list, row-major.
    std::vector<Position> neighborhood(Position p, int vision,
                                       VisionMetric metric = VisionMetric::Chebyshev) const;

private:
    std::size_t index(Position p) const {
        assert(in_bounds(p));
        return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(config_.width) +
               static_cast<std::size_t>(p.x);
    }

    LandscapeConfig config_;
    std::vector<double> significance_;
    std::vector<std::uint8_t> visited_;
    std::vector<std::int32_t> occupancy_;
    double initial_total_ = 0.0;
    double max_initial_ = 0.0;
    int visited_count_ = 0;
    int total_occupancy_ = 0;
};

}  // namespace rts
