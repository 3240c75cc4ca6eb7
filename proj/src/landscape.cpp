#include "rts/landscape.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "rts/error.hpp"
#include "rts/rng.hpp"

namespace rts {

Landscape::Landscape(const LandscapeConfig& config) : config_(config) {
    if (config.width < 1 || config.height < 1) {
        throw ConfigError("landscape dimensions must be >= 1, got " +
                          std::to_string(config.width) + "x" + std::to_string(config.height));
    }
    for (const auto& g : config.gaussians) {
        if (g.sigma <= 0.0) {
            throw ConfigError("gaussian sigma must be > 0, got " + std::to_string(g.sigma));
        }
        if (g.amplitude < 0.0) {
            throw ConfigError("gaussian amplitude must be >= 0, got " +
                              std::to_string(g.amplitude));
        }
    }
    if (config.noise_amplitude < 0.0) {
        throw ConfigError("noise_amplitude must be >= 0");
    }

    const std::size_t n = static_cast<std::size_t>(config.width) * config.height;
    significance_.resize(n);
    visited_.assign(n, 0);
    occupancy_.assign(n, 0);

    Rng noise(config.landscape_seed);
    std::size_t i = 0;
    for (int y = 0; y < config.height; ++y) {
        for (int x = 0; x < config.width; ++x, ++i) {
            double h = 0.0;
            for (const auto& g : config.gaussians) {
                const double dx = x - g.center_x;
                const double dy = y - g.center_y;
                h += g.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * g.sigma * g.sigma));
            }
            // One draw per patch even when the amplitude is zero, so the
            // stream position depends only on the patch index.
            h += noise.uniform_real(-config.noise_amplitude, config.noise_amplitude);
            if (h < 0.0) {
                h = 0.0;
            }
            significance_[i] = h;
            initial_total_ += h;
            if (h > max_initial_) {
                max_initial_ = h;
            }
        }
    }
}

double Landscape::total_significance() const {
    return std::accumulate(significance_.begin(), significance_.end(), 0.0);
}

double Landscape::extract(Position p, double alpha) {
    double& h = significance_[index(p)];
    const double gain = alpha * h;
    h -= gain;
    return gain;
}

void Landscape::mark_visited(Position p) {
    std::uint8_t& flag = visited_[index(p)];
    if (flag == 0) {
        flag = 1;
        ++visited_count_;
    }
}

void Landscape::adjust_occupancy(std::optional<Position> from, std::optional<Position> to) {
    if (from) {
        std::int32_t& c = occupancy_[index(*from)];
        if (c < 1) {
            std::ostringstream msg;
            msg << "occupancy underflow at patch (" << from->x << "," << from->y << ")";
            throw InvariantError(msg.str());
        }
        --c;
        --total_occupancy_;
    }
    if (to) {
        ++occupancy_[index(*to)];
        ++total_occupancy_;
    }
}

std::vector<Position> Landscape::neighborhood(Position p, int vision, VisionMetric metric) const {
    std::vector<Position> out;
    out.reserve(static_cast<std::size_t>(2 * vision + 1) * (2 * vision + 1));
    for_each_neighbor(p, vision, metric, [&out](Position q) { out.push_back(q); });
    return out;
}

}  // namespace rts
