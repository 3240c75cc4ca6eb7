#include "rts/metrics.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace rts::metrics {

double progress(double initial_total, double current_total) {
    if (initial_total <= 0.0) {
        return 0.0;
    }
    return (initial_total - current_total) / initial_total;
}

double coverage(const Landscape& landscape) {
    return static_cast<double>(landscape.visited_count()) /
           static_cast<double>(landscape.patch_count());
}

std::vector<double> ica_distribution(const std::vector<Agent>& agents_final, StrategyKind kind) {
    std::vector<double> out;
    for (const Agent& agent : agents_final) {
        if (agent.kind == kind) {
            out.push_back(agent.ica);
        }
    }
    return out;
}

double gini(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("gini of an empty list is undefined");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    double rank_weighted = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        assert(sorted[i] >= 0.0);
        sum += sorted[i];
        rank_weighted += static_cast<double>(i + 1) * sorted[i];
    }
    if (sum <= 0.0) {
        return 0.0;
    }
    const double n = static_cast<double>(sorted.size());
    return (2.0 * rank_weighted - (n + 1.0) * sum) / (n * sum);
}

std::vector<int> survival_curve(const RunResult& result, StrategyKind kind) {
    std::vector<int> curve;
    curve.reserve(result.ticks.size());
    for (const TickReport& report : result.ticks) {
        curve.push_back(report.survivors_by_kind[static_cast<std::size_t>(kind_index(kind))]);
    }
    return curve;
}

MetricsSummary summarize(const RunResult& result) {
    MetricsSummary s;
    if (!result.ticks.empty()) {
        s.progress = result.ticks.back().progress;
        s.coverage = result.ticks.back().coverage;
        for (std::size_t k = 0; k < 4; ++k) {
            s.survivors_final_by_kind[k] = result.ticks.back().survivors_by_kind[k];
        }
    }
    for (const Agent& agent : result.agents_final) {
        const auto k = static_cast<std::size_t>(kind_index(agent.kind));
        ++s.count_by_kind[k];
        if (agent.departure) {
            if (agent.departure->cause == DepartureCause::Starvation) {
                ++s.starved_by_kind[k];
            } else {
                ++s.retired_by_kind[k];
            }
        }
    }
    for (StrategyKind kind : kAllStrategyKinds) {
        const auto k = static_cast<std::size_t>(kind_index(kind));
        if (s.count_by_kind[k] == 0) {
            continue;
        }
        s.ica_values_by_kind[k] = ica_distribution(result.agents_final, kind);
        double sum = 0.0;
        for (double v : s.ica_values_by_kind[k]) {
            sum += v;
        }
        s.mean_ica_by_kind[k] = sum / static_cast<double>(s.count_by_kind[k]);
        s.gini_by_kind[k] = gini(s.ica_values_by_kind[k]);
        s.survival_curve_by_kind[k] = survival_curve(result, kind);
    }
    return s;
}

}  // namespace rts::metrics
