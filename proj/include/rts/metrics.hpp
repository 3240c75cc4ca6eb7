#pragma once

#include <array>
#include <span>
#include <vector>

#include "rts/engine.hpp"
#include "rts/landscape.hpp"
#include "rts/strategy.hpp"

namespace rts::metrics {

/// Fraction of the landscape's initial significance consumed so far.
/// Defined as 0 for a flat (zero-total) landscape.
double progress(double initial_total, double current_total);

/// Fraction of patches visited at least once.
double coverage(const Landscape& landscape);

/// ICA of every agent of the kind, dead and alive, in id order.
std::vector<double> ica_distribution(const std::vector<Agent>& agents_final, StrategyKind kind);

/// Gini coefficient of a nonempty list of nonnegative values; 0 when the mean
/// is 0. Computed via the sorted-rank identity, which equals the pairwise
/// mean-difference form sum_ij |v_i - v_j| / (2 n^2 mean).
/// Throws std::invalid_argument on an empty list.
double gini(std::span<const double> values);

/// Survivors of the kind at each recorded tick 0..T. Non-increasing.
std::vector<int> survival_curve(const RunResult& result, StrategyKind kind);

/// Per-run rollup. Per-kind entries are meaningful only where
/// count_by_kind > 0; absent kinds carry zeros.
struct MetricsSummary {
    double progress = 0.0;
    double coverage = 0.0;
    std::array<int, 4> count_by_kind{};
    std::array<std::vector<double>, 4> ica_values_by_kind;
    std::array<double, 4> mean_ica_by_kind{};
    std::array<double, 4> gini_by_kind{};
    std::array<int, 4> survivors_final_by_kind{};
    std::array<int, 4> starved_by_kind{};
    std::array<int, 4> retired_by_kind{};
    std::array<std::vector<int>, 4> survival_curve_by_kind;
};

MetricsSummary summarize(const RunResult& result);

}  // namespace rts::metrics
