#pragma once

#include <map>
#include <string>

#include "randbeta/context.hpp"
#include "randbeta/orbit_tree.hpp"
#include "randbeta/step_function.hpp"

namespace randbeta {

/// Normalized invariant density truncated at a given depth, together with the
/// normalizing constant and rigorous truncation bounds for the unnormalized
/// series: sup tail <= 2 beta^-N / (beta-1), L1 tail <= 2 beta^-N / (beta-1)^2
/// (halved, on a unit domain, for the greedy-map variant).
struct DensityResult {
    double beta = 0.0;
    StepFunction f;  // integrates to 1
    double C = 0.0;  // 1 / integral of the truncated unnormalized sum
    int depth = 0;
    double sup_error = 0.0;
    double l1_error = 0.0;
};

/// The depth-N partial sum of the two-sided indicator series before
/// normalization: level-n orbit points of 1 contribute mass * beta^-n on
/// [0, r], and their reflections mass * beta^-n on [right_end - r, right_end].
/// Zero-length indicators are dropped.
StepFunction theorem_sum_unnormalized(const BetaContext& ctx, int depth,
                                      const TreeOptions& opts = {});

/// Invariant density of the random map on [0, right_end].
DensityResult build_density(const BetaContext& ctx, int depth, const TreeOptions& opts = {});

/// Same, but if the orbit tree hits the point cap before reaching depth the
/// result is truncated at the deepest complete level instead of failing;
/// DensityResult::depth reports what was achieved.
DensityResult build_density_up_to(const BetaContext& ctx, int depth, const TreeOptions& opts = {});

/// Invariant density of the greedy map on [0, 1], from the single greedy
/// orbit of 1.
DensityResult parry_density(const BetaContext& ctx, int depth);

std::string density_json(const DensityResult& d, const std::map<std::string, std::string>& meta = {});
std::string density_csv(const DensityResult& d, const std::map<std::string, std::string>& meta = {});

}  // namespace randbeta
