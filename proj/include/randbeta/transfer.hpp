#pragma once

#include <cstddef>

#include "randbeta/context.hpp"
#include "randbeta/step_function.hpp"

namespace randbeta {

enum class TransferVariant { random, greedy };

struct TransferConfig {
    int max_iters = 500;
    double fixed_point_tol = 1e-10;  // L1 between successive iterates
    TransferVariant variant = TransferVariant::random;
    std::size_t piece_cap = std::size_t(1) << 22;
};

/// Transfer operator of the coin-averaged random map on [0, right_end]:
///   (Lf)(x) = (1/beta) * [ w0(x/beta) f(x/beta) + w1((x+1)/beta) f((x+1)/beta) ]
/// with branch weights 1, 1/2, 0 on the regions where the branch is forced,
/// optional, or unavailable. Exact on step functions; preserves the integral.
/// Throws ContractError when f takes negative values.
StepFunction apply_transfer(const BetaContext& ctx, const StepFunction& f,
                            std::size_t piece_cap = std::size_t(1) << 22);

/// Transfer operator of the greedy map on [0, 1].
StepFunction apply_transfer_greedy(const BetaContext& ctx, const StepFunction& f,
                                   std::size_t piece_cap = std::size_t(1) << 22);

struct FixedPointResult {
    StepFunction density;  // normalized final iterate
    int iterations = 0;
    double residual = 0.0;  // L1 gap between the last two iterates
    bool converged = false;
};

/// Power iteration from the uniform density. Non-convergence within max_iters
/// is reported through the result, not thrown.
FixedPointResult fixed_point(const BetaContext& ctx, const TransferConfig& cfg);

}  // namespace randbeta
