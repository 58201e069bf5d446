#pragma once

#include <cstdint>

#include "randbeta/errors.hpp"

namespace randbeta {

/// Partition of [0, 1/(beta-1)]: L = [0, 1/beta), S = [1/beta, 1/(beta(beta-1))],
/// R = (1/(beta(beta-1)), 1/(beta-1)]. Both branch maps keep the orbit inside
/// the interval exactly on S.
enum class Region : std::uint8_t { L, S, R };

enum class Digit : std::uint8_t { zero = 0, one = 1 };

inline Digit flip(Digit d) { return d == Digit::zero ? Digit::one : Digit::zero; }

/// Parameter 1 < beta < 2 together with every derived boundary constant of the
/// system. Immutable after construction; safe to share across threads.
struct BetaContext {
    double beta;
    double right_end;      // 1/(beta-1)
    double s_left;         // 1/beta
    double s_right;        // 1/(beta(beta-1))
    double mirror_of_one;  // right_end - 1, computed exactly in that form
    double boundary_tol;   // absolute snap width at the partition boundaries

    explicit BetaContext(double beta, double boundary_tol = 1e-12);
};

/// T_d(x) = beta*x - d. Kept inline so every call site compiles to the same
/// mul/sub sequence; several tests assert bit-identical recomputation.
inline double apply_branch(const BetaContext& ctx, Digit d, double x) {
    return d == Digit::one ? ctx.beta * x - 1.0 : ctx.beta * x;
}

/// Total classification of x in [0, right_end]. Values within boundary_tol of
/// 1/beta, 1/(beta(beta-1)) or right_end are snapped to the boundary first;
/// both S boundaries classify as S. Throws ContractError for x beyond
/// tolerance outside the interval.
Region classify(const BetaContext& ctx, double x);

struct RandomStep {
    double next;
    bool consumed;  // true iff x was in S and the coin decided the branch
};

/// One step of the random map: forced T0 on L, forced T1 on R, T_coin on S.
/// The caller decides whether the coin stream advances every step (skew
/// product semantics) or only when consumed is true (K_beta semantics).
RandomStep step_random(const BetaContext& ctx, double x, Digit coin);

struct GreedyStep {
    double next;
    Digit digit;
};

/// One step of the greedy map T(x) = beta*x mod 1 on [0,1], with T(1) = beta-1
/// and digit 1 at x = 1. The digit cut at x = 1/beta uses the same snap
/// tolerance as classify so near-boundary orbits stay on the intended branch.
GreedyStep step_greedy(const BetaContext& ctx, double x);

}  // namespace randbeta
