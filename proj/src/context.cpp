#include "randbeta/context.hpp"

#include <cmath>
#include <sstream>

namespace randbeta {

BetaContext::BetaContext(double beta_in, double tol) : beta(beta_in), boundary_tol(tol) {
    if (!(beta > 1.0) || !(beta < 2.0) || !std::isfinite(beta)) {
        std::ostringstream os;
        os << "beta must lie in (1, 2), got " << beta_in;
        throw ContractError(os.str());
    }
    if (!(boundary_tol >= 0.0)) throw ContractError("boundary_tol must be >= 0");
    right_end = 1.0 / (beta - 1.0);
    s_left = 1.0 / beta;
    s_right = 1.0 / (beta * (beta - 1.0));
    mirror_of_one = right_end - 1.0;
}

Region classify(const BetaContext& ctx, double x) {
    const double tol = ctx.boundary_tol;
    if (x < -tol || x > ctx.right_end + tol) {
        std::ostringstream os;
        os << "x = " << x << " outside [0, " << ctx.right_end << "] beyond tolerance " << tol;
        throw ContractError(os.str());
    }
    if (std::fabs(x - ctx.s_left) <= tol) return Region::S;
    if (std::fabs(x - ctx.s_right) <= tol) return Region::S;
    if (x < ctx.s_left) return Region::L;
    if (x < ctx.s_right) return Region::S;
    return Region::R;
}

RandomStep step_random(const BetaContext& ctx, double x, Digit coin) {
    switch (classify(ctx, x)) {
        case Region::L: return {apply_branch(ctx, Digit::zero, x), false};
        case Region::R: return {apply_branch(ctx, Digit::one, x), false};
        default: return {apply_branch(ctx, coin, x), true};
    }
}

GreedyStep step_greedy(const BetaContext& ctx, double x) {
    const double tol = ctx.boundary_tol;
    if (x < -tol || x > 1.0 + tol) {
        std::ostringstream os;
        os << "greedy map domain is [0, 1], got x = " << x;
        throw ContractError(os.str());
    }
    const Digit d = (x >= ctx.s_left - tol) ? Digit::one : Digit::zero;
    double next = apply_branch(ctx, d, x);
    if (next < 0.0) next = 0.0;
    if (next > 1.0) next = 1.0;  // only reachable within tol of the endpoints
    return {next, d};
}

}  // namespace randbeta
