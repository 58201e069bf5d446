#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "randbeta/context.hpp"
#include "randbeta/density.hpp"

namespace randbeta {

struct CountQuery {
    double x = 0.0;
    int n = 0;
};

/// Number of length-n digit prefixes extendable to full expansions of x, by
/// depth-first enumeration with remainder recursion y -> beta*y - a, pruning
/// as soon as the remainder leaves the interval (escape is permanent).
/// Capped at n <= 40.
std::uint64_t count_brute(const BetaContext& ctx, const CountQuery& q);

/// Same count through the branching recursion V_0 = 1,
/// V_k(y) = V_{k-1}(T0 y), V_{k-1}(T1 y) or their sum on L, R, S; memoized on
/// the deduplicated forward orbit of x. This is the exact coin-average of 2^h
/// (each switch-region visit contributes a factor 2 split over two equally
/// likely coins), so it equals the prefix count.
std::uint64_t count_dp(const BetaContext& ctx, const CountQuery& q,
                       std::size_t state_cap = std::size_t(1) << 22);

struct MonteCarloCount {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Samples fair coin streams, follows the orbit of x for n steps counting
/// switch-region visits h, and averages 2^h. Deterministic given the seed.
MonteCarloCount count_monte_carlo(const BetaContext& ctx, const CountQuery& q,
                                  std::uint64_t samples, std::uint64_t seed);

struct GrowthEstimate {
    int n = 0;
    double log_count_over_n = 0.0;
    double lower_bound = 0.0;  // log(2) * mu(S)
    double mu_s = 0.0;
    // Whether the finite-n estimate clears the almost-everywhere lower bound.
    // Individual x (e.g. x = 1 for the golden ratio) may legitimately stay
    // below it, so this is reported, never asserted.
    bool exceeds_bound = false;
};

GrowthEstimate growth_estimate(const BetaContext& ctx, double x, int n,
                               const DensityResult& density);

std::string growth_csv(const BetaContext& ctx, double x, const GrowthEstimate& g,
                       std::uint64_t count, const std::map<std::string, std::string>& meta = {});

}  // namespace randbeta
