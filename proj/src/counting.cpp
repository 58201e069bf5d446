#include "randbeta/counting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "randbeta/rng.hpp"
#include "src/io_util.hpp"

namespace randbeta {
namespace {

void check_query(const BetaContext& ctx, const CountQuery& q, int n_cap) {
    if (q.n < 0) throw ContractError("n must be >= 0");
    if (q.n > n_cap) {
        std::ostringstream os;
        os << "n = " << q.n << " exceeds cap " << n_cap;
        throw ResourceError(os.str());
    }
    if (q.x < -ctx.boundary_tol || q.x > ctx.right_end + ctx.boundary_tol)
        throw ContractError("x outside the interval");
}

double clamp_remainder(const BetaContext& ctx, double y) {
    return std::min(std::max(y, 0.0), ctx.right_end);
}

std::uint64_t brute_rec(const BetaContext& ctx, double y, int remaining) {
    if (remaining == 0) return 1;
    const double tol = ctx.boundary_tol;
    std::uint64_t total = 0;
    const double y0 = apply_branch(ctx, Digit::zero, y);
    if (y0 <= ctx.right_end + tol)
        total += brute_rec(ctx, clamp_remainder(ctx, y0), remaining - 1);
    const double y1 = apply_branch(ctx, Digit::one, y);
    if (y1 >= -tol && y1 <= ctx.right_end + tol)
        total += brute_rec(ctx, clamp_remainder(ctx, y1), remaining - 1);
    return total;
}

}  // namespace

std::uint64_t count_brute(const BetaContext& ctx, const CountQuery& q) {
    check_query(ctx, q, 40);
    return brute_rec(ctx, clamp_remainder(ctx, q.x), q.n);
}

std::uint64_t count_dp(const BetaContext& ctx, const CountQuery& q, std::size_t state_cap) {
    check_query(ctx, q, 62);

    // Forward pass: deduplicated (bitwise-equal) reachable remainders per
    // level, with child links. Exact-key dedup keeps the recursion identical
    // to the brute-force tree, so the two oracles agree as integers.
    struct Level {
        std::vector<double> values;
        std::vector<std::ptrdiff_t> child0, child1;  // -1 when the branch is unavailable
    };
    std::vector<Level> levels(static_cast<std::size_t>(q.n) + 1);
    levels[0].values = {std::min(std::max(q.x, 0.0), ctx.right_end)};
    std::size_t total_states = 1;
    for (int k = 0; k < q.n; ++k) {
        auto& cur = levels[k];
        auto& nxt = levels[k + 1];
        std::vector<double> children;
        children.reserve(cur.values.size() * 2);
        for (double y : cur.values) {
            const Region r = classify(ctx, y);
            if (r != Region::R)
                children.push_back(clamp_remainder(ctx, apply_branch(ctx, Digit::zero, y)));
            if (r != Region::L)
                children.push_back(clamp_remainder(ctx, apply_branch(ctx, Digit::one, y)));
        }
        std::sort(children.begin(), children.end());
        children.erase(std::unique(children.begin(), children.end()), children.end());
        nxt.values = std::move(children);
        total_states += nxt.values.size();
        if (total_states > state_cap) {
            std::ostringstream os;
            os << "count_dp state count exceeded cap " << state_cap;
            throw ResourceError(os.str());
        }
        cur.child0.assign(cur.values.size(), -1);
        cur.child1.assign(cur.values.size(), -1);
        auto locate = [&nxt](double v) {
            return std::lower_bound(nxt.values.begin(), nxt.values.end(), v) - nxt.values.begin();
        };
        for (std::size_t i = 0; i < cur.values.size(); ++i) {
            const double y = cur.values[i];
            const Region r = classify(ctx, y);
            if (r != Region::R)
                cur.child0[i] = locate(clamp_remainder(ctx, apply_branch(ctx, Digit::zero, y)));
            if (r != Region::L)
                cur.child1[i] = locate(clamp_remainder(ctx, apply_branch(ctx, Digit::one, y)));
        }
    }

    // Backward pass: V over the shared tree.
    std::vector<std::uint64_t> v(levels[q.n].values.size(), 1u);
    for (int k = q.n - 1; k >= 0; --k) {
        const auto& cur = levels[k];
        std::vector<std::uint64_t> up(cur.values.size(), 0u);
        for (std::size_t i = 0; i < cur.values.size(); ++i) {
            if (cur.child0[i] >= 0) up[i] += v[static_cast<std::size_t>(cur.child0[i])];
            if (cur.child1[i] >= 0) up[i] += v[static_cast<std::size_t>(cur.child1[i])];
        }
        v = std::move(up);
    }
    return v[0];
}

MonteCarloCount count_monte_carlo(const BetaContext& ctx, const CountQuery& q,
                                  std::uint64_t samples, std::uint64_t seed) {
    check_query(ctx, q, 62);
    if (samples < 1) throw ContractError("samples must be >= 1");
    Rng rng(seed);
    // Welford accumulation of 2^h.
    double mean = 0.0, m2 = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        double y = q.x;
        int h = 0;
        for (int i = 0; i < q.n; ++i) {
            const RandomStep st = step_random(ctx, y, rng.coin());
            if (st.consumed) ++h;
            y = std::min(std::max(st.next, 0.0), ctx.right_end);
        }
        const double val = std::ldexp(1.0, h);
        const double d1 = val - mean;
        mean += d1 / static_cast<double>(s + 1);
        m2 += d1 * (val - mean);
    }
    const double n = static_cast<double>(samples);
    const double se = samples > 1 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
    return MonteCarloCount{mean, se};
}

GrowthEstimate growth_estimate(const BetaContext& ctx, double x, int n,
                               const DensityResult& density) {
    if (n < 1) throw ContractError("growth estimate needs n >= 1");
    if (std::fabs(density.beta - ctx.beta) > 1e-12)
        throw ContractError("density was built for a different beta");
    const std::uint64_t count = count_dp(ctx, CountQuery{x, n});
    GrowthEstimate g;
    g.n = n;
    g.log_count_over_n = std::log(static_cast<double>(count)) / n;
    g.mu_s = density.f.measure_of(ctx.s_left, ctx.s_right);
    g.lower_bound = std::log(2.0) * g.mu_s;
    g.exceeds_bound = g.log_count_over_n >= g.lower_bound;
    return g;
}

std::string growth_csv(const BetaContext& ctx, double x, const GrowthEstimate& g,
                       std::uint64_t count, const std::map<std::string, std::string>& meta) {
    std::string out = io::csv_header(meta);
    out += "beta,x,n,count,log_count_over_n,mu_S,lower_bound\n";
    out += io::fmt(ctx.beta) + "," + io::fmt(x) + "," + std::to_string(g.n) + "," +
           std::to_string(count) + "," + io::fmt(g.log_count_over_n) + "," + io::fmt(g.mu_s) +
           "," + io::fmt(g.lower_bound) + "\n";
    return out;
}

}  // namespace randbeta
