#include "randbeta/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace randbeta {
namespace {

constexpr double kValueCoalesceTol = 1e-13;

void require_nonnegative(const StepFunction& f) {
    if (f.min_value() < 0.0) throw ContractError("transfer operator requires f >= 0");
}

void check_piece_cap(std::size_t n, std::size_t cap) {
    if (n > cap) {
        std::ostringstream os;
        os << "transfer iterate grew to " << n << " pieces, cap is " << cap;
        throw ResourceError(os.str());
    }
}

// Candidate output breakpoints: wherever a preimage (x+a)/beta crosses a
// breakpoint of f or a region boundary, i.e. x = beta*b - a.
std::vector<double> image_breakpoints(const std::vector<double>& sources, double beta,
                                      double domain_right) {
    std::vector<double> out{0.0, domain_right};
    out.reserve(2 * sources.size() + 2);
    for (double b : sources) {
        const double p0 = beta * b;
        if (p0 > 0.0 && p0 < domain_right) out.push_back(p0);
        const double p1 = beta * b - 1.0;
        if (p1 > 0.0 && p1 < domain_right) out.push_back(p1);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double branch_weight(Region r, Digit d) {
    if (r == Region::S) return 0.5;
    const bool available = (d == Digit::zero) ? (r == Region::L) : (r == Region::R);
    return available ? 1.0 : 0.0;
}

}  // namespace

StepFunction apply_transfer(const BetaContext& ctx, const StepFunction& f, std::size_t piece_cap) {
    require_nonnegative(f);
    auto sources = f.breakpoints();
    sources.push_back(ctx.s_left);
    sources.push_back(ctx.s_right);
    const auto breaks = image_breakpoints(sources, ctx.beta, ctx.right_end);
    check_piece_cap(breaks.size(), piece_cap);

    std::vector<double> values(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
        const double y0 = mid / ctx.beta;
        const double y1 = (mid + 1.0) / ctx.beta;
        double acc = branch_weight(classify(ctx, y0), Digit::zero) * f.evaluate(y0);
        if (y1 <= ctx.right_end)
            acc += branch_weight(classify(ctx, y1), Digit::one) * f.evaluate(y1);
        values[i] = acc / ctx.beta;
    }
    StepFunction out(std::vector<double>(breaks), std::move(values));
    out.coalesce_values(kValueCoalesceTol);
    return out;
}

StepFunction apply_transfer_greedy(const BetaContext& ctx, const StepFunction& f,
                                   std::size_t piece_cap) {
    require_nonnegative(f);
    auto sources = f.breakpoints();
    sources.push_back(ctx.s_left);  // image beta*s_left - 1 = 0; beta*s_left = 1 is the chi kink
    const auto breaks = image_breakpoints(sources, ctx.beta, 1.0);
    check_piece_cap(breaks.size(), piece_cap);

    std::vector<double> values(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
        double acc = f.evaluate(mid / ctx.beta);
        const double y1 = (mid + 1.0) / ctx.beta;
        if (y1 <= 1.0) acc += f.evaluate(y1);
        values[i] = acc / ctx.beta;
    }
    StepFunction out(std::vector<double>(breaks), std::move(values));
    out.coalesce_values(kValueCoalesceTol);
    return out;
}

FixedPointResult fixed_point(const BetaContext& ctx, const TransferConfig& cfg) {
    if (cfg.max_iters < 1) throw ContractError("max_iters must be >= 1");
    if (!(cfg.fixed_point_tol > 0.0)) throw ContractError("fixed_point_tol must be positive");

    const bool greedy = cfg.variant == TransferVariant::greedy;
    const double domain = greedy ? 1.0 : ctx.right_end;
    StepFunction cur = StepFunction::constant(1.0 / domain, domain);
    int iters = 0;
    double residual = 0.0;
    bool converged = false;
    while (iters < cfg.max_iters) {
        StepFunction next = greedy ? apply_transfer_greedy(ctx, cur, cfg.piece_cap)
                                   : apply_transfer(ctx, cur, cfg.piece_cap);
        residual = l1_distance(next, cur);
        cur = std::move(next);
        ++iters;
        if (residual <= cfg.fixed_point_tol) {
            converged = true;
            break;
        }
    }
    cur.scale(1.0 / cur.integrate());
    return FixedPointResult{std::move(cur), iters, residual, converged};
}

}  // namespace randbeta
