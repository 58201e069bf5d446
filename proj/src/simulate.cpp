#include "randbeta/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "randbeta/rng.hpp"
#include "src/io_util.hpp"

namespace randbeta {

SimResult run_orbit(const SimConfig& cfg) {
    const BetaContext ctx(cfg.beta);
    if (cfg.steps <= cfg.burn_in) throw ContractError("steps must exceed burn_in");
    if (cfg.bins < 2) throw ContractError("bins must be >= 2");
    double x = cfg.x0 < 0.0 ? 0.5 * ctx.right_end : cfg.x0;
    if (x < 0.0 || x > ctx.right_end) throw ContractError("x0 outside the interval");

    Rng rng(cfg.seed);
    SimResult out;
    out.hist.bin_edges.resize(cfg.bins + 1);
    for (std::uint32_t i = 0; i <= cfg.bins; ++i)
        out.hist.bin_edges[i] = ctx.right_end * i / cfg.bins;
    out.hist.counts.assign(cfg.bins, 0);

    std::uint64_t s_hits = 0;
    const double scale = cfg.bins / ctx.right_end;
    for (std::uint64_t step = 0; step < cfg.steps; ++step) {
        if (step >= cfg.burn_in) {
            const auto bin = std::min<std::uint64_t>(
                cfg.bins - 1, static_cast<std::uint64_t>(x * scale));
            ++out.hist.counts[bin];
            if (classify(ctx, x) == Region::S) ++s_hits;
        }
        const RandomStep st = step_random(ctx, x, rng.coin());
        x = std::min(std::max(st.next, 0.0), ctx.right_end);
    }

    const std::uint64_t recorded = cfg.steps - cfg.burn_in;
    out.s_fraction = static_cast<double>(s_hits) / static_cast<double>(recorded);
    const double width = ctx.right_end / cfg.bins;
    out.hist.normalized_density.resize(cfg.bins);
    for (std::uint32_t i = 0; i < cfg.bins; ++i)
        out.hist.normalized_density[i] =
            static_cast<double>(out.hist.counts[i]) / (static_cast<double>(recorded) * width);
    return out;
}

double histogram_l1(const Histogram& h, const StepFunction& f) {
    auto edges = h.bin_edges;
    if (edges.empty() || edges.front() != 0.0)
        throw ContractError("histogram must start at 0");
    StepFunction hf(std::move(edges), std::vector<double>(h.normalized_density));
    return l1_distance(hf, f);
}

std::string histogram_csv(const SimResult& r, const std::map<std::string, std::string>& meta) {
    auto full = meta;
    full["s_fraction"] = io::fmt(r.s_fraction);
    std::string out = io::csv_header(full);
    out += "bin_left,bin_right,count,density\n";
    for (std::size_t i = 0; i < r.hist.counts.size(); ++i)
        out += io::fmt(r.hist.bin_edges[i]) + "," + io::fmt(r.hist.bin_edges[i + 1]) + "," +
               std::to_string(r.hist.counts[i]) + "," + io::fmt(r.hist.normalized_density[i]) +
               "\n";
    return out;
}

}  // namespace randbeta
