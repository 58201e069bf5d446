#include "randbeta/density.hpp"

#include <cmath>
#include <utility>

#include <json.hpp>

#include "src/io_util.hpp"

namespace randbeta {
namespace {

StepFunction sum_from_tree(const BetaContext& ctx, const OrbitTree& tree) {
    StepBuilder acc(ctx.right_end);
    double level_weight = 1.0;  // beta^-n
    for (const auto& level : tree.levels) {
        for (const auto& p : level.points) {
            if (p.value <= 0.0) continue;  // zero-length indicator
            const double w = p.mass * level_weight;
            acc.add_indicator(0.0, p.value, w);
            acc.add_indicator(ctx.right_end - p.value, ctx.right_end, w);
        }
        level_weight /= ctx.beta;
    }
    return acc.build();
}

DensityResult normalize(const BetaContext& ctx, StepFunction f, int depth) {
    const double integral = f.integrate();
    const double c = 1.0 / integral;
    f.scale(c);
    const double tail_geo = std::pow(ctx.beta, -depth) / (ctx.beta - 1.0);
    return DensityResult{ctx.beta, std::move(f), c, depth, 2.0 * tail_geo,
                         2.0 * tail_geo / (ctx.beta - 1.0)};
}

}  // namespace

StepFunction theorem_sum_unnormalized(const BetaContext& ctx, int depth, const TreeOptions& opts) {
    return sum_from_tree(ctx, build_tree(ctx, 1.0, depth, opts));
}

DensityResult build_density(const BetaContext& ctx, int depth, const TreeOptions& opts) {
    return normalize(ctx, theorem_sum_unnormalized(ctx, depth, opts), depth);
}

DensityResult build_density_up_to(const BetaContext& ctx, int depth, const TreeOptions& opts) {
    OrbitTree tree;
    tree.beta = ctx.beta;
    tree.seed = 1.0;
    OrbitLevel level;
    level.depth = 0;
    level.points = {{1.0, 1.0, classify(ctx, 1.0)}};
    level.total_mass = 1.0;
    tree.levels.push_back(level);
    for (int n = 0; n < depth; ++n) {
        try {
            tree.levels.push_back(extend_level(ctx, tree.levels.back(), opts));
        } catch (const ResourceError&) {
            break;
        }
    }
    const int achieved = tree.levels.back().depth;
    return normalize(ctx, sum_from_tree(ctx, tree), achieved);
}

DensityResult parry_density(const BetaContext& ctx, int depth) {
    if (depth < 0) throw ContractError("depth must be >= 0");
    StepBuilder acc(1.0);
    double t = 1.0;
    double w = 1.0;  // beta^-n
    for (int n = 0; n <= depth; ++n) {
        if (t > 0.0) acc.add_indicator(0.0, t, w);
        t = step_greedy(ctx, t).next;
        w /= ctx.beta;
    }
    StepFunction f = acc.build();
    const double integral = f.integrate();
    const double c = 1.0 / integral;
    f.scale(c);
    const double tail = std::pow(ctx.beta, -depth) / (ctx.beta - 1.0);
    return DensityResult{ctx.beta, std::move(f), c, depth, tail, tail};
}

std::string density_json(const DensityResult& d, const std::map<std::string, std::string>& meta) {
    nlohmann::ordered_json j;
    if (!meta.empty()) j["meta"] = io::meta_json(meta);
    j["beta"] = d.beta;
    j["depth"] = d.depth;
    j["C"] = d.C;
    j["sup_error"] = d.sup_error;
    j["l1_error"] = d.l1_error;
    j["breakpoints"] = d.f.breakpoints();
    j["values"] = d.f.values();
    return j.dump(2) + "\n";
}

std::string density_csv(const DensityResult& d, const std::map<std::string, std::string>& meta) {
    auto full = meta;
    full["beta"] = io::fmt(d.beta);
    full["depth"] = std::to_string(d.depth);
    full["C"] = io::fmt(d.C);
    full["sup_error"] = io::fmt(d.sup_error);
    full["l1_error"] = io::fmt(d.l1_error);
    std::string out = io::csv_header(full);
    out += "x_left,x_right,value\n";
    const auto& b = d.f.breakpoints();
    const auto& v = d.f.values();
    for (std::size_t i = 0; i < v.size(); ++i)
        out += io::fmt(b[i]) + "," + io::fmt(b[i + 1]) + "," + io::fmt(v[i]) + "\n";
    return out;
}

}  // namespace randbeta
