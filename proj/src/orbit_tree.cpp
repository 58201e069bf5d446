#include "randbeta/orbit_tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "src/io_util.hpp"

namespace randbeta {
namespace {

double clamp_child(const BetaContext& ctx, double child) {
    // Children of in-domain parents stay in the interval up to rounding noise;
    // anything past boundary_tol means the inputs were corrupt.
    if (child < -ctx.boundary_tol || child > ctx.right_end + ctx.boundary_tol) {
        std::ostringstream os;
        os.precision(17);
        os << "orbit point " << child << " escaped [0, " << ctx.right_end
           << "] beyond tolerance " << ctx.boundary_tol
           << ": numeric drift or invalid input level";
        throw ContractError(os.str());
    }
    return std::min(std::max(child, 0.0), ctx.right_end);
}

std::vector<OrbitPoint> merge_sorted(const BetaContext& ctx, std::vector<OrbitPoint>&& pts,
                                     double merge_tol) {
    std::vector<OrbitPoint> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        if (!out.empty() && p.value - out.back().value <= merge_tol)
            out.back().mass += p.mass;
        else
            out.push_back(p);
    }
    for (auto& p : out) p.region = classify(ctx, p.value);
    return out;
}

bool values_subset_of(const std::vector<double>& sorted_universe,
                      const std::vector<OrbitPoint>& pts, double tol) {
    for (const auto& p : pts) {
        auto it = std::lower_bound(sorted_universe.begin(), sorted_universe.end(), p.value - tol);
        if (it == sorted_universe.end() || std::fabs(*it - p.value) > tol) return false;
    }
    return true;
}

}  // namespace

OrbitLevel extend_level(const BetaContext& ctx, const OrbitLevel& level, const TreeOptions& opts) {
    std::vector<OrbitPoint> children;
    children.reserve(level.points.size() * 2);
    for (const auto& p : level.points) {
        switch (p.region) {
            case Region::L:
                children.push_back({clamp_child(ctx, apply_branch(ctx, Digit::zero, p.value)),
                                    p.mass, Region::L});
                break;
            case Region::R:
                children.push_back({clamp_child(ctx, apply_branch(ctx, Digit::one, p.value)),
                                    p.mass, Region::L});
                break;
            case Region::S:
                children.push_back({clamp_child(ctx, apply_branch(ctx, Digit::zero, p.value)),
                                    p.mass / 2, Region::L});
                children.push_back({clamp_child(ctx, apply_branch(ctx, Digit::one, p.value)),
                                    p.mass / 2, Region::L});
                break;
        }
    }
    std::sort(children.begin(), children.end(),
              [](const OrbitPoint& a, const OrbitPoint& b) { return a.value < b.value; });
    OrbitLevel next;
    next.depth = level.depth + 1;
    next.points = merge_sorted(ctx, std::move(children), opts.merge_tol);
    if (next.points.size() > opts.point_cap) {
        std::ostringstream os;
        os << "orbit level " << next.depth << " has " << next.points.size()
           << " points, cap is " << opts.point_cap
           << "; reduce depth or raise the cap (exact mode would keep algebraic orbits finite)";
        throw ResourceError(os.str());
    }
    double mass = 0.0;
    for (const auto& p : next.points) mass += p.mass;
    next.total_mass = mass;
    return next;
}

OrbitTree build_tree(const BetaContext& ctx, double seed, int depth, const TreeOptions& opts) {
    if (depth < 0) throw ContractError("depth must be >= 0");
    if (seed < 0.0 || seed > ctx.right_end) throw ContractError("seed outside the interval");
    OrbitTree tree;
    tree.beta = ctx.beta;
    tree.seed = seed;
    OrbitLevel level;
    level.depth = 0;
    level.points = {{seed, 1.0, classify(ctx, seed)}};
    level.total_mass = 1.0;
    tree.levels.push_back(level);

    std::vector<double> universe = {seed};
    for (int n = 0; n < depth; ++n) {
        level = extend_level(ctx, tree.levels.back(), opts);
        tree.is_eventually_finite = values_subset_of(universe, level.points, opts.merge_tol);
        std::vector<double> level_values;
        level_values.reserve(level.points.size());
        for (const auto& p : level.points) level_values.push_back(p.value);
        std::vector<double> merged;
        merged.reserve(universe.size() + level_values.size());
        std::merge(universe.begin(), universe.end(), level_values.begin(), level_values.end(),
                   std::back_inserter(merged));
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        universe.swap(merged);
        tree.levels.push_back(std::move(level));
    }
    tree.support_sizes.reserve(tree.levels.size());
    for (const auto& l : tree.levels) tree.support_sizes.push_back(l.points.size());
    return tree;
}

OrbitTree mirror_tree(const BetaContext& ctx, const OrbitTree& tree) {
    OrbitTree out;
    out.beta = tree.beta;
    out.seed = ctx.right_end - tree.seed;
    out.is_eventually_finite = tree.is_eventually_finite;
    out.levels.reserve(tree.levels.size());
    for (const auto& level : tree.levels) {
        OrbitLevel m;
        m.depth = level.depth;
        m.total_mass = level.total_mass;
        m.points.reserve(level.points.size());
        for (auto it = level.points.rbegin(); it != level.points.rend(); ++it) {
            const double v = ctx.right_end - it->value;
            m.points.push_back({v, it->mass, classify(ctx, v)});
        }
        out.levels.push_back(std::move(m));
    }
    out.support_sizes = tree.support_sizes;
    return out;
}

std::string tree_json(const OrbitTree& tree, const std::map<std::string, std::string>& meta) {
    nlohmann::ordered_json j;
    if (!meta.empty()) j["meta"] = io::meta_json(meta);
    j["beta"] = tree.beta;
    j["seed"] = tree.seed;
    j["depth"] = tree.levels.empty() ? 0 : tree.levels.back().depth;
    j["is_eventually_finite"] = tree.is_eventually_finite;
    j["support_sizes"] = tree.support_sizes;
    auto& levels = j["levels"];
    levels = nlohmann::ordered_json::array();
    for (const auto& level : tree.levels) {
        nlohmann::ordered_json jl;
        jl["n"] = level.depth;
        auto& pts = jl["points"];
        pts = nlohmann::ordered_json::array();
        for (const auto& p : level.points) pts.push_back({{"value", p.value}, {"mass", p.mass}});
        levels.push_back(std::move(jl));
    }
    return j.dump(2) + "\n";
}

}  // namespace randbeta
