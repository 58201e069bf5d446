#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "randbeta/context.hpp"

namespace randbeta {

struct OrbitPoint {
    double value;
    double mass;
    Region region;
};

/// Deduplicated, mass-weighted orbit points at one depth. Points are sorted by
/// value, pairwise separated by more than merge_tol, and carry total mass 1:
/// a point of mass m stands for the fraction m of the 2^n coin prefixes whose
/// endpoint landed there.
struct OrbitLevel {
    int depth = 0;
    std::vector<OrbitPoint> points;
    double total_mass = 0.0;
};

struct OrbitTree {
    double beta = 0.0;
    double seed = 0.0;
    std::vector<OrbitLevel> levels;  // depths 0..N
    std::vector<std::size_t> support_sizes;
    // True when the deepest level introduced no value absent from the union of
    // the earlier levels (the value set closed up). Report-only.
    bool is_eventually_finite = false;
};

struct TreeOptions {
    double merge_tol = 1e-11;
    std::size_t point_cap = std::size_t(1) << 22;
};

/// One branching step: L points move by T0, R points by T1, S points split
/// into both children with half the mass each; children within merge_tol are
/// merged by mass addition. Total mass is conserved.
OrbitLevel extend_level(const BetaContext& ctx, const OrbitLevel& level,
                        const TreeOptions& opts = {});

/// Iterates extend_level from a single unit-mass seed (1 or mirror_of_one for
/// the two trees the density formula needs; any point of the interval works).
OrbitTree build_tree(const BetaContext& ctx, double seed, int depth,
                     const TreeOptions& opts = {});

/// The tree of the reflected seed, obtained by the exact pointwise reflection
/// value -> right_end - value with masses kept. Levels are re-sorted. Agrees
/// with build_tree(ctx, mirror_of_one, ...) up to merge_tol (property-tested).
OrbitTree mirror_tree(const BetaContext& ctx, const OrbitTree& tree);

std::string tree_json(const OrbitTree& tree, const std::map<std::string, std::string>& meta = {});

}  // namespace randbeta
