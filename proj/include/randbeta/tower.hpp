#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "randbeta/context.hpp"
#include "randbeta/orbit_tree.hpp"
#include "randbeta/rng.hpp"

namespace randbeta {

/// One rectangle of the tower: x in [0, width], y in
/// [base_height, base_height + thickness), labelled by the coin prefix that
/// produced its right endpoint. rank = 1 + sum omega_i 2^(i-1); the depth-n
/// sublevels tile their level's y-band in rank order.
struct Sublevel {
    int depth = 0;
    std::uint64_t path = 0;  // omega_i = bit (i-1)
    std::uint64_t rank = 1;
    double width = 0.0;       // r(prefix), an orbit point of 1
    double base_height = 0.0; // v(prefix)
    double thickness = 0.0;   // (2 beta)^-depth
};

enum class Side : std::uint8_t { plain, reflected };

/// A point of the two-tower system in actual coordinates. path always labels
/// the sublevel through its plain twin (the orbit-of-1 prefix); on the
/// reflected side the geometric rectangle is the mirror image
/// x in [right_end - width, right_end], y in (-base - thickness, -base].
struct TowerPoint {
    Side side = Side::plain;
    int depth = 0;
    std::uint64_t path = 0;
    double x = 0.0;
    double y = 0.0;
};

struct DefectZone {
    bool is_defect = false;
    double x_lo = 0.0;
    double x_hi = 0.0;
};

struct TowerStep {
    TowerPoint point;
    bool defect = false;           // the swap was (or, for psi alone, should be) applied
    bool left_truncation = false;  // the image lies above the truncated depth
};

/// Tower of both orbit trees truncated at a fixed depth (full 2^n prefix
/// enumeration; capped at depth 22). Immutable once built.
class Tower {
  public:
    Tower(const BetaContext& ctx, int depth);

    const BetaContext& ctx() const { return ctx_; }
    int depth() const { return depth_; }

    double width(int n, std::uint64_t path) const { return r_[n][path]; }
    double base_height(int n, std::uint64_t path) const;
    double thickness(int n) const { return thickness_[n]; }
    Sublevel sublevel(int n, std::uint64_t path) const;
    std::vector<Sublevel> layout() const;

    /// Nonempty exactly when the prefix endpoint is in R and the coin is 0;
    /// then the x-range is the switch region.
    DefectZone defect_set(int n, std::uint64_t path, Digit coin) const;

    /// One application of the tower map psi. Does not swap defective images;
    /// the reported image of a defect point has x = step_random(x) -+ 1.
    TowerStep psi_step(const TowerPoint& p, Digit coin) const;

    /// psi followed by the swap Q on defective images. The x-coordinate of the
    /// result is bit-identical to step_random(p.x, coin).
    TowerStep natural_extension_step(const TowerPoint& p, Digit coin) const;

    bool contains(const TowerPoint& p, double tol = 1e-9) const;

    /// Uniform sample w.r.t. the tower volume (two sides weighted equally,
    /// sublevels by their area).
    TowerPoint sample(Rng& rng) const;

    /// Mass of one truncated level: sum over prefixes of width * thickness.
    double level_mass(int n) const { return level_mass_[n]; }

  private:
    double down_offset(int n, std::uint64_t path, Digit plain_coin) const;

    BetaContext ctx_;
    int depth_;
    std::vector<std::vector<double>> r_;
    std::vector<std::vector<double>> cum_down_;  // inclusive prefix sums of down-event thickness
    std::vector<std::vector<double>> cum_r_;     // inclusive prefix sums of widths (sampling)
    std::vector<double> down_before_;            // down-event thickness of all shallower levels
    std::vector<double> level_base_;             // sum_{k<n} beta^-k
    std::vector<double> thickness_;              // (2 beta)^-n
    std::vector<double> level_mass_;
};

/// Down-mapped mass per parent depth, aggregated over the deduplicated orbit
/// tree: every (prefix, coin) pair whose step acts by T1 contributes
/// (2 beta)^-(depth+1). partial_sum approaches 1 from below; the shortfall is
/// exactly the mass of the first untracked level.
struct MassLedger {
    std::vector<double> per_depth;
    double partial_sum = 0.0;
    double next_level_mass = 0.0;  // tower mass of level depth+1
    double gap_bound = 0.0;        // beta^-(depth+1) * right_end
};

MassLedger mass_identity(const BetaContext& ctx, int depth, const TreeOptions& opts = {});

struct VerificationReport {
    std::uint64_t samples = 0;
    std::uint64_t escaped_truncation = 0;
    std::uint64_t projection_mismatches = 0;  // x-projection vs step_random, bitwise
    std::uint64_t injectivity_violations = 0;
    double determinant_residual = 0.0;  // |beta * 1/(2 beta) - 1/2|
    double occupancy_l1 = 0.0;          // sampled x-marginal vs the density at equal depth
    double top_level_mass = 0.0;        // truncation exposure
};

VerificationReport verify_measure_preservation(const BetaContext& ctx, int depth,
                                               std::uint64_t samples, std::uint64_t seed);

std::string tower_layout_json(const Tower& tower,
                              const std::map<std::string, std::string>& meta = {});
std::string verification_json(const VerificationReport& r, const MassLedger& ledger,
                              const std::map<std::string, std::string>& meta = {});

}  // namespace randbeta
