#include "randbeta/tower.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "randbeta/density.hpp"
#include "randbeta/step_function.hpp"
#include "src/io_util.hpp"

namespace randbeta {
namespace {

constexpr int kMaxTowerDepth = 22;

int down_events(Region r) {
    switch (r) {
        case Region::R: return 2;  // T1 forced for both coins
        case Region::S: return 1;  // coin 1 only
        default: return 0;
    }
}

}  // namespace

Tower::Tower(const BetaContext& ctx, int depth) : ctx_(ctx), depth_(depth) {
    if (depth < 0) throw ContractError("tower depth must be >= 0");
    if (depth > kMaxTowerDepth) {
        std::ostringstream os;
        os << "tower depth " << depth << " exceeds the 2^n enumeration cap " << kMaxTowerDepth;
        throw ResourceError(os.str());
    }
    r_.resize(depth + 1);
    cum_down_.resize(depth + 1);
    cum_r_.resize(depth + 1);
    down_before_.resize(depth + 1, 0.0);
    level_base_.resize(depth + 1, 0.0);
    thickness_.resize(depth + 2, 1.0);
    level_mass_.resize(depth + 1, 0.0);

    double base = 0.0, pow_beta = 1.0;  // beta^-n
    for (int n = 0; n <= depth; ++n) {
        level_base_[n] = base;  // sum_{k<n} beta^-k
        base += pow_beta;
        pow_beta /= ctx_.beta;
        thickness_[n + 1] = thickness_[n] / (2.0 * ctx_.beta);
    }

    r_[0] = {1.0};
    for (int n = 0; n < depth; ++n) {
        const auto& cur = r_[n];
        auto& nxt = r_[n + 1];
        nxt.resize(cur.size() * 2);
        for (std::uint64_t p = 0; p < cur.size(); ++p) {
            const Region reg = classify(ctx_, cur[p]);
            for (std::uint64_t c = 0; c <= 1; ++c) {
                const Digit d = (reg == Region::L)   ? Digit::zero
                                : (reg == Region::R) ? Digit::one
                                                     : static_cast<Digit>(c);
                double child = apply_branch(ctx_, d, cur[p]);
                child = std::min(std::max(child, 0.0), ctx_.right_end);
                nxt[p + (c << n)] = child;
            }
        }
    }

    double accumulated = 0.0;
    for (int n = 0; n <= depth; ++n) {
        const auto& cur = r_[n];
        cum_down_[n].resize(cur.size());
        cum_r_[n].resize(cur.size());
        double cd = 0.0, cr = 0.0;
        for (std::uint64_t p = 0; p < cur.size(); ++p) {
            cd += down_events(classify(ctx_, cur[p])) * thickness_[n + 1];
            cr += cur[p];
            cum_down_[n][p] = cd;
            cum_r_[n][p] = cr;
        }
        down_before_[n] = accumulated;
        accumulated += cd;
        level_mass_[n] = cr * thickness_[n];
    }
}

double Tower::base_height(int n, std::uint64_t path) const {
    return level_base_[n] + static_cast<double>(path) * thickness_[n];
}

Sublevel Tower::sublevel(int n, std::uint64_t path) const {
    return Sublevel{n, path, path + 1, r_[n][path], base_height(n, path), thickness_[n]};
}

std::vector<Sublevel> Tower::layout() const {
    std::vector<Sublevel> out;
    for (int n = 0; n <= depth_; ++n)
        for (std::uint64_t p = 0; p < r_[n].size(); ++p) out.push_back(sublevel(n, p));
    return out;
}

DefectZone Tower::defect_set(int n, std::uint64_t path, Digit coin) const {
    if (coin == Digit::zero && classify(ctx_, r_[n][path]) == Region::R)
        return DefectZone{true, ctx_.s_left, ctx_.s_right};
    return DefectZone{false, 0.0, 0.0};
}

double Tower::down_offset(int n, std::uint64_t path, Digit plain_coin) const {
    double off = down_before_[n] + (path > 0 ? cum_down_[n][path - 1] : 0.0);
    if (plain_coin == Digit::one && classify(ctx_, r_[n][path]) == Region::R)
        off += thickness_[n + 1];  // the coin-0 strip of the same parent stacks first
    return off;
}

bool Tower::contains(const TowerPoint& p, double tol) const {
    if (p.depth < 0 || p.depth > depth_) return false;
    if (p.path >= r_[p.depth].size()) return false;
    const double w = r_[p.depth][p.path];
    const double v = base_height(p.depth, p.path);
    const double th = thickness_[p.depth];
    if (p.side == Side::plain)
        return p.x >= -tol && p.x <= w + tol && p.y >= v - tol && p.y <= v + th + tol;
    return p.x >= ctx_.right_end - w - tol && p.x <= ctx_.right_end + tol &&
           p.y <= -v + tol && p.y >= -(v + th) - tol;
}

TowerStep Tower::psi_step(const TowerPoint& p, Digit coin) const {
    if (!contains(p, 1e-9)) throw ContractError("tower point outside its sublevel");
    const int n = p.depth;
    const bool plain = p.side == Side::plain;
    const Digit plain_coin = plain ? coin : flip(coin);
    const Region r_region = classify(ctx_, r_[n][p.path]);
    const bool t1_on_r =
        r_region == Region::R || (r_region == Region::S && plain_coin == Digit::one);

    const double v_parent = base_height(n, p.path);
    const double y_plain = plain ? p.y : -p.y;
    const double shrunk = (y_plain - v_parent) / (2.0 * ctx_.beta);

    TowerStep out;
    bool goes_up = true;
    Digit digit = Digit::zero;  // branch applied to the actual x-coordinate
    if (!t1_on_r) {
        digit = plain ? Digit::zero : Digit::one;
    } else {
        const Region xr = classify(ctx_, p.x);
        const bool down = plain ? (xr == Region::L) : (xr == Region::R);
        if (down) {
            goes_up = false;
            digit = plain ? Digit::zero : Digit::one;
        } else {
            digit = plain ? Digit::one : Digit::zero;
            out.defect =
                plain_coin == Digit::zero && r_region == Region::R && xr == Region::S;
        }
    }

    out.point.side = p.side;
    out.point.x = apply_branch(ctx_, digit, p.x);
    if (goes_up) {
        if (n + 1 > depth_) {
            out.left_truncation = true;
            out.point = p;
            return out;
        }
        const std::uint64_t child =
            p.path + (static_cast<std::uint64_t>(plain_coin) << n);
        out.point.depth = n + 1;
        out.point.path = child;
        const double y_new = base_height(n + 1, child) + shrunk;
        out.point.y = plain ? y_new : -y_new;
    } else {
        out.point.depth = 0;
        out.point.path = 0;
        const double y_new = down_offset(n, p.path, plain_coin) + shrunk;
        out.point.y = plain ? y_new : -y_new;
    }
    return out;
}

TowerStep Tower::natural_extension_step(const TowerPoint& p, Digit coin) const {
    TowerStep st = psi_step(p, coin);
    if (st.left_truncation || !st.defect) return st;
    // Q: swap with the mirror-image rectangle of the opposite tower. The
    // sublevel label (plain twin path) is shared by construction.
    if (st.point.side == Side::plain) {
        st.point.x = st.point.x + 1.0;
        st.point.side = Side::reflected;
    } else {
        st.point.x = st.point.x - 1.0;
        st.point.side = Side::plain;
    }
    st.point.y = -st.point.y;
    return st;
}

TowerPoint Tower::sample(Rng& rng) const {
    double total = 0.0;
    for (int n = 0; n <= depth_; ++n) total += level_mass_[n];
    const double pick = rng.uniform01() * total;
    int n = 0;
    double acc = 0.0;
    for (; n < depth_; ++n) {
        acc += level_mass_[n];
        if (pick < acc) break;
    }
    const auto& cr = cum_r_[n];
    const double target = rng.uniform01() * cr.back();
    const std::uint64_t path =
        std::lower_bound(cr.begin(), cr.end(), target) - cr.begin();
    const double w = r_[n][path];
    const double v = base_height(n, path);
    TowerPoint p;
    p.depth = n;
    p.path = std::min<std::uint64_t>(path, cr.size() - 1);
    p.side = rng.coin() == Digit::zero ? Side::plain : Side::reflected;
    const double xf = rng.uniform01() * w;
    const double yf = v + rng.uniform01() * thickness_[n];
    if (p.side == Side::plain) {
        p.x = xf;
        p.y = yf;
    } else {
        p.x = ctx_.right_end - xf;
        p.y = -yf;
    }
    return p;
}

MassLedger mass_identity(const BetaContext& ctx, int depth, const TreeOptions& opts) {
    if (depth < 0) throw ContractError("depth must be >= 0");
    const OrbitTree tree = build_tree(ctx, 1.0, depth + 1, opts);
    MassLedger ledger;
    ledger.per_depth.reserve(depth + 1);
    double wn = 1.0;  // beta^-n
    double sum = 0.0;
    for (int n = 0; n <= depth; ++n) {
        double d = 0.0;
        for (const auto& p : tree.levels[n].points) {
            if (p.region == Region::R)
                d += p.mass * wn / ctx.beta;
            else if (p.region == Region::S)
                d += p.mass * wn / (2.0 * ctx.beta);
        }
        ledger.per_depth.push_back(d);
        sum += d;
        wn /= ctx.beta;
    }
    ledger.partial_sum = sum;
    double expected_r = 0.0;
    for (const auto& p : tree.levels[depth + 1].points) expected_r += p.mass * p.value;
    ledger.next_level_mass = wn * expected_r;  // wn = beta^-(depth+1) here
    ledger.gap_bound = wn * ctx.right_end;
    return ledger;
}

VerificationReport verify_measure_preservation(const BetaContext& ctx, int depth,
                                               std::uint64_t samples, std::uint64_t seed) {
    const Tower tower(ctx, depth);
    const DensityResult density = build_density(ctx, depth);
    VerificationReport rep;
    rep.samples = samples;
    rep.determinant_residual =
        std::fabs(ctx.beta * (1.0 / (2.0 * ctx.beta)) - 0.5);
    rep.top_level_mass = tower.level_mass(depth);

    struct Record {
        TowerPoint in;
        Digit coin;
        TowerPoint out;
    };
    std::vector<Record> recs;
    recs.reserve(samples);
    Rng rng(seed);

    const int bins = 100;
    std::vector<double> occupancy(bins, 0.0);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const TowerPoint p = tower.sample(rng);
        const Digit coin = rng.coin();
        const int bin = std::min(bins - 1, static_cast<int>(p.x / ctx.right_end * bins));
        occupancy[bin] += 1.0;
        const TowerStep st = tower.natural_extension_step(p, coin);
        if (st.left_truncation) {
            ++rep.escaped_truncation;
            continue;
        }
        if (st.point.x != step_random(ctx, p.x, coin).next) ++rep.projection_mismatches;
        recs.push_back({p, coin, st.point});
    }

    // Injectivity at sample resolution: identical images from inputs that were
    // not themselves identical.
    std::sort(recs.begin(), recs.end(), [](const Record& a, const Record& b) {
        if (a.out.x != b.out.x) return a.out.x < b.out.x;
        return a.out.y < b.out.y;
    });
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
        const Record& a = recs[i];
        const Record& b = recs[i + 1];
        if (a.out.side != b.out.side) continue;
        if (std::fabs(a.out.x - b.out.x) > 1e-9 || std::fabs(a.out.y - b.out.y) > 1e-9) continue;
        const bool same_cell = a.in.side == b.in.side && a.in.depth == b.in.depth &&
                               a.in.path == b.in.path && a.coin == b.coin;
        const bool same_point = same_cell && std::fabs(a.in.x - b.in.x) <= 1e-9 &&
                                std::fabs(a.in.y - b.in.y) <= 1e-9;
        if (!same_point) ++rep.injectivity_violations;
    }

    // x-marginal of tower-uniform samples against the density at the same
    // truncation depth.
    std::vector<double> edges(bins + 1);
    for (int i = 0; i <= bins; ++i) edges[i] = ctx.right_end * i / bins;
    std::vector<double> dens(bins);
    const double width = ctx.right_end / bins;
    for (int i = 0; i < bins; ++i)
        dens[i] = occupancy[i] / (static_cast<double>(samples) * width);
    rep.occupancy_l1 = l1_distance(StepFunction(std::move(edges), std::move(dens)), density.f);
    return rep;
}

std::string tower_layout_json(const Tower& tower, const std::map<std::string, std::string>& meta) {
    nlohmann::ordered_json j;
    if (!meta.empty()) j["meta"] = io::meta_json(meta);
    j["beta"] = tower.ctx().beta;
    j["depth"] = tower.depth();
    auto& subs = j["sublevels"];
    subs = nlohmann::ordered_json::array();
    for (const auto& s : tower.layout()) {
        std::string prefix;
        for (int i = 0; i < s.depth; ++i) prefix += ((s.path >> i) & 1) ? '1' : '0';
        nlohmann::ordered_json js;
        js["prefix"] = prefix;
        js["width"] = s.width;
        js["base_height"] = s.base_height;
        js["thickness"] = s.thickness;
        js["defect_coin0"] = tower.defect_set(s.depth, s.path, Digit::zero).is_defect;
        js["defect_coin1"] = tower.defect_set(s.depth, s.path, Digit::one).is_defect;
        subs.push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

std::string verification_json(const VerificationReport& r, const MassLedger& ledger,
                              const std::map<std::string, std::string>& meta) {
    nlohmann::ordered_json j;
    if (!meta.empty()) j["meta"] = io::meta_json(meta);
    j["samples"] = r.samples;
    j["escaped_truncation"] = r.escaped_truncation;
    j["projection_mismatches"] = r.projection_mismatches;
    j["injectivity_violations"] = r.injectivity_violations;
    j["determinant_residual"] = r.determinant_residual;
    j["occupancy_l1"] = r.occupancy_l1;
    j["top_level_mass"] = r.top_level_mass;
    j["mass_partial_sum"] = ledger.partial_sum;
    j["mass_next_level"] = ledger.next_level_mass;
    j["mass_gap_bound"] = ledger.gap_bound;
    j["mass_identity_residual"] =
        std::fabs(ledger.partial_sum + ledger.next_level_mass - 1.0);
    return j.dump(2) + "\n";
}

}  // namespace randbeta
