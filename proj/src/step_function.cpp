#include "randbeta/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace randbeta {
namespace {

// Compensated accumulator; integrals over millions of pieces must stay well
// below the 1e-12 tolerances the tests pin.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double term) {
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

void check_domain_match(const StepFunction& f, const StepFunction& g) {
    if (std::fabs(f.domain_right() - g.domain_right()) > 1e-9) {
        std::ostringstream os;
        os << "domain mismatch: " << f.domain_right() << " vs " << g.domain_right();
        throw ContractError(os.str());
    }
}

}  // namespace

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size())
        throw ContractError("step function needs k+1 breakpoints for k >= 1 pieces");
    if (breaks_.front() != 0.0) throw ContractError("first breakpoint must be 0");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1]))
            throw ContractError("breakpoints must be strictly increasing");
    coalesce_values(0.0);
}

StepFunction StepFunction::constant(double value, double domain_right) {
    return StepFunction({0.0, domain_right}, {value});
}

double StepFunction::evaluate(double x) const {
    if (x < 0.0 || x > domain_right()) {
        std::ostringstream os;
        os << "evaluate: x = " << x << " outside [0, " << domain_right() << "]";
        throw ContractError(os.str());
    }
    if (x >= breaks_[breaks_.size() - 2]) return values_.back();
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double StepFunction::integrate() const {
    KahanSum s;
    for (std::size_t i = 0; i < values_.size(); ++i)
        s.add(values_[i] * (breaks_[i + 1] - breaks_[i]));
    return s.sum;
}

double StepFunction::measure_of(double a, double b) const {
    if (!(0.0 <= a && a <= b && b <= domain_right())) {
        std::ostringstream os;
        os << "measure_of: need 0 <= " << a << " <= " << b << " <= " << domain_right();
        throw ContractError(os.str());
    }
    KahanSum s;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double lo = std::max(a, breaks_[i]);
        const double hi = std::min(b, breaks_[i + 1]);
        if (hi > lo) s.add(values_[i] * (hi - lo));
        if (breaks_[i] > b) break;
    }
    return s.sum;
}

double StepFunction::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

double StepFunction::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

void StepFunction::scale(double factor) {
    for (double& v : values_) v *= factor;
}

void StepFunction::coalesce_values(double tol) {
    std::vector<double> nb{breaks_.front()};
    std::vector<double> nv;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!nv.empty() && std::fabs(values_[i] - nv.back()) <= tol) {
            nb.back() = breaks_[i + 1];
        } else {
            nv.push_back(values_[i]);
            nb.push_back(breaks_[i + 1]);
        }
    }
    breaks_ = std::move(nb);
    values_ = std::move(nv);
}

StepBuilder::StepBuilder(double domain_right) : domain_right_(domain_right) {
    if (!(domain_right > 0.0)) throw ContractError("domain_right must be positive");
}

void StepBuilder::add_indicator(double a, double b, double weight) {
    a = std::max(a, 0.0);
    b = std::min(b, domain_right_);
    if (!(b > a)) return;
    events_.emplace_back(a, weight);
    events_.emplace_back(b, -weight);
}

StepFunction StepBuilder::build() const {
    auto ev = events_;
    std::stable_sort(ev.begin(), ev.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });

    std::vector<double> breaks{0.0};
    std::vector<double> values;
    KahanSum level;
    std::size_t i = 0;
    while (i < ev.size()) {
        const double pos = ev[i].first;
        if (pos > breaks.back()) {
            values.push_back(level.sum);
            breaks.push_back(pos);
        }
        while (i < ev.size() && ev[i].first == pos) level.add(ev[i++].second);
    }
    if (breaks.back() < domain_right_) {
        values.push_back(level.sum);
        breaks.push_back(domain_right_);
    }
    if (values.empty()) return StepFunction::constant(0.0, domain_right_);
    return StepFunction(std::move(breaks), std::move(values));
}

double l1_distance(const StepFunction& f, const StepFunction& g) {
    check_domain_match(f, g);
    const auto& fb = f.breakpoints();
    const auto& gb = g.breakpoints();
    KahanSum s;
    std::size_t fi = 0, gi = 0;
    double left = 0.0;
    const double right = std::min(f.domain_right(), g.domain_right());
    while (left < right) {
        const double fe = fb[fi + 1];
        const double ge = gb[gi + 1];
        const double edge = std::min({fe, ge, right});
        s.add(std::fabs(f.values()[fi] - g.values()[gi]) * (edge - left));
        if (fe <= edge && fi + 2 < fb.size()) ++fi;
        if (ge <= edge && gi + 2 < gb.size()) ++gi;
        left = edge;
    }
    return s.sum;
}

namespace {

std::vector<double> merged_grid(const std::vector<double>& a, const std::vector<double>& b,
                                double position_tol) {
    std::vector<double> grid;
    grid.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(grid));
    std::vector<double> out;
    for (double p : grid)
        if (out.empty() || p - out.back() > position_tol) out.push_back(p);
    return out;
}

}  // namespace

double sup_distance(const StepFunction& f, const StepFunction& g, double position_tol) {
    check_domain_match(f, g);
    const auto grid = merged_grid(f.breakpoints(), g.breakpoints(), position_tol);
    const double right = std::min(f.domain_right(), g.domain_right());
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double mid = 0.5 * (grid[i] + std::min(grid[i + 1], right));
        if (mid >= right) break;
        worst = std::max(worst, std::fabs(f.evaluate(mid) - g.evaluate(mid)));
    }
    return worst;
}

double symmetry_defect(const StepFunction& f, double position_tol) {
    const double r = f.domain_right();
    std::vector<double> reflected;
    reflected.reserve(f.breakpoints().size());
    for (auto it = f.breakpoints().rbegin(); it != f.breakpoints().rend(); ++it)
        reflected.push_back(r - *it);
    const auto grid = merged_grid(f.breakpoints(), reflected, position_tol);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double mid = 0.5 * (grid[i] + grid[i + 1]);
        const double mirror = r - mid;
        if (mid > r || mirror < 0.0 || mirror > r) continue;
        worst = std::max(worst, std::fabs(f.evaluate(mid) - f.evaluate(mirror)));
    }
    return worst;
}

double quantile(const StepFunction& density, double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw ContractError("quantile: u must be in [0, 1]");
    const double total = density.integrate();
    if (!(total > 0.0)) throw ContractError("quantile: density must have positive mass");
    const double target = u * total;
    double cum = 0.0;
    const auto& b = density.breakpoints();
    const auto& v = density.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double piece = v[i] * (b[i + 1] - b[i]);
        if (cum + piece >= target && v[i] > 0.0)
            return std::min(b[i] + (target - cum) / v[i], b[i + 1]);
        cum += piece;
    }
    return density.domain_right();
}

}  // namespace randbeta
