#pragma once

#include <cstddef>
#include <vector>

#include "randbeta/errors.hpp"

namespace randbeta {

/// Piecewise-constant function on [0, domain_right]. Breakpoints are strictly
/// increasing with b0 = 0 and bk = domain_right; values[i] holds on
/// [b_i, b_{i+1}), the last piece is closed on the right. Adjacent pieces with
/// exactly equal values are coalesced on construction.
class StepFunction {
  public:
    StepFunction(std::vector<double> breakpoints, std::vector<double> values);

    static StepFunction constant(double value, double domain_right);

    double domain_right() const { return breaks_.back(); }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t piece_count() const { return values_.size(); }

    double evaluate(double x) const;
    double integrate() const;
    /// Exact integral over [a, b]; requires 0 <= a <= b <= domain_right.
    double measure_of(double a, double b) const;
    double min_value() const;
    double max_value() const;

    void scale(double factor);
    /// Merge adjacent pieces whose values differ by at most tol (first piece's
    /// value wins). tol = 0 merges exact duplicates only.
    void coalesce_values(double tol);

  private:
    std::vector<double> breaks_;
    std::vector<double> values_;
};

/// Accumulates weighted indicators of intervals and produces the canonical
/// step function of their sum. Zero-length or inverted intervals are dropped;
/// endpoints a hair outside the domain (fp noise) are clamped.
class StepBuilder {
  public:
    explicit StepBuilder(double domain_right);

    void add_indicator(double a, double b, double weight);
    std::size_t event_count() const { return events_.size(); }

    StepFunction build() const;

  private:
    double domain_right_;
    std::vector<std::pair<double, double>> events_;  // (position, weight delta)
};

/// Exact L1 distance via merged breakpoints. Domains must agree to 1e-9.
double l1_distance(const StepFunction& f, const StepFunction& g);

/// Sup distance sampled at midpoints of the merged breakpoint grid.
/// Breakpoints closer than position_tol are treated as one edge, so slivers
/// created by fp-noise breakpoint misalignment do not register.
double sup_distance(const StepFunction& f, const StepFunction& g, double position_tol = 1e-12);

/// sup_x |f(x) - f(domain_right - x)| over the reflection-refined grid, with
/// the same sliver coalescing as sup_distance.
double symmetry_defect(const StepFunction& f, double position_tol = 1e-12);

/// Inverse CDF of a nonnegative step density: smallest x with
/// integral over [0, x] >= u * integrate(). Requires u in [0, 1].
double quantile(const StepFunction& density, double u);

}  // namespace randbeta
