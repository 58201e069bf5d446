#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "randbeta/context.hpp"
#include "randbeta/step_function.hpp"

namespace randbeta {

struct SimConfig {
    double beta = 0.0;
    std::uint64_t steps = 0;
    std::uint64_t burn_in = 0;
    std::uint32_t bins = 100;
    std::uint64_t seed = 42;
    double x0 = -1.0;  // negative means the default 0.5 * right_end
};

struct Histogram {
    std::vector<double> bin_edges;           // bins+1 uniform edges over [0, right_end]
    std::vector<std::uint64_t> counts;       // sum = steps - burn_in
    std::vector<double> normalized_density;  // integrates to 1
};

struct SimResult {
    Histogram hist;
    double s_fraction = 0.0;  // empirical time in the switch region
};

/// Iterates the random map with i.i.d. fair coins, recording states after the
/// burn-in. Bit-reproducible for a fixed config.
SimResult run_orbit(const SimConfig& cfg);

/// Exact L1 distance between the histogram's piecewise-constant density and f.
double histogram_l1(const Histogram& h, const StepFunction& f);

std::string histogram_csv(const SimResult& r, const std::map<std::string, std::string>& meta = {});

}  // namespace randbeta
