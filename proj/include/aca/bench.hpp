#pragma once

#include "aca/marching.hpp"
#include "aca/trajectory.hpp"

namespace aca {

// How much slower the embedding runs under random updating than the base
// does synchronously. Each site is attempted with probability p per step
// (a discrete stand-in for independent Poisson clocks), so a site sees about
// p*steps attempts; the slowdown factor is attempts per realized update.
struct PoissonBench {
    int steps = 0;
    double p = 0;
    double attempts_per_site = 0;
    int min_age = 0;
    double mean_age = 0;
    double factor_min = 0;  // attempts / slowest site's progress
    double factor_mean = 0; // attempts / average progress
};

inline PoissonBench bench_poisson(const RuleTable1D& base, int width, double p, int steps,
                                  std::uint64_t seed) {
    const MarchingRule rule{base};
    Configuration base_cfg;
    base_cfg.origin = 0;
    base_cfg.cells.assign(static_cast<std::size_t>(width), 0);
    base_cfg.boundary = base.boundary();
    const Configuration init = lift_config(rule, base_cfg);
    const StreamResult run = simulate_stream(rule, init, Schedule::bernoulli(p, seed), steps);

    PoissonBench b;
    b.steps = steps;
    b.p = p;
    b.attempts_per_site = p * steps;
    b.min_age = run.ages.empty() ? 0 : *std::min_element(run.ages.begin(), run.ages.end());
    long long total = 0;
    for (const int a : run.ages) total += a;
    b.mean_age = run.ages.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(run.ages.size());
    b.factor_min = b.min_age > 0 ? b.attempts_per_site / b.min_age : 0.0;
    b.factor_mean = b.mean_age > 0 ? b.attempts_per_site / b.mean_age : 0.0;
    return b;
}

} // namespace aca
