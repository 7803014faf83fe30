#pragma once

#include "d3f/characterize.hpp"
#include "d3f/dataset.hpp"

#include <cstdint>
#include <vector>

namespace d3f {

// How trial sequences are drawn from the score pool.
//  with_replacement: every draw is uniform over the whole pool (default).
//  without_replacement: trials walk a seeded permutation of the pool, so no
//  score repeats within a trial (or within a pass); the permutation is redrawn
//  whenever fewer than n values remain. With n = 1 and trials equal to the
//  pool size this visits every score exactly once.
enum class SamplingMode { with_replacement, without_replacement };

struct SimulationPlan {
    std::vector<int> ns;
    std::vector<double> gammas;
    long trials = 100000;
    std::uint64_t seed = 1;
    SamplingMode sampling = SamplingMode::with_replacement;
};

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

// 95% Wilson score interval (z pinned to 1.959963984540054).
WilsonInterval wilson_interval(long events, long trials, double z = 1.959963984540054);

struct EmpiricalEstimate {
    Hypothesis hypothesis = Hypothesis::h0;
    int n = 0;
    double gamma = 0.0;
    long trials = 0;
    long events = 0; // decision errors observed
    double p_hat = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 1.0;
    bool low_confidence = false; // fewer than 10 error events
};

// Estimate the error probability of the threshold test for every (n, gamma)
// of the plan, under the hypothesis the pool was collected from (h0 pool:
// false alarms, h1 pool: misses). Per n, draws are produced in seeded chunks
// whose merge is order-independent, so a rerun of the same plan is bitwise
// reproducible; all gammas are evaluated against the same draws.
std::vector<EmpiricalEstimate> simulate(const ScorePool& pool, const SimulationPlan& plan);

struct Histogram {
    int n = 0;
    long trials = 0;
    std::vector<double> edges;  // bins + 1 ascending edges
    std::vector<long> counts;   // per bin
    double clt_mean = 0.0;      // pool mean
    double clt_variance = 0.0;  // pool variance (unbiased) / n
    std::vector<double> aggregates; // raw aggregate values, trial order
};

// Distribution of the aggregate statistic at block length n, with the
// Gaussian-limit overlay parameters matched from the pool moments.
Histogram statistic_histogram(const ScorePool& pool, int n, long trials, std::uint64_t seed);

} // namespace d3f
