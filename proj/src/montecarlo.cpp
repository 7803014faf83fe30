#include "d3f/montecarlo.hpp"
#include "d3f/errors.hpp"
#include "d3f/rng.hpp"
#include "d3f/statistic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace d3f {

namespace {

constexpr long CHUNK_TRIALS = 1L << 16;
constexpr std::uint64_t HIST_STREAM = 0x686973ULL; // "his"

void validate_plan(const ScorePool& pool, const SimulationPlan& plan) {
    if (pool.values.empty()) {
        throw PlanError("simulate: empty score pool");
    }
    if (plan.trials < 1) {
        throw PlanError("simulate: trials must be >= 1");
    }
    if (plan.ns.empty() || plan.gammas.empty()) {
        throw PlanError("simulate: plan needs at least one n and one gamma");
    }
    for (int n : plan.ns) {
        if (n < 1) {
            throw PlanError("simulate: every n must be >= 1");
        }
        if (plan.sampling == SamplingMode::without_replacement &&
            std::size_t(n) > pool.values.size()) {
            throw PlanError("simulate: n " + std::to_string(n) + " exceeds pool size " +
                            std::to_string(pool.values.size()) + " without replacement");
        }
    }
    for (double g : plan.gammas) {
        if (!std::isfinite(g)) {
            throw PlanError("simulate: gamma must be finite");
        }
    }
}

// Count, for one n, how many aggregates land at-or-above each gamma.
// Gammas are processed together so every threshold sees the same draws.
std::vector<long> count_at_or_above_with_replacement(const ScorePool& pool, int n, long trials,
                                                     std::uint64_t seed, std::size_t n_index,
                                                     std::vector<double>* keep_aggregates,
                                                     const std::vector<double>& gammas) {
    const std::size_t m = pool.values.size();
    std::vector<long> hits(gammas.size(), 0);
    const long chunks = (trials + CHUNK_TRIALS - 1) / CHUNK_TRIALS;
    for (long chunk = 0; chunk < chunks; ++chunk) {
        std::mt19937_64 engine(derive_seed(seed, n_index, std::uint64_t(chunk)));
        const long first = chunk * CHUNK_TRIALS;
        const long count = std::min(CHUNK_TRIALS, trials - first);
        for (long t = 0; t < count; ++t) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                sum += pool.values[bounded_index(engine, m)];
            }
            const double aggregate = sum / double(n);
            if (keep_aggregates) {
                keep_aggregates->push_back(aggregate);
            }
            for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
                hits[gi] += aggregate >= gammas[gi] ? 1 : 0;
            }
        }
    }
    return hits;
}

std::vector<long> count_at_or_above_without_replacement(const ScorePool& pool, int n, long trials,
                                                        std::uint64_t seed, std::size_t n_index,
                                                        const std::vector<double>& gammas) {
    const std::size_t m = pool.values.size();
    std::vector<long> hits(gammas.size(), 0);
    std::mt19937_64 engine(derive_seed(seed, n_index, 0));
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t pos = m; // force a shuffle before the first trial
    for (long t = 0; t < trials; ++t) {
        if (pos + std::size_t(n) > m) {
            // Fewer than n values left in this pass: redraw the permutation.
            for (std::size_t i = 0; i + 1 < m; ++i) {
                const std::size_t j = i + bounded_index(engine, m - i);
                std::swap(order[i], order[j]);
            }
            pos = 0;
        }
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            sum += pool.values[order[pos + std::size_t(i)]];
        }
        pos += std::size_t(n);
        const double aggregate = sum / double(n);
        for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
            hits[gi] += aggregate >= gammas[gi] ? 1 : 0;
        }
    }
    return hits;
}

} // namespace

WilsonInterval wilson_interval(long events, long trials, double z) {
    if (trials < 1) {
        throw PlanError("wilson: trials must be >= 1");
    }
    if (events < 0 || events > trials) {
        throw PlanError("wilson: events outside [0, trials]");
    }
    const double p = double(events) / double(trials);
    const double m = double(trials);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / m;
    const double center = (p + z2 / (2.0 * m)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / m + z2 / (4.0 * m * m)) / denom;
    // At the boundaries the exact endpoints are 0 and 1; avoid the last-ulp
    // residue of sqrt in the general formula.
    const double low = events == 0 ? 0.0 : std::max(0.0, center - half);
    const double high = events == trials ? 1.0 : std::min(1.0, center + half);
    return {low, high};
}

std::vector<EmpiricalEstimate> simulate(const ScorePool& pool, const SimulationPlan& plan) {
    validate_plan(pool, plan);
    std::vector<EmpiricalEstimate> out;
    out.reserve(plan.ns.size() * plan.gammas.size());
    for (std::size_t ni = 0; ni < plan.ns.size(); ++ni) {
        const int n = plan.ns[ni];
        const std::vector<long> at_or_above =
            plan.sampling == SamplingMode::with_replacement
                ? count_at_or_above_with_replacement(pool, n, plan.trials, plan.seed, ni, nullptr,
                                                     plan.gammas)
                : count_at_or_above_without_replacement(pool, n, plan.trials, plan.seed, ni,
                                                        plan.gammas);
        for (std::size_t gi = 0; gi < plan.gammas.size(); ++gi) {
            EmpiricalEstimate est;
            est.hypothesis = pool.hypothesis;
            est.n = n;
            est.gamma = plan.gammas[gi];
            est.trials = plan.trials;
            // A decision T >= gamma picks h1; that is the error exactly when
            // the pool is h0. For an h1 pool the misses are the complement.
            est.events = pool.hypothesis == Hypothesis::h0 ? at_or_above[gi]
                                                           : plan.trials - at_or_above[gi];
            est.p_hat = double(est.events) / double(est.trials);
            const WilsonInterval wi = wilson_interval(est.events, est.trials);
            est.wilson_low = wi.low;
            est.wilson_high = wi.high;
            est.low_confidence = est.events < 10;
            out.push_back(est);
        }
    }
    return out;
}

Histogram statistic_histogram(const ScorePool& pool, int n, long trials, std::uint64_t seed) {
    SimulationPlan probe;
    probe.ns = {n};
    probe.gammas = {0.0};
    probe.trials = trials;
    validate_plan(pool, probe);

    Histogram h;
    h.n = n;
    h.trials = trials;
    h.aggregates.reserve(std::size_t(trials));
    const std::vector<double> no_gammas{};
    count_at_or_above_with_replacement(pool, n, trials, derive_seed(seed, HIST_STREAM), 0,
                                       &h.aggregates, no_gammas);

    // Pool-moment overlay: the Gaussian limit predicts mean mu_pool and
    // variance sigma_pool^2 / n for the aggregate.
    const std::size_t m = pool.values.size();
    double sum = 0.0;
    for (double v : pool.values) {
        sum += v;
    }
    h.clt_mean = sum / double(m);
    double ss = 0.0;
    for (double v : pool.values) {
        const double d = v - h.clt_mean;
        ss += d * d;
    }
    h.clt_variance = m > 1 ? ss / double(m - 1) / double(n) : 0.0;

    const auto [lo_it, hi_it] = std::minmax_element(h.aggregates.begin(), h.aggregates.end());
    double lo = *lo_it, hi = *hi_it;
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    const std::size_t bins =
        std::clamp<std::size_t>(std::size_t(std::lround(std::sqrt(double(trials)))), 10, 200);
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        h.edges[b] = lo + (hi - lo) * double(b) / double(bins);
    }
    h.counts.assign(bins, 0);
    for (double a : h.aggregates) {
        std::size_t b = std::size_t((a - lo) / (hi - lo) * double(bins));
        b = std::min(b, bins - 1);
        ++h.counts[b];
    }
    return h;
}

} // namespace d3f
