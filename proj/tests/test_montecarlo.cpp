#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "d3f/errors.hpp"
#include "d3f/montecarlo.hpp"
#include "d3f/normal.hpp"
#include "d3f/oracles.hpp"
#include "d3f/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

using namespace d3f;

namespace {

// Frozen reference values (30-digit arithmetic, rounded to double).
constexpr double WILSON_Z = 1.959963984540054;
constexpr double W_0_1_HIGH = 0.7934506856227626; // z^2 / (1 + z^2)
constexpr double W_3_10_LOW = 0.10779126740630103;
constexpr double W_3_10_HIGH = 0.6032218525388546;

ScorePool pool_of(std::vector<double> values, Hypothesis h) {
    return ScorePool{h, std::move(values), "synthetic", 1};
}

double exact_fraction_at_or_above(const ScorePool& pool, double gamma) {
    long k = 0;
    for (double v : pool.values) {
        k += v >= gamma ? 1 : 0;
    }
    return double(k) / double(pool.values.size());
}

} // namespace

TEST_CASE("wilson interval at frozen points") {
    const WilsonInterval w01 = wilson_interval(0, 1);
    CHECK(w01.low == 0.0);
    CHECK(w01.high == doctest::Approx(W_0_1_HIGH).epsilon(1e-13));

    const WilsonInterval w310 = wilson_interval(3, 10);
    CHECK(w310.low == doctest::Approx(W_3_10_LOW).epsilon(1e-13));
    CHECK(w310.high == doctest::Approx(W_3_10_HIGH).epsilon(1e-13));

    const WilsonInterval full = wilson_interval(7, 7);
    CHECK(full.high == 1.0);
    CHECK(full.low < 1.0);

    CHECK_THROWS_AS((void)wilson_interval(1, 0), PlanError);
    CHECK_THROWS_AS((void)wilson_interval(-1, 5), PlanError);
    CHECK_THROWS_AS((void)wilson_interval(6, 5), PlanError);
}

TEST_CASE("wilson interval properties: ordering, bounds, shrinkage") {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 300; ++i) {
        const long m = 1 + long(bounded_index(rng, 100000));
        const long k = long(bounded_index(rng, std::uint64_t(m + 1)));
        const WilsonInterval w = wilson_interval(k, m);
        const double p = double(k) / double(m);
        CHECK(w.low >= 0.0);
        CHECK(w.high <= 1.0);
        CHECK(w.low <= p + 1e-15);
        CHECK(w.high >= p - 1e-15);

        const WilsonInterval tighter = wilson_interval(10 * k, 10 * m);
        CHECK(tighter.high - tighter.low < w.high - w.low);
    }
}

TEST_CASE("wilson coverage on true binomial draws") {
    std::mt19937_64 rng(73);
    const double p = 0.3;
    const long m = 200;
    int covered = 0;
    const int reps = 300;
    std::binomial_distribution<long> binom(m, p);
    for (int r = 0; r < reps; ++r) {
        const long k = binom(rng);
        const WilsonInterval w = wilson_interval(k, m);
        covered += (w.low <= p && p <= w.high) ? 1 : 0;
    }
    CHECK(covered >= int(0.90 * reps));
}

TEST_CASE("plan validation") {
    const ScorePool pool = pool_of({1.0, 2.0, 3.0}, Hypothesis::h0);
    SimulationPlan plan;
    plan.ns = {1};
    plan.gammas = {2.0};

    SimulationPlan bad = plan;
    bad.trials = 0;
    CHECK_THROWS_AS((void)simulate(pool, bad), PlanError);
    bad = plan;
    bad.ns = {};
    CHECK_THROWS_AS((void)simulate(pool, bad), PlanError);
    bad = plan;
    bad.gammas = {};
    CHECK_THROWS_AS((void)simulate(pool, bad), PlanError);
    bad = plan;
    bad.ns = {0};
    CHECK_THROWS_AS((void)simulate(pool, bad), PlanError);
    bad = plan;
    bad.gammas = {std::nan("")};
    CHECK_THROWS_AS((void)simulate(pool, bad), PlanError);
    bad = plan;
    bad.ns = {4};
    bad.sampling = SamplingMode::without_replacement;
    CHECK_THROWS_AS((void)simulate(pool, bad), PlanError);
    CHECK_THROWS_AS((void)simulate(pool_of({}, Hypothesis::h0), plan), PlanError);
}

TEST_CASE("exhaustive pass without replacement reproduces the pool fraction exactly") {
    const ScorePool pool = pool_of({1.0, 2.0, 3.0, 4.0}, Hypothesis::h0);
    SimulationPlan plan;
    plan.ns = {1};
    plan.gammas = {2.0, 2.5, 4.5};
    plan.trials = 4;
    plan.sampling = SamplingMode::without_replacement;

    const std::vector<EmpiricalEstimate> est = simulate(pool, plan);
    REQUIRE(est.size() == 3);
    CHECK(est[0].p_hat == 0.75); // values >= 2: three of four (tie counts)
    CHECK(est[1].p_hat == 0.5);
    CHECK(est[2].p_hat == 0.0);
    CHECK(est[2].events == 0);
    CHECK(est[2].low_confidence);

    // Two full passes: the fraction is exact again.
    plan.trials = 8;
    const std::vector<EmpiricalEstimate> twice = simulate(pool, plan);
    CHECK(twice[0].p_hat == 0.75);
    CHECK(twice[1].p_hat == 0.5);

    // An h1 pool counts the complement (misses).
    const ScorePool miss_pool = pool_of({1.0, 2.0, 3.0, 4.0}, Hypothesis::h1);
    plan.trials = 4;
    const std::vector<EmpiricalEstimate> misses = simulate(miss_pool, plan);
    CHECK(misses[0].p_hat == 0.25); // values < 2: one of four
    CHECK(misses[1].p_hat == 0.5);
    CHECK(misses[2].p_hat == 1.0);
}

TEST_CASE("simulation is reproducible and seed-sensitive") {
    const GaussianScore g(0.0, 1.0);
    const ScorePool pool = g.sample(5000, 81);
    SimulationPlan plan;
    plan.ns = {1, 3};
    plan.gammas = {0.5, 1.0};
    plan.trials = 20000;
    plan.seed = 9;

    const auto a = simulate(pool, plan);
    const auto b = simulate(pool, plan);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].events == b[i].events);
        CHECK(a[i].p_hat == b[i].p_hat);
    }

    plan.seed = 10;
    const auto c = simulate(pool, plan);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        any_diff = any_diff || a[i].events != c[i].events;
    }
    CHECK(any_diff);

    // Layout: n-major, gamma-minor, with the plan's values echoed back.
    CHECK(a[0].n == 1);
    CHECK(a[0].gamma == 0.5);
    CHECK(a[1].n == 1);
    CHECK(a[1].gamma == 1.0);
    CHECK(a[2].n == 3);
    CHECK(a[3].gamma == 1.0);
    for (const auto& e : a) {
        CHECK(e.trials == 20000);
        CHECK(e.hypothesis == Hypothesis::h0);
        CHECK(e.p_hat == double(e.events) / double(e.trials));
        const WilsonInterval w = wilson_interval(e.events, e.trials, WILSON_Z);
        CHECK(e.wilson_low == w.low);
        CHECK(e.wilson_high == w.high);
    }
}

TEST_CASE("shared draws make the false-alarm estimate monotone in the threshold") {
    const GaussianScore g(0.0, 1.0);
    const ScorePool pool = g.sample(20000, 83);
    SimulationPlan plan;
    plan.ns = {2, 5};
    plan.gammas = {-0.5, 0.0, 0.4, 0.8, 1.2, 1.6};
    plan.trials = 30000;
    const auto est = simulate(pool, plan);
    for (std::size_t ni = 0; ni < plan.ns.size(); ++ni) {
        for (std::size_t gi = 1; gi < plan.gammas.size(); ++gi) {
            const auto& prev = est[ni * plan.gammas.size() + gi - 1];
            const auto& cur = est[ni * plan.gammas.size() + gi];
            CHECK(cur.events <= prev.events); // exact, not just statistical
        }
    }
}

TEST_CASE("with-replacement estimates track the exact pool fraction at n = 1") {
    const GaussianScore g(0.0, 1.0);
    const ScorePool pool = g.sample(50000, 87);
    SimulationPlan plan;
    plan.ns = {1};
    plan.gammas = {0.3, 1.0};
    plan.trials = 130000; // spans two seeded chunks
    const auto est = simulate(pool, plan);
    for (const auto& e : est) {
        const double frac = exact_fraction_at_or_above(pool, e.gamma);
        const double sd = std::sqrt(frac * (1.0 - frac) / double(e.trials));
        CHECK(std::abs(e.p_hat - frac) < 5.0 * sd);
        CHECK(!e.low_confidence);
    }
}

TEST_CASE("thresholds beyond the pool support give zero events and a low-confidence flag") {
    const ScorePool pool = pool_of({0.1, 0.2, 0.3, 0.4, 0.5}, Hypothesis::h1);
    SimulationPlan plan;
    plan.ns = {1, 2};
    plan.gammas = {0.05}; // below every value: no aggregate can miss
    plan.trials = 1000;
    const auto est = simulate(pool, plan);
    for (const auto& e : est) {
        CHECK(e.events == 0);
        CHECK(e.p_hat == 0.0);
        CHECK(e.wilson_low == 0.0);
        CHECK(e.wilson_high > 0.0);
        CHECK(e.low_confidence);
    }
}

TEST_CASE("wilson intervals from the simulator cover the truth") {
    // Fresh pool and fresh trial draws per repetition; the interval must cover
    // the true tail in at least 90% of the repetitions.
    const GaussianScore g(0.0, 1.0);
    const double gamma = 1.0;
    const double truth = g.exact_tail(gamma, 1);
    const std::uint64_t master = 0x51A7;
    const int reps = 100;
    int covered = 0;
    for (int r = 0; r < reps; ++r) {
        const ScorePool pool = g.sample(200000, derive_seed(master, 1, std::uint64_t(r)));
        SimulationPlan plan;
        plan.ns = {1};
        plan.gammas = {gamma};
        plan.trials = 4000;
        plan.seed = derive_seed(master, 2, std::uint64_t(r));
        const auto est = simulate(pool, plan);
        covered += (est[0].wilson_low <= truth && truth <= est[0].wilson_high) ? 1 : 0;
    }
    CHECK(covered >= 90);
}

TEST_CASE("without replacement: no value repeats inside a pass") {
    // n equal to the pool size forces every trial to be a full permutation.
    const ScorePool pool = pool_of({1.0, 2.0, 4.0, 8.0, 16.0}, Hypothesis::h0);
    SimulationPlan plan;
    plan.ns = {5};
    plan.gammas = {6.2}; // mean of the pool is 6.2: every permutation hits it
    plan.trials = 64;
    plan.sampling = SamplingMode::without_replacement;
    const auto est = simulate(pool, plan);
    CHECK(est[0].p_hat == 1.0); // the full-pool mean always equals 6.2 >= 6.2
}

TEST_CASE("histogram: counts, edges, moments, and n = 1 support membership") {
    const ScorePool pool = pool_of({1.0, 2.0, 3.0}, Hypothesis::h0);
    const Histogram h = statistic_histogram(pool, 1, 300, 91);
    CHECK(h.n == 1);
    CHECK(h.trials == 300);
    REQUIRE(!h.edges.empty());
    CHECK(h.edges.size() == h.counts.size() + 1);
    CHECK(std::is_sorted(h.edges.begin(), h.edges.end()));
    long total = 0;
    for (long c : h.counts) {
        total += c;
    }
    CHECK(total == 300);
    REQUIRE(h.aggregates.size() == 300);
    for (double a : h.aggregates) {
        const bool in_pool = a == 1.0 || a == 2.0 || a == 3.0;
        CHECK(in_pool);
    }
    CHECK(h.clt_mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(h.clt_variance == doctest::Approx(1.0).epsilon(1e-15)); // unbiased var 1, n 1

    // Constant pool: the degenerate range is widened instead of collapsing.
    const Histogram flat = statistic_histogram(pool_of({5.0, 5.0}, Hypothesis::h0), 1, 50, 92);
    CHECK(flat.edges.front() < 5.0);
    CHECK(flat.edges.back() > 5.0);
    long flat_total = 0;
    for (long c : flat.counts) {
        flat_total += c;
    }
    CHECK(flat_total == 50);
}

TEST_CASE("histogram variance scales as 1/n and the n = 50 shape is gaussian") {
    const GaussianScore g(0.0, 1.0);
    const ScorePool pool = g.sample(100000, 93);
    const Characterization c = moments(pool);

    for (int n : {1, 5, 50}) {
        const Histogram h = statistic_histogram(pool, n, 10000, 95);
        double mean = 0.0;
        for (double a : h.aggregates) {
            mean += a;
        }
        mean /= double(h.aggregates.size());
        double var = 0.0;
        for (double a : h.aggregates) {
            var += (a - mean) * (a - mean);
        }
        var /= double(h.aggregates.size() - 1);
        CHECK(std::abs(var / h.clt_variance - 1.0) < 0.10);
        CHECK(h.clt_variance ==
              doctest::Approx(c.stddev() * c.stddev() / double(n)).epsilon(1e-12));
    }

    // KS distance of standardized n = 50 aggregates against the normal limit.
    const Histogram h50 = statistic_histogram(pool, 50, 10000, 95);
    std::vector<double> zs;
    zs.reserve(h50.aggregates.size());
    const double sd = std::sqrt(h50.clt_variance);
    for (double a : h50.aggregates) {
        zs.push_back((a - h50.clt_mean) / sd);
    }
    std::sort(zs.begin(), zs.end());
    double ks = 0.0;
    const double m = double(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double cdf = normal_cdf(zs[i]);
        ks = std::max(ks, std::abs(cdf - double(i) / m));
        ks = std::max(ks, std::abs(double(i + 1) / m - cdf));
    }
    CHECK(ks < 0.025);
}

TEST_CASE("histogram validation mirrors the plan rules") {
    const ScorePool pool = pool_of({1.0, 2.0}, Hypothesis::h0);
    CHECK_THROWS_AS((void)statistic_histogram(pool, 0, 100, 1), PlanError);
    CHECK_THROWS_AS((void)statistic_histogram(pool, 1, 0, 1), PlanError);
    CHECK_THROWS_AS((void)statistic_histogram(pool_of({}, Hypothesis::h0), 1, 100, 1),
                    PlanError);
}
