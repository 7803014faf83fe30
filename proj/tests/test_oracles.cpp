#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "d3f/errors.hpp"
#include "d3f/normal.hpp"
#include "d3f/oracles.hpp"

#include <cmath>
#include <limits>

using namespace d3f;

namespace {

// Frozen reference values (30-digit arithmetic, rounded to double).
constexpr double Q_ONE = 0.15865525393145705;        // Q(1)
constexpr double Q_SQRT10 = 0.00078270112900127484;  // Q(sqrt(10))
constexpr double Q_SQRT20 = 3.8721082155220418e-6;   // Q(sqrt(20))
constexpr double Q_TEN = 7.6198530241605261e-24;     // Q(10)
constexpr double KL_09_05 = 0.36806420716849707;     // 0.9 log(0.9/0.5) + 0.1 log(0.1/0.5)
constexpr double LOGCOSH_ONE = 0.43378083048302719;
constexpr double LOG_TWO = 0.69314718055994531;

constexpr double INF = std::numeric_limits<double>::infinity();

} // namespace

TEST_CASE("q function at frozen points") {
    CHECK(q_function(0.0) == 0.5);
    CHECK(q_function(1.0) == doctest::Approx(Q_ONE).epsilon(1e-14));
    // Ratio checks: the far-tail values are tiny, so test relative accuracy.
    CHECK(q_function(std::sqrt(10.0)) / Q_SQRT10 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q_function(std::sqrt(20.0)) / Q_SQRT20 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q_function(10.0) / Q_TEN == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q_function(-1.0) == doctest::Approx(1.0 - Q_ONE).epsilon(1e-14));
    CHECK(normal_cdf(1.0) == doctest::Approx(1.0 - Q_ONE).epsilon(1e-14));
    CHECK(normal_cdf(0.0) == 0.5);
}

TEST_CASE("gaussian reference: moments, lmgf, derivatives") {
    const GaussianScore g(0.7, 1.3);
    CHECK(g.mean() == 0.7);
    CHECK(g.stddev() == 1.3);
    CHECK(g.support_min() == -INF);
    CHECK(g.support_max() == INF);
    CHECK(g.max_abs_score() == INF);
    for (double t : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
        CHECK(g.lmgf(t) ==
              doctest::Approx(0.7 * t + 0.5 * 1.3 * 1.3 * t * t).epsilon(1e-15));
        const TiltedMoments m = g.tilted_moments(t);
        CHECK(m.mean == doctest::Approx(0.7 + 1.3 * 1.3 * t).epsilon(1e-15));
        CHECK(m.variance == doctest::Approx(1.3 * 1.3).epsilon(1e-15));
    }
}

TEST_CASE("gaussian rate function is the half squared standardized distance") {
    const GaussianScore g(0.0, 1.0);
    CHECK(g.exact_rate(0.0) == 0.0);
    CHECK(g.exact_rate(2.0) == 2.0);
    CHECK(g.exact_rate(-2.0) == 2.0);
    const GaussianScore h(1.0, 2.0);
    CHECK(h.exact_rate(3.0) == doctest::Approx(4.0 / 8.0).epsilon(1e-15));
    CHECK(std::isfinite(h.exact_rate(1000.0))); // unbounded support: always finite
}

TEST_CASE("gaussian exact tail at frozen points") {
    const GaussianScore g(0.0, 1.0);
    CHECK(g.exact_tail(0.0, 1) == 0.5);
    CHECK(g.exact_tail(0.0, 17) == 0.5);
    CHECK(g.exact_tail(1.0, 1) == doctest::Approx(Q_ONE).epsilon(1e-14));
    CHECK(g.exact_tail(1.0, 10) / Q_SQRT10 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.exact_tail(1.0, 20) / Q_SQRT20 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.exact_tail(1.0, 100) / Q_TEN == doctest::Approx(1.0).epsilon(1e-12));
    const GaussianScore h(2.0, 3.0);
    CHECK(h.exact_tail(5.0, 1) == doctest::Approx(Q_ONE).epsilon(1e-14));
    CHECK_THROWS_AS((void)g.exact_tail(1.0, 0), DomainError);
}

TEST_CASE("gaussian constructor rejects non-positive sigma") {
    CHECK_THROWS_AS(GaussianScore(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(GaussianScore(0.0, -1.0), DomainError);
}

TEST_CASE("two-point reference: moments and lmgf") {
    const BernoulliScore b(0.5, -1.0, 1.0);
    CHECK(b.mean() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(b.stddev() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.support_min() == -1.0);
    CHECK(b.support_max() == 1.0);
    CHECK(b.max_abs_score() == 1.0);
    CHECK(b.lmgf(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(b.lmgf(1.0) == doctest::Approx(LOGCOSH_ONE).epsilon(1e-14));
    CHECK(b.lmgf(-1.0) == doctest::Approx(LOGCOSH_ONE).epsilon(1e-14));

    const BernoulliScore skew(0.25, 0.0, 2.0);
    CHECK(skew.mean() == doctest::Approx(0.5).epsilon(1e-15));
    // var = p(1-p)(b-a)^2 = 0.25 * 0.75 * 4 = 0.75
    CHECK(skew.stddev() == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
}

TEST_CASE("two-point rate function is the KL divergence of the tilted weight") {
    const BernoulliScore pm(0.5, -1.0, 1.0);
    CHECK(pm.exact_rate(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    // x = 0.8 corresponds to tilted success weight q = 0.9.
    CHECK(pm.exact_rate(0.8) == doctest::Approx(KL_09_05).epsilon(1e-14));
    CHECK(pm.exact_rate(-0.8) == doctest::Approx(KL_09_05).epsilon(1e-14));
    CHECK(pm.exact_rate(1.0) == doctest::Approx(LOG_TWO).epsilon(1e-14));
    CHECK(pm.exact_rate(-1.0) == doctest::Approx(LOG_TWO).epsilon(1e-14));
    CHECK(pm.exact_rate(1.0001) == INF);
    CHECK(pm.exact_rate(-1.0001) == INF);

    const BernoulliScore unit(0.5, 0.0, 1.0);
    CHECK(unit.exact_rate(0.9) == doctest::Approx(KL_09_05).epsilon(1e-14));

    // Asymmetric base probability: boundary values are -log p and -log(1-p).
    const BernoulliScore tilted(0.2, 0.0, 1.0);
    CHECK(tilted.exact_rate(1.0) == doctest::Approx(-std::log(0.2)).epsilon(1e-14));
    CHECK(tilted.exact_rate(0.0) == doctest::Approx(-std::log(0.8)).epsilon(1e-14));
    CHECK(tilted.exact_rate(0.2) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("two-point distribution has no closed-form n-sample tail") {
    const BernoulliScore b(0.5, -1.0, 1.0);
    CHECK_THROWS_AS((void)b.exact_tail(0.5, 10), DomainError);
}

TEST_CASE("two-point constructor validation") {
    CHECK_THROWS_AS(BernoulliScore(0.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(BernoulliScore(1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(BernoulliScore(0.5, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(BernoulliScore(0.5, 2.0, 1.0), DomainError);
}

TEST_CASE("tilted moments agree with finite differences of the lmgf") {
    const GaussianScore g(0.3, 0.9);
    const BernoulliScore b(0.35, -0.5, 1.5);
    const double h = 1e-6;
    for (const AnalyticScore* model : {(const AnalyticScore*)&g, (const AnalyticScore*)&b}) {
        for (double t : {-1.5, -0.25, 0.0, 0.75, 2.0}) {
            const double fd1 = (model->lmgf(t + h) - model->lmgf(t - h)) / (2 * h);
            const double fd2 =
                (model->lmgf(t + h) - 2 * model->lmgf(t) + model->lmgf(t - h)) / (h * h);
            const TiltedMoments m = model->tilted_moments(t);
            CHECK(m.mean == doctest::Approx(fd1).epsilon(1e-7));
            CHECK(m.variance == doctest::Approx(fd2).epsilon(1e-3));
        }
    }
}

TEST_CASE("sampling is reproducible and seed-sensitive") {
    const GaussianScore g(0.0, 1.0);
    const ScorePool a = g.sample(1000, 5, Hypothesis::h1);
    const ScorePool b = g.sample(1000, 5, Hypothesis::h1);
    const ScorePool c = g.sample(1000, 6, Hypothesis::h1);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(a.hypothesis == Hypothesis::h1);
    CHECK(a.seed == 5);
    CHECK(a.values.size() == 1000);
    // The hypothesis tag is metadata only; draws depend on the seed alone.
    const ScorePool d = g.sample(1000, 5, Hypothesis::h0);
    CHECK(a.values == d.values);
    CHECK(d.hypothesis == Hypothesis::h0);
}

TEST_CASE("gaussian sample statistics are near the population values") {
    const GaussianScore g(2.0, 0.5);
    const ScorePool pool = g.sample(100000, 12345);
    double sum = 0.0;
    for (double v : pool.values) {
        sum += v;
    }
    const double mean = sum / double(pool.values.size());
    double ss = 0.0;
    for (double v : pool.values) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / double(pool.values.size() - 1));
    CHECK(std::abs(mean - 2.0) < 0.01);
    CHECK(std::abs(sd - 0.5) < 0.01);
}

TEST_CASE("two-point samples take only the two values at the right frequency") {
    const BernoulliScore b(0.3, -2.0, 5.0);
    const ScorePool pool = b.sample(100000, 777);
    long hi = 0;
    for (double v : pool.values) {
        const bool valid = v == -2.0 || v == 5.0;
        REQUIRE(valid);
        hi += v == 5.0 ? 1 : 0;
    }
    CHECK(std::abs(double(hi) / 100000.0 - 0.3) < 0.01);
}
