#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "d3f/errors.hpp"
#include "d3f/statistic.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

using namespace d3f;

TEST_CASE("aggregate is the arithmetic mean") {
    CHECK(aggregate(std::vector<double>{0.0, 2.0}) == 1.0);
    CHECK(aggregate(std::vector<double>{-3.5}) == -3.5);
    CHECK(aggregate(std::vector<double>{1.0, 2.0, 3.0, 4.0}) == 2.5);
}

TEST_CASE("aggregate of an empty block is a domain error") {
    CHECK_THROWS_AS((void)aggregate(std::vector<double>{}), DomainError);
}

TEST_CASE("aggregate is permutation invariant") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal(0.0, 3.0);
    std::vector<double> scores(257);
    for (auto& s : scores) {
        s = normal(rng);
    }
    const double base = aggregate(scores);
    for (int round = 0; round < 5; ++round) {
        std::shuffle(scores.begin(), scores.end(), rng);
        CHECK(aggregate(scores) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("aggregate of a concatenation is the weighted mean of the parts") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    std::vector<double> a(31), b(17);
    for (auto& v : a) {
        v = uniform(rng);
    }
    for (auto& v : b) {
        v = uniform(rng);
    }
    std::vector<double> both = a;
    both.insert(both.end(), b.begin(), b.end());
    const double expect =
        (aggregate(a) * double(a.size()) + aggregate(b) * double(b.size())) /
        double(both.size());
    CHECK(aggregate(both) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("threshold rule: ties go to h1") {
    CHECK(decide(1.0, 1.0) == Hypothesis::h1);
    CHECK(decide(1.0 + 1e-12, 1.0) == Hypothesis::h1);
    CHECK(decide(1.0 - 1e-12, 1.0) == Hypothesis::h0);
    CHECK(decide(-5.0, 0.0) == Hypothesis::h0);
}

TEST_CASE("decision flips exactly once as the threshold sweeps upward") {
    const double statistic = 0.37;
    bool seen_h0 = false;
    for (double gamma = -2.0; gamma <= 2.0; gamma += 0.01) {
        const Hypothesis d = decide(statistic, gamma);
        if (d == Hypothesis::h0) {
            seen_h0 = true;
        } else {
            // Once the threshold has passed the statistic, h1 never returns.
            CHECK(!seen_h0);
        }
    }
    CHECK(seen_h0);
}

TEST_CASE("observation sequence carries its block and optional truth") {
    ObservationSequence seq{{0.5, 1.5, 2.5}, Hypothesis::h1};
    CHECK(seq.n() == 3);
    CHECK(aggregate(seq.scores) == 1.5);
    CHECK(seq.truth == Hypothesis::h1);
    ObservationSequence blind{{1.0}, std::nullopt};
    CHECK(!blind.truth.has_value());
}

TEST_CASE("hypothesis helpers") {
    CHECK(index(Hypothesis::h0) == 0);
    CHECK(index(Hypothesis::h1) == 1);
    CHECK(other(Hypothesis::h0) == Hypothesis::h1);
    CHECK(other(Hypothesis::h1) == Hypothesis::h0);
    CHECK(std::string(name(Hypothesis::h0)) == "h0");
    CHECK(std::string(name(Hypothesis::h1)) == "h1");
}
