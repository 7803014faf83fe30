#pragma once

#include "d3f/characterize.hpp"
#include "d3f/score_model.hpp"

#include <cstdint>

namespace d3f {

// A reference distribution with closed-form lmgf, rate function, and (where it
// exists) an exact n-sample tail. Everything downstream of the score pool can
// be run against one of these and compared to pencil-and-paper values.
class AnalyticScore : public ScoreDistribution {
public:
    // Exact Legendre transform I(x) = sup_t [x t - phi(t)]. Returns +infinity
    // outside the closure of the support (an infinite-rate signal, not an
    // error); finite boundary values where they exist.
    virtual double exact_rate(double x) const = 0;

    // Exact P(mean of n draws >= gamma). Only distributions whose n-sample
    // aggregate has a closed form override this; the default refuses.
    virtual double exact_tail(double gamma, int n) const;

    // Draw a reproducible pool of `count` values.
    virtual ScorePool sample(std::size_t count, std::uint64_t seed,
                             Hypothesis tag = Hypothesis::h0) const = 0;
};

// Normal(mu, sigma^2): phi(t) = mu t + sigma^2 t^2 / 2, I(x) = (x-mu)^2 / (2 sigma^2),
// and the n-sample aggregate is Normal(mu, sigma^2/n) exactly.
class GaussianScore final : public AnalyticScore {
public:
    GaussianScore(double mu, double sigma);

    double mean() const override { return mu_; }
    double stddev() const override { return sigma_; }
    double lmgf(double t) const override;
    TiltedMoments tilted_moments(double t) const override;
    double support_min() const override;
    double support_max() const override;
    double max_abs_score() const override;

    double exact_rate(double x) const override;
    double exact_tail(double gamma, int n) const override;
    ScorePool sample(std::size_t count, std::uint64_t seed,
                     Hypothesis tag = Hypothesis::h0) const override;

private:
    double mu_;
    double sigma_;
};

// Two-point distribution: value b with probability p, value a otherwise
// (a < b). The rate function is the KL divergence between the tilted and the
// base success probability.
class BernoulliScore final : public AnalyticScore {
public:
    BernoulliScore(double p, double a, double b);

    double mean() const override;
    double stddev() const override;
    double lmgf(double t) const override;
    TiltedMoments tilted_moments(double t) const override;
    double support_min() const override { return a_; }
    double support_max() const override { return b_; }
    double max_abs_score() const override;

    double exact_rate(double x) const override;
    ScorePool sample(std::size_t count, std::uint64_t seed,
                     Hypothesis tag = Hypothesis::h0) const override;

private:
    double p_;
    double a_;
    double b_;
};

} // namespace d3f
