#include "d3f/oracles.hpp"
#include "d3f/errors.hpp"
#include "d3f/normal.hpp"
#include "d3f/rng.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace d3f {

namespace {
constexpr double INF = std::numeric_limits<double>::infinity();
}

double AnalyticScore::exact_tail(double, int) const {
    throw DomainError("exact_tail: no closed-form n-sample tail for this distribution");
}

// ==== gaussian ==============================================================

GaussianScore::GaussianScore(double mu, double sigma) : mu_(mu), sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
        throw DomainError("gaussian: need finite mu and sigma > 0");
    }
}

double GaussianScore::lmgf(double t) const { return mu_ * t + 0.5 * sigma_ * sigma_ * t * t; }

TiltedMoments GaussianScore::tilted_moments(double t) const {
    return {mu_ + sigma_ * sigma_ * t, sigma_ * sigma_};
}

double GaussianScore::support_min() const { return -INF; }
double GaussianScore::support_max() const { return INF; }
double GaussianScore::max_abs_score() const { return INF; }

double GaussianScore::exact_rate(double x) const {
    const double d = x - mu_;
    return d * d / (2.0 * sigma_ * sigma_);
}

double GaussianScore::exact_tail(double gamma, int n) const {
    if (n < 1) {
        throw DomainError("exact_tail: n must be >= 1");
    }
    return q_function(std::sqrt(double(n)) * (gamma - mu_) / sigma_);
}

ScorePool GaussianScore::sample(std::size_t count, std::uint64_t seed, Hypothesis tag) const {
    std::mt19937_64 engine(derive_seed(seed, 0x6761757373ULL)); // stream tag "gauss"
    std::normal_distribution<double> normal(mu_, sigma_);
    ScorePool pool;
    pool.hypothesis = tag;
    pool.seed = seed;
    pool.source = "gaussian-oracle";
    pool.values.resize(count);
    for (auto& v : pool.values) {
        v = normal(engine);
    }
    return pool;
}

// ==== two-point =============================================================

BernoulliScore::BernoulliScore(double p, double a, double b) : p_(p), a_(a), b_(b) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("bernoulli: need p strictly inside (0, 1)");
    }
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("bernoulli: need finite support values a < b");
    }
}

double BernoulliScore::mean() const { return a_ + p_ * (b_ - a_); }

double BernoulliScore::stddev() const { return (b_ - a_) * std::sqrt(p_ * (1.0 - p_)); }

double BernoulliScore::lmgf(double t) const {
    // log((1-p) e^{ta} + p e^{tb}), pulled to the larger exponent.
    const double xa = t * a_, xb = t * b_;
    const double m = std::max(xa, xb);
    return m + std::log((1.0 - p_) * std::exp(xa - m) + p_ * std::exp(xb - m));
}

TiltedMoments BernoulliScore::tilted_moments(double t) const {
    // Tilted success probability q = p e^{tb} / ((1-p) e^{ta} + p e^{tb}).
    const double xa = t * a_, xb = t * b_;
    const double m = std::max(xa, xb);
    const double wa = (1.0 - p_) * std::exp(xa - m);
    const double wb = p_ * std::exp(xb - m);
    const double q = wb / (wa + wb);
    const double span = b_ - a_;
    return {a_ + q * span, span * span * q * (1.0 - q)};
}

double BernoulliScore::max_abs_score() const { return std::max(std::abs(a_), std::abs(b_)); }

double BernoulliScore::exact_rate(double x) const {
    if (x < a_ || x > b_) {
        return INF; // infinite-rate signal outside the support interval
    }
    const double q = (x - a_) / (b_ - a_); // tilted success probability at mean x
    if (q == 0.0) {
        return -std::log(1.0 - p_);
    }
    if (q == 1.0) {
        return -std::log(p_);
    }
    return q * std::log(q / p_) + (1.0 - q) * std::log((1.0 - q) / (1.0 - p_));
}

ScorePool BernoulliScore::sample(std::size_t count, std::uint64_t seed, Hypothesis tag) const {
    std::mt19937_64 engine(derive_seed(seed, 0x6265726eULL)); // stream tag "bern"
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    ScorePool pool;
    pool.hypothesis = tag;
    pool.seed = seed;
    pool.source = "bernoulli-oracle";
    pool.values.resize(count);
    for (auto& v : pool.values) {
        v = uniform(engine) < p_ ? b_ : a_;
    }
    return pool;
}

} // namespace d3f
