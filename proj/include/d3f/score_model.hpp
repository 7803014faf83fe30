#pragma once

namespace d3f {

// First two derivatives of the log moment generating function at a tilt t.
// mean = phi'(t) is the mean of the exponentially tilted distribution and
// variance = phi''(t) its variance, so variance >= 0 always.
struct TiltedMoments {
    double mean = 0.0;
    double variance = 0.0;
};

// Distribution of the elementwise score under one hypothesis, seen through the
// quantities the asymptotic analysis needs: moments, the log moment generating
// function phi(t) = log E[exp(t X)], and its first two derivatives. Implemented
// both by empirical score pools and by closed-form reference distributions.
class ScoreDistribution {
public:
    virtual ~ScoreDistribution() = default;

    virtual double mean() const = 0;
    virtual double stddev() const = 0;

    virtual double lmgf(double t) const = 0;
    virtual TiltedMoments tilted_moments(double t) const = 0;

    // Support edges; +-infinity for unbounded distributions.
    virtual double support_min() const = 0;
    virtual double support_max() const = 0;

    // Largest |score| the lmgf is evaluated over; bounds the usable tilt range
    // (|t| * max_abs_score() <= ~700 keeps exp() finite). Infinity means the
    // lmgf is safe at any tilt (closed forms).
    virtual double max_abs_score() const = 0;
};

} // namespace d3f
