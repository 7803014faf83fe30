#pragma once

#include "d3f/dataset.hpp"
#include "d3f/score_model.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace d3f {

// A bag of elementwise scores collected under one hypothesis, together with
// where it came from (which splits, which trained model seed).
struct ScorePool {
    Hypothesis hypothesis = Hypothesis::h0;
    std::vector<double> values;
    std::string source;     // e.g. "train+test" or "test"
    std::uint64_t seed = 0; // seed of the model that produced the scores
};

// ==== low-level empirical evaluators =======================================
// These operate on a raw value array and are the numerical core shared by
// Characterization. All use max-subtracted log-sum-exp, so they stay finite
// for any finite values and any finite t.

// log( (1/M) sum_j exp(t v_j) )
double empirical_lmgf(std::span<const double> values, double t);

// Mean and variance of the tilted weights w_j proportional to exp(t v_j);
// equals (phi'(t), phi''(t)) of the empirical lmgf. At t = 0 this is the
// sample mean and the population (divisor M) variance.
TiltedMoments empirical_tilted_moments(std::span<const double> values, double t);

// ==== characterization ======================================================

// Empirical score distribution under one hypothesis. Requires at least two
// scores, all finite, with nonzero spread (DegeneracyError otherwise).
// stddev() uses the unbiased divisor M-1.
class Characterization final : public ScoreDistribution {
public:
    double mean() const override { return mean_; }
    double stddev() const override { return stddev_; }
    double lmgf(double t) const override { return empirical_lmgf(sorted_, t); }
    TiltedMoments tilted_moments(double t) const override {
        return empirical_tilted_moments(sorted_, t);
    }
    double support_min() const override { return sorted_.front(); }
    double support_max() const override { return sorted_.back(); }
    double max_abs_score() const override;

    Hypothesis hypothesis() const { return hypothesis_; }
    std::size_t size() const { return sorted_.size(); }
    // q-th quantile of the pool, linear interpolation between order statistics.
    double quantile(double q) const;
    std::span<const double> values() const { return sorted_; }

private:
    friend Characterization moments(const ScorePool& pool);
    Characterization() = default;

    Hypothesis hypothesis_ = Hypothesis::h0;
    std::vector<double> sorted_; // ascending
    double mean_ = 0.0;
    double stddev_ = 0.0;
};

// Validate a pool and summarize it into a Characterization.
Characterization moments(const ScorePool& pool);

// Score every image of the given hypothesis through the model's elementwise
// statistic. Declared here, defined with the model code.
struct MlpParameters;
ScorePool score_pool(const MlpParameters& params, const DatasetSplit& data, Hypothesis h,
                     std::string source);

// Single-column CSV with a header comment row carrying hypothesis, seed and
// source. Values are written with round-trip precision.
void write_pool_csv(const ScorePool& pool, const std::filesystem::path& path);
ScorePool read_pool_csv(const std::filesystem::path& path);

} // namespace d3f
