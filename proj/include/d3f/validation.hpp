#pragma once

#include "d3f/characterize.hpp"
#include "d3f/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace d3f {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Closed-form validations, no dataset required. ------------------------------

// Rate solver vs the analytic Legendre transforms: exact evaluators to 1e-8,
// 1e5-sample pools to 0.02 over the central 90% of each pool.
CheckResult check_rate_oracle_equivalence();

// Refined tail vs the exact Gaussian n-sample tail at gamma = mu + sigma:
// ratio within 2% at n = 100 and within 10% at n = 20.
CheckResult check_refined_tail_accuracy();

// Empirical lmgf of 1e5 Gaussian draws within 0.05 of the closed form over
// |t| <= 2, and the rates it implies within 0.02.
CheckResult check_empirical_lmgf_accuracy();

// Wilson-interval calibration of the simulator: `reps` independent pool+plan
// repetitions at n = 10, gamma = mu + sigma, 1e6 trials; the interval must
// cover the exact tail in at least 90% of them.
CheckResult check_simulation_calibration(int reps = 100);

// Condensed property bundle: transform duality, curve monotonicity, interval
// sanity, simulation determinism, statistic invariances.
CheckResult check_invariant_bundle();

// Runs all of the dataset-free checks above, in order.
std::vector<CheckResult> oracle_checks();

// Dataset/model-dependent validations. ---------------------------------------

// Split sizes and per-hypothesis counts of the canonical dataset, pixel
// scaling bounds, and container round-trip.
CheckResult check_dataset_fidelity(const DatasetSplit& train, const DatasetSplit& test);

// Gaussian-limit quality of the aggregate under both hypotheses: KS distance
// of standardized n = 50 aggregates <= 0.05, and 1/n variance scaling within
// 10% over n in {1, 5, 50}.
CheckResult check_aggregate_normality(const ScorePool& pool0, const ScorePool& pool1,
                                      std::uint64_t seed);

// Error-curve reproduction on the trained scorer: separated means, small n = 1
// errors at the midpoint threshold, refined tail within one order of magnitude
// of well-measured empirical cells and closer than the CLT in at least half.
CheckResult check_curve_reproduction(const ScorePool& pool0, const ScorePool& pool1,
                                     std::uint64_t seed);

} // namespace d3f
