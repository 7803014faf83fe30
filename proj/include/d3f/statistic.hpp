#pragma once

#include "d3f/dataset.hpp"
#include "d3f/errors.hpp"

#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace d3f {

// A block of n elementwise scores, optionally tagged with the true hypothesis
// that generated it (known in simulation, unknown in the field).
struct ObservationSequence {
    std::vector<double> scores;
    std::optional<Hypothesis> truth;

    std::size_t n() const { return scores.size(); }
};

// The normalized block statistic: the arithmetic mean of the scores.
inline double aggregate(std::span<const double> scores) {
    if (scores.empty()) {
        throw DomainError("aggregate: empty score sequence");
    }
    const double sum = std::accumulate(scores.begin(), scores.end(), 0.0);
    return sum / double(scores.size());
}

// Threshold rule; the tie T == gamma goes to h1.
inline Hypothesis decide(double statistic, double gamma) {
    return statistic >= gamma ? Hypothesis::h1 : Hypothesis::h0;
}

} // namespace d3f
