#pragma once

#include "d3f/dataset.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace d3f {

// One row of the long-form error-curve table. `kind` selects which estimator
// produced `value`: "empirical" (simulation), "clt" (Gaussian limit), or
// "ldp" (refined tail). Fields that do not apply to the kind stay empty.
struct CurveRecord {
    Hypothesis hypothesis = Hypothesis::h0;
    double gamma = 0.0;
    int n = 0;
    std::string kind;
    double value = 0.0;
    std::optional<double> zeta;      // ldp rows
    std::optional<double> rate;      // ldp rows: I
    std::optional<double> tilt;      // ldp rows: t_star
    std::optional<long> trials;      // empirical rows
    std::optional<long> events;      // empirical rows
    std::optional<double> wilson_low;
    std::optional<double> wilson_high;
    std::optional<bool> low_confidence;
    std::optional<bool> clamped;     // ldp rows hitting the [0,1] clamp
};

// Header: hypothesis,gamma,n,kind,value,zeta,I,t_star,... with empty cells for
// absent fields; doubles carry round-trip precision.
void write_curves_csv(const std::filesystem::path& path, std::span<const CurveRecord> records);
std::vector<CurveRecord> read_curves_csv(const std::filesystem::path& path);

// Same rows as a JSON array; absent fields are omitted from the object.
void write_curves_json(const std::filesystem::path& path, std::span<const CurveRecord> records);

} // namespace d3f
