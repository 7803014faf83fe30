#include "d3f/characterize.hpp"
#include "d3f/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace d3f {

double empirical_lmgf(std::span<const double> values, double t) {
    if (values.empty()) {
        throw DomainError("empirical lmgf: empty value array");
    }
    // log sum exp with the max pulled out: every exponent is <= 0.
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) {
        m = std::max(m, t * v);
    }
    double sum = 0.0;
    for (double v : values) {
        sum += std::exp(t * v - m);
    }
    return m + std::log(sum / double(values.size()));
}

TiltedMoments empirical_tilted_moments(std::span<const double> values, double t) {
    if (values.empty()) {
        throw DomainError("empirical tilted moments: empty value array");
    }
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) {
        m = std::max(m, t * v);
    }
    // Weighted mean under w_j ~ exp(t v_j), then weighted central second moment.
    double z = 0.0, first = 0.0;
    for (double v : values) {
        const double w = std::exp(t * v - m);
        z += w;
        first += w * v;
    }
    const double mean = first / z;
    double second = 0.0;
    for (double v : values) {
        const double w = std::exp(t * v - m);
        const double d = v - mean;
        second += w * d * d;
    }
    return {mean, second / z};
}

double Characterization::max_abs_score() const {
    return std::max(std::abs(sorted_.front()), std::abs(sorted_.back()));
}

double Characterization::quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw DomainError("quantile: q must lie in [0, 1]");
    }
    const double pos = q * double(sorted_.size() - 1);
    const std::size_t lo = std::size_t(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted_.size() - 1);
    const double frac = pos - double(lo);
    return sorted_[lo] * (1.0 - frac) + sorted_[hi] * frac;
}

Characterization moments(const ScorePool& pool) {
    if (pool.values.size() < 2) {
        throw DomainError("moments: pool has " + std::to_string(pool.values.size()) +
                          " scores, need at least 2");
    }
    for (double v : pool.values) {
        if (!std::isfinite(v)) {
            throw NumericError("moments: non-finite score in pool");
        }
    }
    Characterization c;
    c.hypothesis_ = pool.hypothesis;
    c.sorted_ = pool.values;
    std::sort(c.sorted_.begin(), c.sorted_.end());
    const std::size_t m = c.sorted_.size();
    double sum = 0.0;
    for (double v : c.sorted_) {
        sum += v;
    }
    c.mean_ = sum / double(m);
    double ss = 0.0;
    for (double v : c.sorted_) {
        const double d = v - c.mean_;
        ss += d * d;
    }
    c.stddev_ = std::sqrt(ss / double(m - 1));
    if (!(c.stddev_ > 0.0)) {
        throw DegeneracyError("moments: pool is constant (" + std::to_string(c.mean_) +
                              "), spread is zero");
    }
    return c;
}

void write_pool_csv(const ScorePool& pool, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << "# hypothesis=" << name(pool.hypothesis) << " seed=" << pool.seed
        << " source=" << pool.source << "\n";
    out << "score\n";
    char buf[40];
    for (double v : pool.values) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << "\n";
    }
    if (!out) {
        throw IoError("write failure on " + path.string());
    }
}

ScorePool read_pool_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line.rfind("# hypothesis=", 0) != 0) {
        throw FormatError("pool csv " + path.string() + ": missing metadata row");
    }
    ScorePool pool;
    {
        std::istringstream meta(line.substr(2));
        std::string field;
        while (meta >> field) {
            const auto eq = field.find('=');
            if (eq == std::string::npos) {
                continue;
            }
            const std::string key = field.substr(0, eq);
            const std::string value = field.substr(eq + 1);
            if (key == "hypothesis") {
                if (value != "h0" && value != "h1") {
                    throw FormatError("pool csv: unknown hypothesis '" + value + "'");
                }
                pool.hypothesis = value == "h0" ? Hypothesis::h0 : Hypothesis::h1;
            } else if (key == "seed") {
                pool.seed = std::stoull(value);
            } else if (key == "source") {
                pool.source = value;
            }
        }
    }
    if (!std::getline(in, line) || line != "score") {
        throw FormatError("pool csv " + path.string() + ": missing 'score' header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        pool.values.push_back(std::stod(line));
    }
    return pool;
}

} // namespace d3f
