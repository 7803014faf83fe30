#include "d3f/ldp.hpp"
#include "d3f/errors.hpp"
#include "d3f/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace d3f {

namespace {

constexpr double INF = std::numeric_limits<double>::infinity();
constexpr double TWO_PI = 6.283185307179586476925286766559;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

RateResult rate_function(const ScoreDistribution& model, double gamma, Hypothesis k) {
    if (!std::isfinite(gamma)) {
        throw DomainError("rate_function: gamma must be finite");
    }
    const double mean = model.mean();
    // +1: the h0 error tails right of the mean; -1: the h1 error tails left.
    const double sign = (k == Hypothesis::h0) ? 1.0 : -1.0;

    if (sign * (gamma - mean) < 0.0) {
        const std::string interval =
            (k == Hypothesis::h0)
                ? "[" + fmt(mean) + ", " + fmt(model.support_max()) + ")"
                : "(" + fmt(model.support_min()) + ", " + fmt(mean) + "]";
        throw DomainError("rate_function: gamma " + fmt(gamma) + " lies on the wrong side of the " +
                          std::string(name(k)) + " mean; valid interval " + interval);
    }
    if (gamma == mean) {
        // Trivial point of the transform: zero tilt, zero rate.
        return {k, gamma, 0.0, 0.0, 0.0, model.tilted_moments(0.0).variance};
    }
    const double edge = (k == Hypothesis::h0) ? model.support_max() : model.support_min();
    if (sign * (gamma - edge) >= 0.0) {
        throw UnattainableRateError("rate_function: gamma " + fmt(gamma) +
                                    " at or beyond the support edge " + fmt(edge) + " under " +
                                    name(k));
    }

    // Tilt magnitude bound: |s| * max|score| <= 700 keeps every exp() finite.
    const double max_abs = model.max_abs_score();
    const double guard = std::isfinite(max_abs) ? 700.0 / max_abs : INF;

    // h(x) = sign * (phi'(sign x) - gamma) is increasing in x >= 0 with
    // h(0) = sign * (mean - gamma) < 0 here; expand until the bracket flips.
    const auto h = [&](double x) { return sign * (model.tilted_moments(sign * x).mean - gamma); };

    double lo = 0.0;
    double hi = std::min(1.0, guard);
    bool bracketed = false;
    for (int i = 0; i < 200; ++i) {
        if (h(hi) >= 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
        if (hi >= guard) {
            break;
        }
        hi = std::min(hi * 2.0, guard);
    }
    if (!bracketed) {
        throw UnattainableRateError("rate_function: gamma " + fmt(gamma) +
                                    " unreachable within the tilt guard (max tilt " + fmt(hi) +
                                    ") under " + name(k));
    }

    const double f_tol = 1e-10 * std::max(1.0, std::abs(gamma));
    double x = hi;
    double gap = h(hi);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double g = h(mid);
        if (std::abs(g) <= std::abs(gap)) {
            x = mid;
            gap = g;
        }
        if (std::abs(g) <= f_tol) {
            break;
        }
        (g < 0.0 ? lo : hi) = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) {
            break;
        }
    }
    if (std::abs(gap) > 1e-6 * std::max(1.0, std::abs(gamma))) {
        throw Error("rate_function: bisection failed to converge at gamma " + fmt(gamma) +
                    " (residual " + fmt(gap) + ")");
    }

    const double s = sign * x;
    const TiltedMoments mm = model.tilted_moments(s);
    if (!(mm.variance > 0.0)) {
        throw UnattainableRateError("rate_function: tilted variance vanished at gamma " +
                                    fmt(gamma) + "; threshold is numerically at the support edge");
    }
    const double rate = std::max(0.0, gamma * s - model.lmgf(s));
    return {k, gamma, rate, x, s, mm.variance};
}

TailApproximation exact_asymptotics(const RateResult& rate, int n) {
    if (n < 1) {
        throw DomainError("exact_asymptotics: n must be >= 1");
    }
    if (!(rate.tilt > 0.0)) {
        throw DomainError("exact_asymptotics: prefactor undefined at t_star = 0 (gamma at the "
                          "mean); use the CLT value there");
    }
    const double log_zeta =
        -std::log(rate.tilt) - 0.5 * std::log(TWO_PI * double(n) * rate.curvature);
    const double log_value = -double(n) * rate.rate + log_zeta;
    TailApproximation out;
    out.zeta = std::exp(log_zeta);
    out.clamped = log_value > 0.0;
    out.value = std::exp(std::min(log_value, 0.0));
    return out;
}

namespace {

double clt_tail(const ScoreDistribution& model, double signed_gap, int n) {
    if (n < 1) {
        throw DomainError("clt tail: n must be >= 1");
    }
    return q_function(std::sqrt(double(n)) * signed_gap / model.stddev());
}

} // namespace

double clt_alpha(const ScoreDistribution& model0, double gamma, int n) {
    return clt_tail(model0, gamma - model0.mean(), n);
}

double clt_beta(const ScoreDistribution& model1, double gamma, int n) {
    return clt_tail(model1, model1.mean() - gamma, n);
}

CurveGrid error_curves(const ScoreDistribution& model0, const ScoreDistribution& model1,
                       std::span<const double> gammas, std::span<const int> ns) {
    for (int n : ns) {
        if (n < 1) {
            throw DomainError("error_curves: every n must be >= 1");
        }
    }
    CurveGrid grid;
    grid.gammas.reserve(gammas.size());
    for (double gamma : gammas) {
        GammaAnalysis ga;
        ga.gamma = gamma;
        try {
            ga.rate0 = rate_function(model0, gamma, Hypothesis::h0);
            if (ga.rate0->tilt == 0.0) {
                ga.notes.push_back("h0: tilt 0 at the mean, prefactor cells left empty");
            }
        } catch (const Error& e) {
            ga.notes.push_back(std::string("h0: ") + e.what());
        }
        try {
            ga.rate1 = rate_function(model1, gamma, Hypothesis::h1);
            if (ga.rate1->tilt == 0.0) {
                ga.notes.push_back("h1: tilt 0 at the mean, prefactor cells left empty");
            }
        } catch (const Error& e) {
            ga.notes.push_back(std::string("h1: ") + e.what());
        }
        grid.gammas.push_back(std::move(ga));
    }
    grid.points.reserve(gammas.size() * ns.size());
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        const GammaAnalysis& ga = grid.gammas[gi];
        for (int n : ns) {
            CurvePoint pt;
            pt.gamma_index = gi;
            pt.n = n;
            pt.alpha_clt = clt_alpha(model0, ga.gamma, n);
            pt.beta_clt = clt_beta(model1, ga.gamma, n);
            if (ga.rate0 && ga.rate0->tilt > 0.0) {
                const TailApproximation ta = exact_asymptotics(*ga.rate0, n);
                pt.alpha_ldp = ta.value;
                pt.zeta0 = ta.zeta;
                pt.alpha_clamped = ta.clamped;
                grid.clamped_cells += ta.clamped ? 1 : 0;
            }
            if (ga.rate1 && ga.rate1->tilt > 0.0) {
                const TailApproximation ta = exact_asymptotics(*ga.rate1, n);
                pt.beta_ldp = ta.value;
                pt.zeta1 = ta.zeta;
                pt.beta_clamped = ta.clamped;
                grid.clamped_cells += ta.clamped ? 1 : 0;
            }
            grid.points.push_back(pt);
        }
    }
    return grid;
}

std::vector<TradeoffPoint> rate_tradeoff(const ScoreDistribution& model0,
                                         const ScoreDistribution& model1, int grid_size) {
    if (grid_size < 2) {
        throw DomainError("rate_tradeoff: grid_size must be >= 2");
    }
    const double mu0 = model0.mean();
    const double mu1 = model1.mean();
    if (!(mu0 < mu1)) {
        throw DomainError("rate_tradeoff: score separation violated (mu0 " + fmt(mu0) +
                          " >= mu1 " + fmt(mu1) + ")");
    }
    const auto one_side = [](const ScoreDistribution& model, double gamma, Hypothesis k) {
        try {
            return rate_function(model, gamma, k).rate;
        } catch (const UnattainableRateError&) {
            return INF;
        }
    };
    std::vector<TradeoffPoint> points;
    points.reserve(std::size_t(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        TradeoffPoint pt;
        // Pin the endpoints to the exact means so the trivial zero rate lands
        // on its own side regardless of rounding in the interpolation.
        if (i == 0) {
            pt.gamma = mu0;
        } else if (i == grid_size - 1) {
            pt.gamma = mu1;
        } else {
            pt.gamma = mu0 + (mu1 - mu0) * double(i) / double(grid_size - 1);
        }
        pt.rate0 = one_side(model0, pt.gamma, Hypothesis::h0);
        pt.rate1 = one_side(model1, pt.gamma, Hypothesis::h1);
        points.push_back(pt);
    }
    return points;
}

} // namespace d3f
