#pragma once

#include "d3f/dataset.hpp"
#include "d3f/score_model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace d3f {

// Solution of the Legendre transform I(gamma) = sup_t [gamma t - phi_k(t)]
// restricted to the error side of hypothesis k: the h0 (false-alarm) side
// tilts right (t >= 0), the h1 (miss) side tilts left.
struct RateResult {
    Hypothesis hypothesis = Hypothesis::h0;
    double gamma = 0.0;
    double rate = 0.0;        // I >= 0, nats per observation
    double tilt = 0.0;        // t_star = |s| >= 0
    double signed_tilt = 0.0; // s, the actual argument of phi at the optimum
    double curvature = 0.0;   // phi''(s) > 0
};

// Solve phi'(s) = gamma on the side prescribed by the hypothesis.
//   - gamma == mean: trivial solution (rate 0, tilt 0).
//   - gamma on the wrong side of the mean: DomainError naming the valid interval.
//   - gamma at or beyond the support edge: UnattainableRateError.
// Bisection on the monotone derivative with an expanding bracket; tilt capped
// at 700 / max_abs_score() so the underlying exp() can never overflow.
// Convergence: |phi'(s) - gamma| <= 1e-10 * max(1, |gamma|).
RateResult rate_function(const ScoreDistribution& model, double gamma, Hypothesis k);

struct TailApproximation {
    double value = 0.0; // zeta * exp(-n I), clamped into [0, 1]
    double zeta = 0.0;  // prefactor 1 / (t_star sqrt(2 pi n phi''))
    bool clamped = false;
};

// Refined tail estimate with the saddlepoint prefactor. Requires tilt > 0
// (DomainError at the trivial solution: the prefactor is undefined at the
// mean, use the CLT column there) and n >= 1. Evaluated in log space.
TailApproximation exact_asymptotics(const RateResult& rate, int n);

// Gaussian-limit columns: alpha_n ~ Q(sqrt(n) (gamma - mu0) / sigma0) and
// beta_n ~ Q(sqrt(n) (mu1 - gamma) / sigma1).
double clt_alpha(const ScoreDistribution& model0, double gamma, int n);
double clt_beta(const ScoreDistribution& model1, double gamma, int n);

// Per-threshold analysis shared by every n of the grid. A side that cannot be
// solved (wrong side, unattainable, zero tilt) leaves its optional empty and
// explains why in notes.
struct GammaAnalysis {
    double gamma = 0.0;
    std::optional<RateResult> rate0;
    std::optional<RateResult> rate1;
    std::vector<std::string> notes;
};

struct CurvePoint {
    std::size_t gamma_index = 0;
    int n = 0;
    double alpha_clt = 0.0;
    double beta_clt = 0.0;
    std::optional<double> alpha_ldp;
    std::optional<double> beta_ldp;
    std::optional<double> zeta0;
    std::optional<double> zeta1;
    bool alpha_clamped = false;
    bool beta_clamped = false;
};

struct CurveGrid {
    std::vector<GammaAnalysis> gammas;
    std::vector<CurvePoint> points; // gamma-major, n-minor
    int clamped_cells = 0;
};

// Evaluate both approximations for every (gamma, n) pair. Rate solves happen
// once per gamma and are reused across the n axis; per-cell failures become
// empty cells with a note, never a thrown error.
CurveGrid error_curves(const ScoreDistribution& model0, const ScoreDistribution& model1,
                       std::span<const double> gammas, std::span<const int> ns);

struct TradeoffPoint {
    double gamma = 0.0;
    double rate0 = 0.0; // +infinity when gamma is unattainable under h0
    double rate1 = 0.0; // +infinity when gamma is unattainable under h1
};

// The achievable (I_0, I_1) pairs on a uniform gamma grid over [mu0, mu1].
// Endpoints carry the trivial zero rate on their own side. Requires
// mu0 < mu1 and grid_size >= 2.
std::vector<TradeoffPoint> rate_tradeoff(const ScoreDistribution& model0,
                                         const ScoreDistribution& model1, int grid_size);

} // namespace d3f
