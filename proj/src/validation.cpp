#include "d3f/validation.hpp"
#include "d3f/errors.hpp"
#include "d3f/ldp.hpp"
#include "d3f/montecarlo.hpp"
#include "d3f/normal.hpp"
#include "d3f/oracles.hpp"
#include "d3f/rng.hpp"
#include "d3f/statistic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace d3f {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out[std::size_t(i)] = lo + (hi - lo) * double(i) / double(count - 1);
    }
    return out;
}

// Largest |I_solver - I_closed_form| over a gamma grid, picking the error side
// that matches each gamma's position relative to the mean.
double max_rate_error(const ScoreDistribution& model, const AnalyticScore& reference,
                      const std::vector<double>& gammas) {
    double worst = 0.0;
    for (double g : gammas) {
        const Hypothesis side = g >= model.mean() ? Hypothesis::h0 : Hypothesis::h1;
        const double solved = rate_function(model, g, side).rate;
        worst = std::max(worst, std::abs(solved - reference.exact_rate(g)));
    }
    return worst;
}

} // namespace

CheckResult check_rate_oracle_equivalence() {
    CheckResult res;
    res.name = "rate solver matches closed-form transforms";
    const GaussianScore gauss(0.0, 1.0);
    const BernoulliScore bern(0.5, -1.0, 1.0);

    // Exact evaluators: the solver should agree to near machine accuracy on a
    // 50-point grid per family, in under a second.
    const auto start = std::chrono::steady_clock::now();
    const double analytic_err =
        std::max(max_rate_error(gauss, gauss, linspace(-1.645, 1.645, 50)),
                 max_rate_error(bern, bern, linspace(-0.9, 0.9, 50)));
    const double analytic_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    // 1e5-sample pools: agreement over the central 90% of each pool.
    const Characterization cg = moments(gauss.sample(100000, 11));
    const double gauss_pool_err =
        max_rate_error(cg, gauss, linspace(cg.quantile(0.05), cg.quantile(0.95), 23));
    const Characterization cb = moments(bern.sample(100000, 12));
    const double bern_pool_err = max_rate_error(cb, bern, linspace(-0.9, 0.9, 19));
    const double pool_err = std::max(gauss_pool_err, bern_pool_err);

    res.pass = analytic_err <= 1e-8 && analytic_seconds < 1.0 && pool_err <= 0.02;
    res.detail = "analytic err " + fmt(analytic_err) + " (tol 1e-8) in " + fmt(analytic_seconds) +
                 " s (budget 1 s), pool err " + fmt(pool_err) + " (tol 0.02)";
    return res;
}

CheckResult check_refined_tail_accuracy() {
    CheckResult res;
    res.name = "refined tail tracks the exact Gaussian tail";
    const GaussianScore gauss(0.0, 1.0);
    const RateResult rate = rate_function(gauss, 1.0, Hypothesis::h0);
    const double r100 = exact_asymptotics(rate, 100).value / gauss.exact_tail(1.0, 100);
    const double r20 = exact_asymptotics(rate, 20).value / gauss.exact_tail(1.0, 20);
    res.pass = std::abs(r100 - 1.0) <= 0.02 && std::abs(r20 - 1.0) <= 0.10;
    res.detail = "ratio n=100: " + fmt(r100) + " (tol 2%), n=20: " + fmt(r20) + " (tol 10%)";
    return res;
}

CheckResult check_empirical_lmgf_accuracy() {
    CheckResult res;
    res.name = "empirical lmgf faithful on a 1e5 Gaussian pool";
    const GaussianScore gauss(0.0, 1.0);
    const Characterization c = moments(gauss.sample(100000, 21));
    double lmgf_err = 0.0;
    for (double t : linspace(-2.0, 2.0, 41)) {
        lmgf_err = std::max(lmgf_err, std::abs(c.lmgf(t) - gauss.lmgf(t)));
    }
    const double rate_err =
        max_rate_error(c, gauss, linspace(c.quantile(0.05), c.quantile(0.95), 23));
    res.pass = lmgf_err <= 0.05 && rate_err <= 0.02;
    res.detail = "lmgf err " + fmt(lmgf_err) + " (tol 0.05) over |t|<=2, rate err " +
                 fmt(rate_err) + " (tol 0.02) over central 90%";
    return res;
}

CheckResult check_simulation_calibration(int reps) {
    CheckResult res;
    res.name = "simulator Wilson intervals calibrated against the exact tail";
    const GaussianScore gauss(0.0, 1.0);
    const double truth = gauss.exact_tail(1.0, 10);
    const std::uint64_t master = 0xACCE57ULL;
    int covered = 0;
    for (int r = 0; r < reps; ++r) {
        const ScorePool pool = gauss.sample(10000000, derive_seed(master, 1, std::uint64_t(r)));
        SimulationPlan plan;
        plan.ns = {10};
        plan.gammas = {1.0};
        plan.trials = 1000000;
        plan.seed = derive_seed(master, 2, std::uint64_t(r));
        const EmpiricalEstimate est = simulate(pool, plan).front();
        if (est.wilson_low <= truth && truth <= est.wilson_high) {
            ++covered;
        }
    }
    const int need = (reps * 90 + 99) / 100;
    res.pass = covered >= need;
    res.detail = "covered " + std::to_string(covered) + "/" + std::to_string(reps) + " (need >= " +
                 std::to_string(need) + "), exact tail " + fmt(truth);
    return res;
}

CheckResult check_invariant_bundle() {
    CheckResult res;
    res.name = "property bundle (duality, monotonicity, determinism)";
    std::vector<std::string> failures;
    const auto expect = [&](bool ok, const std::string& what) {
        if (!ok) {
            failures.push_back(what);
        }
    };
    std::mt19937_64 engine(0xB0BACAFEULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Young's inequality x t <= I(x) + phi(t) on both an exact model and a pool.
    {
        const GaussianScore gauss(0.3, 1.3);
        const Characterization pool = moments(gauss.sample(20000, 31));
        bool ok = true;
        for (int i = 0; i < 200; ++i) {
            const double x = gauss.mean() + 3.0 * (unit(engine) - 0.5);
            const double t = 4.0 * (unit(engine) - 0.5);
            const Hypothesis side = x >= gauss.mean() ? Hypothesis::h0 : Hypothesis::h1;
            ok = ok && x * t <= rate_function(gauss, x, side).rate + gauss.lmgf(t) + 1e-9;
            const double xp = pool.quantile(0.05 + 0.9 * unit(engine));
            const Hypothesis sp = xp >= pool.mean() ? Hypothesis::h0 : Hypothesis::h1;
            ok = ok && xp * t <= rate_function(pool, xp, sp).rate + pool.lmgf(t) + 1e-9;
        }
        expect(ok, "transform duality");
    }
    // Derivative monotonicity and nonnegative curvature on a mixed pool.
    {
        ScorePool raw;
        raw.values.resize(500);
        std::normal_distribution<double> n1(-1.0, 0.7), n2(2.0, 1.2);
        for (std::size_t i = 0; i < raw.values.size(); ++i) {
            raw.values[i] = i % 2 == 0 ? n1(engine) : n2(engine);
        }
        const Characterization c = moments(raw);
        double prev = -1e300;
        bool ok = true;
        for (double t : linspace(-3.0, 3.0, 61)) {
            const TiltedMoments tm = c.tilted_moments(t);
            ok = ok && tm.mean >= prev - 1e-12 && tm.variance >= 0.0;
            prev = tm.mean;
        }
        ok = ok && std::abs(c.lmgf(0.0)) == 0.0;
        expect(ok, "lmgf convexity");
    }
    // Tradeoff monotone and symmetric for a symmetric pair of exact models.
    {
        const GaussianScore m0(-1.0, 1.0), m1(1.0, 1.0);
        const auto pts = rate_tradeoff(m0, m1, 41);
        bool ok = pts.front().rate0 == 0.0 && pts.back().rate1 == 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            ok = ok && pts[i].rate0 >= pts[i - 1].rate0 - 1e-9;
            ok = ok && pts[i].rate1 <= pts[i - 1].rate1 + 1e-9;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            ok = ok && std::abs(pts[i].rate0 - pts[pts.size() - 1 - i].rate1) <= 1e-9;
        }
        expect(ok, "rate tradeoff shape");
    }
    // Wilson interval sanity on random counts.
    {
        bool ok = true;
        for (int i = 0; i < 300; ++i) {
            const long m = 1 + long(engine() % 100000);
            const long k = long(engine() % std::uint64_t(m + 1));
            const WilsonInterval wi = wilson_interval(k, m);
            const double p = double(k) / double(m);
            ok = ok && wi.low >= 0.0 && wi.low <= p + 1e-12 && p <= wi.high + 1e-12 &&
                 wi.high <= 1.0;
        }
        expect(ok, "wilson bounds");
    }
    // Simulation determinism and the exhaustive n = 1 identity.
    {
        const GaussianScore gauss(0.0, 1.0);
        const ScorePool pool = gauss.sample(2000, 41);
        SimulationPlan plan;
        plan.ns = {1, 5};
        plan.gammas = {0.3, 0.8};
        plan.trials = 5000;
        plan.seed = 7;
        const auto a = simulate(pool, plan);
        const auto b = simulate(pool, plan);
        bool ok = a.size() == b.size();
        for (std::size_t i = 0; ok && i < a.size(); ++i) {
            ok = a[i].events == b[i].events;
        }
        SimulationPlan exhaustive;
        exhaustive.ns = {1};
        exhaustive.gammas = {0.3};
        exhaustive.trials = long(pool.values.size());
        exhaustive.sampling = SamplingMode::without_replacement;
        exhaustive.seed = 9;
        const auto ex = simulate(pool, exhaustive).front();
        long direct = 0;
        for (double v : pool.values) {
            direct += v >= 0.3 ? 1 : 0;
        }
        ok = ok && ex.events == direct;
        expect(ok, "simulation determinism");
    }
    // Statistic invariances and CLT boundary values.
    {
        std::vector<double> scores{0.5, -1.5, 2.0, 0.25};
        std::vector<double> shuffled = scores;
        std::shuffle(shuffled.begin(), shuffled.end(), engine);
        bool ok = std::abs(aggregate(scores) - aggregate(shuffled)) <= 1e-15;
        ok = ok && decide(1.0, 1.0) == Hypothesis::h1 && decide(0.999, 1.0) == Hypothesis::h0;
        const GaussianScore gauss(0.0, 2.0);
        ok = ok && clt_alpha(gauss, 0.0, 5) == 0.5;
        ok = ok && clt_alpha(gauss, 1.0, 20) < clt_alpha(gauss, 1.0, 10);
        const RateResult rate = rate_function(gauss, 1.0, Hypothesis::h0);
        const double z1 = exact_asymptotics(rate, 50).zeta;
        const double z2 = exact_asymptotics(rate, 100).zeta;
        ok = ok && std::abs(z2 / z1 - 1.0 / std::sqrt(2.0)) <= 1e-12;
        expect(ok, "statistic/clt/prefactor identities");
    }

    res.pass = failures.empty();
    if (res.pass) {
        res.detail = "6/6 sub-checks passed";
    } else {
        std::ostringstream os;
        os << "failed:";
        for (const auto& f : failures) {
            os << ' ' << f << ';';
        }
        res.detail = os.str();
    }
    return res;
}

std::vector<CheckResult> oracle_checks() {
    return {check_rate_oracle_equivalence(), check_refined_tail_accuracy(),
            check_empirical_lmgf_accuracy(), check_simulation_calibration(),
            check_invariant_bundle()};
}

// ==== dataset/model checks ==================================================

CheckResult check_dataset_fidelity(const DatasetSplit& train, const DatasetSplit& test) {
    CheckResult res;
    res.name = "canonical dataset counts and scaling";
    const bool sizes = train.size() == 60000 && test.size() == 10000;
    const bool zeros = train.count(Hypothesis::h0) == 5923 && test.count(Hypothesis::h0) == 980;
    const bool rest = train.count(Hypothesis::h1) == 54077 && test.count(Hypothesis::h1) == 9020;
    bool range = true;
    bool hit0 = false, hit1 = false;
    for (const DatasetSplit* split : {&train, &test}) {
        for (const LabeledImage& img : split->images) {
            for (float p : img.pixels) {
                range = range && p >= 0.0f && p <= 1.0f;
                hit0 = hit0 || p == 0.0f;
                hit1 = hit1 || p == 1.0f;
            }
        }
    }
    res.pass = sizes && zeros && rest && range && hit0 && hit1;
    res.detail = "train " + std::to_string(train.size()) + " (h0 " +
                 std::to_string(train.count(Hypothesis::h0)) + "), test " +
                 std::to_string(test.size()) + " (h0 " +
                 std::to_string(test.count(Hypothesis::h0)) + "), pixels in [0,1] " +
                 (range ? "yes" : "NO") + ", endpoints hit " +
                 ((hit0 && hit1) ? "yes" : "NO");
    return res;
}

CheckResult check_aggregate_normality(const ScorePool& pool0, const ScorePool& pool1,
                                      std::uint64_t seed) {
    CheckResult res;
    res.name = "aggregate approaches its Gaussian limit";
    double worst_ks = 0.0;
    double worst_ratio_dev = 0.0;
    for (const ScorePool* pool : {&pool0, &pool1}) {
        const Characterization c = moments(*pool);
        const double pool_var = c.stddev() * c.stddev();
        for (int n : {1, 5, 50}) {
            const Histogram h = statistic_histogram(
                *pool, n, 10000,
                derive_seed(seed, 0x414747ULL, std::uint64_t(index(pool->hypothesis)),
                            std::uint64_t(n)));
            double mean = 0.0;
            for (double a : h.aggregates) {
                mean += a;
            }
            mean /= double(h.aggregates.size());
            double var = 0.0;
            for (double a : h.aggregates) {
                var += (a - mean) * (a - mean);
            }
            var /= double(h.aggregates.size() - 1);
            worst_ratio_dev =
                std::max(worst_ratio_dev, std::abs(var * double(n) / pool_var - 1.0));
            if (n == 50) {
                std::vector<double> std_agg = h.aggregates;
                const double scale = std::sqrt(pool_var / double(n));
                for (double& a : std_agg) {
                    a = (a - c.mean()) / scale;
                }
                std::sort(std_agg.begin(), std_agg.end());
                const double count = double(std_agg.size());
                double ks = 0.0;
                for (std::size_t i = 0; i < std_agg.size(); ++i) {
                    const double cdf = normal_cdf(std_agg[i]);
                    ks = std::max(ks, std::abs(double(i + 1) / count - cdf));
                    ks = std::max(ks, std::abs(cdf - double(i) / count));
                }
                worst_ks = std::max(worst_ks, ks);
            }
        }
    }
    res.pass = worst_ks <= 0.05 && worst_ratio_dev <= 0.10;
    res.detail = "KS at n=50: " + fmt(worst_ks) + " (tol 0.05), variance scaling off by " +
                 fmt(worst_ratio_dev) + " (tol 0.10)";
    return res;
}

CheckResult check_curve_reproduction(const ScorePool& pool0, const ScorePool& pool1,
                                     std::uint64_t seed) {
    CheckResult res;
    res.name = "error curves reproduced on the trained scorer";
    const Characterization c0 = moments(pool0);
    const Characterization c1 = moments(pool1);
    const double mu0 = c0.mean(), mu1 = c1.mean();
    if (!(mu0 < 0.0 && 0.0 < mu1)) {
        res.pass = false;
        res.detail = "means not separated around 0: mu0 " + fmt(mu0) + ", mu1 " + fmt(mu1);
        return res;
    }

    const double mid = 0.5 * (mu0 + mu1);
    long a_events = 0, b_events = 0;
    for (double v : pool0.values) {
        a_events += v >= mid ? 1 : 0;
    }
    for (double v : pool1.values) {
        b_events += v < mid ? 1 : 0;
    }
    const double alpha1 = double(a_events) / double(pool0.values.size());
    const double beta1 = double(b_events) / double(pool1.values.size());
    if (alpha1 > 0.05 || beta1 > 0.05) {
        res.pass = false;
        res.detail = "n=1 midpoint errors too large: alpha " + fmt(alpha1) + ", beta " +
                     fmt(beta1) + " (tol 0.05)";
        return res;
    }

    const std::vector<int> ns{1, 2, 3, 4, 5, 7, 10, 15, 20, 30, 50};
    std::vector<double> gammas;
    for (int i = 1; i <= 5; ++i) {
        gammas.push_back(mu0 + (mu1 - mu0) * double(i) / 6.0);
    }
    const CurveGrid grid = error_curves(c0, c1, gammas, ns);
    SimulationPlan plan;
    plan.ns = ns;
    plan.gammas = gammas;
    plan.trials = 100000;
    plan.seed = derive_seed(seed, 0xC7ULL, 0);
    const auto est0 = simulate(pool0, plan);
    plan.seed = derive_seed(seed, 0xC7ULL, 1);
    const auto est1 = simulate(pool1, plan);

    const auto log10_safe = [](double v) { return std::log10(std::max(v, 1e-300)); };
    int qualifying = 0, within_decade = 0, ldp_closer = 0;
    double worst_decades = 0.0;
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        for (std::size_t ni = 0; ni < ns.size(); ++ni) {
            const CurvePoint& pt = grid.points[gi * ns.size() + ni];
            for (const Hypothesis hyp : {Hypothesis::h0, Hypothesis::h1}) {
                const auto& est =
                    (hyp == Hypothesis::h0 ? est0 : est1)[ni * gammas.size() + gi];
                const auto& ldp = hyp == Hypothesis::h0 ? pt.alpha_ldp : pt.beta_ldp;
                const double clt = hyp == Hypothesis::h0 ? pt.alpha_clt : pt.beta_clt;
                if (est.p_hat < 1e-3 || est.events < 10 || !ldp) {
                    continue;
                }
                ++qualifying;
                const double ldp_gap = std::abs(log10_safe(*ldp) - log10_safe(est.p_hat));
                const double clt_gap = std::abs(log10_safe(clt) - log10_safe(est.p_hat));
                worst_decades = std::max(worst_decades, ldp_gap);
                within_decade += ldp_gap <= 1.0 ? 1 : 0;
                ldp_closer += ldp_gap < clt_gap ? 1 : 0;
            }
        }
    }
    const bool decade_ok = within_decade == qualifying && qualifying > 0;
    const bool closer_ok = 2 * ldp_closer >= qualifying;
    res.pass = decade_ok && closer_ok;
    res.detail = "n=1 errors (" + fmt(alpha1) + ", " + fmt(beta1) + "); " +
                 std::to_string(qualifying) + " well-measured cells, worst gap " +
                 fmt(worst_decades) + " decades, refined tail closer than CLT in " +
                 std::to_string(ldp_closer) + "/" + std::to_string(qualifying);
    return res;
}

} // namespace d3f
