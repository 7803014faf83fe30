#include "d3f/pipeline.hpp"
#include "d3f/curves_io.hpp"
#include "d3f/errors.hpp"
#include "d3f/ldp.hpp"
#include "d3f/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>

namespace d3f {

namespace {

constexpr std::uint64_t MC_STREAM = 0x6d63ULL;         // "mc"
constexpr std::uint64_t TRAJ_STREAM = 0x7472616aULL;   // "traj"
constexpr std::uint64_t HISTO_STREAM = 0x68697374ULL;  // "hist"

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

void finish_out(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw IoError("write failure on " + path.string());
    }
}

std::filesystem::path effective_data_dir(const RunConfig& config) {
    if (!config.data_dir.empty()) {
        return config.data_dir;
    }
    if (const char* env = std::getenv("D3F_DATA_DIR"); env && *env) {
        return env;
    }
    return "data/mnist";
}

int final_checkpoint(const RunConfig& config) {
    return *std::max_element(config.checkpoints.begin(), config.checkpoints.end());
}

SavedModel load_model_for(const RunConfig& config, std::uint64_t seed, int checkpoint) {
    const auto path = model_path(config, seed, checkpoint);
    if (!std::filesystem::exists(path)) {
        throw IoError("model file " + path.string() + " not found; run the train command first");
    }
    return load_model(path);
}

struct SeedArtifacts {
    ScorePool pool0;
    ScorePool pool1;
    Characterization char0;
    Characterization char1;
};

SeedArtifacts build_pools(const RunConfig& config, const MlpParameters& params,
                          const DatasetSplit& population) {
    const std::string source = config.exclude_train_from_pools ? "test" : "train+test";
    ScorePool pool0 = score_pool(params, population, Hypothesis::h0, source);
    ScorePool pool1 = score_pool(params, population, Hypothesis::h1, source);
    Characterization char0 = moments(pool0);
    Characterization char1 = moments(pool1);
    return SeedArtifacts{std::move(pool0), std::move(pool1), std::move(char0), std::move(char1)};
}

// Threshold grid for one seed: explicit absolute gammas win (checked against
// the separation interval, kept either way with a diagnostic); otherwise the
// relative positions, inset from the means by 1e-6 of the gap so the refined
// tail never sits exactly on a mean.
std::vector<double> resolve_gammas(const RunConfig& config, const Characterization& c0,
                                   const Characterization& c1, std::uint64_t seed,
                                   std::vector<std::string>& diagnostics) {
    const double mu0 = c0.mean();
    const double mu1 = c1.mean();
    if (!(mu0 < mu1)) {
        throw DomainError("seed " + std::to_string(seed) + ": score separation violated (mu0 " +
                          num(mu0) + " >= mu1 " + num(mu1) + ")");
    }
    if (!config.gammas.empty()) {
        for (double g : config.gammas) {
            if (!(g > mu0 && g < mu1)) {
                diagnostics.push_back("seed " + std::to_string(seed) + ": gamma " + num(g) +
                                      " outside the separation interval (" + num(mu0) + ", " +
                                      num(mu1) + "); refined-tail cells will be empty");
            }
        }
        return config.gammas;
    }
    const double gap = mu1 - mu0;
    std::vector<double> gammas;
    gammas.reserve(config.gamma_positions.size());
    for (double pos : config.gamma_positions) {
        const double clamped = std::clamp(pos, 1e-6, 1.0 - 1e-6);
        gammas.push_back(mu0 + clamped * gap);
    }
    return gammas;
}

void write_effective_config(const RunConfig& config) {
    save_run_config(config, config.out_dir / "config_used.json");
}

} // namespace

// ==== config ================================================================

void validate_run_config(const RunConfig& config) {
    if (config.seeds.empty()) {
        throw ConfigError("config: seeds must not be empty");
    }
    if (config.checkpoints.empty()) {
        throw ConfigError("config: checkpoints must not be empty");
    }
    for (int c : config.checkpoints) {
        if (c < 1 || c > config.training.epochs) {
            throw ConfigError("config: checkpoint " + std::to_string(c) +
                              " outside [1, epochs=" + std::to_string(config.training.epochs) +
                              "]");
        }
    }
    for (double pos : config.gamma_positions) {
        if (!(pos > 0.0 && pos < 1.0)) {
            throw ConfigError("config: gamma position " + num(pos) +
                              " must lie strictly inside (0, 1)");
        }
    }
    for (double g : config.gammas) {
        if (!std::isfinite(g)) {
            throw ConfigError("config: absolute gamma values must be finite");
        }
    }
    if (config.ns.empty()) {
        throw ConfigError("config: ns must not be empty");
    }
    for (int n : config.ns) {
        if (n < 1) {
            throw ConfigError("config: every n must be >= 1");
        }
    }
    for (int n : config.histogram_ns) {
        if (n < 1) {
            throw ConfigError("config: every histogram n must be >= 1");
        }
    }
    if (config.trials < 1 || config.histogram_trials < 1) {
        throw ConfigError("config: trial counts must be >= 1");
    }
    if (config.tradeoff_grid < 2) {
        throw ConfigError("config: tradeoff_grid must be >= 2");
    }
    if (config.trajectory_n < 1) {
        throw ConfigError("config: trajectory_n must be >= 1");
    }
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    RunConfig c;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "data_dir") {
                c.data_dir = value.get<std::string>();
            } else if (key == "out_dir") {
                c.out_dir = value.get<std::string>();
            } else if (key == "epochs") {
                c.training.epochs = value.get<int>();
            } else if (key == "batch_size") {
                c.training.batch_size = value.get<int>();
            } else if (key == "learning_rate") {
                c.training.learning_rate = value.get<double>();
            } else if (key == "adam_beta1") {
                c.training.adam_beta1 = value.get<double>();
            } else if (key == "adam_beta2") {
                c.training.adam_beta2 = value.get<double>();
            } else if (key == "adam_epsilon") {
                c.training.adam_epsilon = value.get<double>();
            } else if (key == "reweight_classes") {
                c.training.reweight_classes = value.get<bool>();
            } else if (key == "seeds") {
                c.seeds = value.get<std::vector<std::uint64_t>>();
            } else if (key == "checkpoints") {
                c.checkpoints = value.get<std::vector<int>>();
            } else if (key == "gammas") {
                c.gammas = value.get<std::vector<double>>();
            } else if (key == "gamma_positions") {
                c.gamma_positions = value.get<std::vector<double>>();
            } else if (key == "ns") {
                c.ns = value.get<std::vector<int>>();
            } else if (key == "trials") {
                c.trials = value.get<long>();
            } else if (key == "sampling") {
                const std::string s = value.get<std::string>();
                if (s == "with_replacement") {
                    c.sampling = SamplingMode::with_replacement;
                } else if (s == "without_replacement") {
                    c.sampling = SamplingMode::without_replacement;
                } else {
                    throw ConfigError("config: unknown sampling mode '" + s + "'");
                }
            } else if (key == "sim_seed") {
                c.sim_seed = value.get<std::uint64_t>();
            } else if (key == "exclude_train_from_pools") {
                c.exclude_train_from_pools = value.get<bool>();
            } else if (key == "tradeoff_grid") {
                c.tradeoff_grid = value.get<int>();
            } else if (key == "trajectory_n") {
                c.trajectory_n = value.get<int>();
            } else if (key == "histogram_trials") {
                c.histogram_trials = value.get<long>();
            } else if (key == "histogram_ns") {
                c.histogram_ns = value.get<std::vector<int>>();
            } else {
                throw ConfigError("config " + path.string() + ": unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return c;
}

void save_run_config(const RunConfig& config, const std::filesystem::path& path) {
    nlohmann::json j;
    j["data_dir"] = effective_data_dir(config).string();
    j["out_dir"] = config.out_dir.string();
    j["epochs"] = config.training.epochs;
    j["batch_size"] = config.training.batch_size;
    j["learning_rate"] = config.training.learning_rate;
    j["adam_beta1"] = config.training.adam_beta1;
    j["adam_beta2"] = config.training.adam_beta2;
    j["adam_epsilon"] = config.training.adam_epsilon;
    j["reweight_classes"] = config.training.reweight_classes;
    j["seeds"] = config.seeds;
    j["checkpoints"] = config.checkpoints;
    j["gammas"] = config.gammas;
    j["gamma_positions"] = config.gamma_positions;
    j["ns"] = config.ns;
    j["trials"] = config.trials;
    j["sampling"] = config.sampling == SamplingMode::with_replacement ? "with_replacement"
                                                                      : "without_replacement";
    j["sim_seed"] = config.sim_seed;
    j["exclude_train_from_pools"] = config.exclude_train_from_pools;
    j["tradeoff_grid"] = config.tradeoff_grid;
    j["trajectory_n"] = config.trajectory_n;
    j["histogram_trials"] = config.histogram_trials;
    j["histogram_ns"] = config.histogram_ns;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
    finish_out(out, path);
}

// ==== data ==================================================================

std::filesystem::path resolve_data_file(const std::filesystem::path& dir,
                                        const std::string& base_name) {
    const auto plain = dir / base_name;
    if (std::filesystem::exists(plain)) {
        return plain;
    }
    const auto gz = dir / (base_name + ".gz");
    if (std::filesystem::exists(gz)) {
        return gz;
    }
    throw IoError("neither " + plain.string() + " nor " + gz.string() + " exists");
}

DatasetSplit load_train_split(const RunConfig& config) {
    const auto dir = effective_data_dir(config);
    return load_split(resolve_data_file(dir, "train-images-idx3-ubyte"),
                      resolve_data_file(dir, "train-labels-idx1-ubyte"), Split::train);
}

DatasetSplit load_test_split(const RunConfig& config) {
    const auto dir = effective_data_dir(config);
    return load_split(resolve_data_file(dir, "t10k-images-idx3-ubyte"),
                      resolve_data_file(dir, "t10k-labels-idx1-ubyte"), Split::test);
}

DatasetSplit characterization_population(const RunConfig& config) {
    if (config.exclude_train_from_pools) {
        return load_test_split(config);
    }
    return concat(load_train_split(config), load_test_split(config));
}

std::filesystem::path model_path(const RunConfig& config, std::uint64_t seed, int checkpoint) {
    return config.out_dir / "models" /
           ("mlp_seed" + std::to_string(seed) + "_epoch" + std::to_string(checkpoint) + ".json");
}

// ==== commands ==============================================================

CommandOutcome cmd_train(const RunConfig& config) {
    validate_run_config(config);
    std::filesystem::create_directories(config.out_dir / "models");
    write_effective_config(config);
    CommandOutcome outcome;

    const DatasetSplit train_data = load_train_split(config);
    const std::set<int> marks(config.checkpoints.begin(), config.checkpoints.end());

    const auto log_path = config.out_dir / "training_log.csv";
    auto log = open_out(log_path);
    log << "seed,epoch,loss\n";

    for (std::uint64_t seed : config.seeds) {
        TrainingConfig tc = config.training;
        tc.seed = seed;
        train(train_data, tc, [&](int epoch, const MlpParameters& params, double loss) {
            log << seed << ',' << epoch << ',' << num(loss) << "\n";
            if (marks.count(epoch)) {
                const auto path = model_path(config, seed, epoch);
                save_model(params, tc, path);
                outcome.files.push_back(path);
            }
        });
    }
    finish_out(log, log_path);
    outcome.files.push_back(log_path);
    return outcome;
}

CommandOutcome cmd_trajectories(const RunConfig& config) {
    validate_run_config(config);
    std::filesystem::create_directories(config.out_dir);
    write_effective_config(config);
    CommandOutcome outcome;

    const DatasetSplit population = characterization_population(config);
    const int checkpoint = final_checkpoint(config);

    const auto path = config.out_dir / "trajectories.csv";
    auto out = open_out(path);
    out << "seed,hypothesis,m,score,running_mean\n";
    for (std::uint64_t seed : config.seeds) {
        const SavedModel model = load_model_for(config, seed, checkpoint);
        const SeedArtifacts art = build_pools(config, model.params, population);
        for (const ScorePool* pool : {&art.pool0, &art.pool1}) {
            std::mt19937_64 engine(derive_seed(config.sim_seed, TRAJ_STREAM, seed,
                                               std::uint64_t(index(pool->hypothesis))));
            double sum = 0.0;
            for (int m = 1; m <= config.trajectory_n; ++m) {
                const double score = pool->values[bounded_index(engine, pool->values.size())];
                sum += score;
                out << seed << ',' << name(pool->hypothesis) << ',' << m << ',' << num(score)
                    << ',' << num(sum / double(m)) << "\n";
            }
        }
    }
    finish_out(out, path);
    outcome.files.push_back(path);
    return outcome;
}

CommandOutcome cmd_characterize(const RunConfig& config) {
    validate_run_config(config);
    std::filesystem::create_directories(config.out_dir / "pools");
    write_effective_config(config);
    CommandOutcome outcome;

    const DatasetSplit population = characterization_population(config);
    const int checkpoint = final_checkpoint(config);

    const auto summary_path = config.out_dir / "characterization.csv";
    auto summary = open_out(summary_path);
    summary << "seed,hypothesis,count,mu,sigma,min,max,source\n";
    for (std::uint64_t seed : config.seeds) {
        const SavedModel model = load_model_for(config, seed, checkpoint);
        const SeedArtifacts art = build_pools(config, model.params, population);
        for (const auto* pair : {&art.pool0, &art.pool1}) {
            const Characterization& ch =
                pair->hypothesis == Hypothesis::h0 ? art.char0 : art.char1;
            const auto pool_path =
                config.out_dir / "pools" /
                ("scores_" + std::string(name(pair->hypothesis)) + "_seed" +
                 std::to_string(seed) + ".csv");
            write_pool_csv(*pair, pool_path);
            outcome.files.push_back(pool_path);
            summary << seed << ',' << name(pair->hypothesis) << ',' << ch.size() << ','
                    << num(ch.mean()) << ',' << num(ch.stddev()) << ',' << num(ch.support_min())
                    << ',' << num(ch.support_max()) << ',' << pair->source << "\n";
        }
    }
    finish_out(summary, summary_path);
    outcome.files.push_back(summary_path);
    return outcome;
}

namespace {

// Merge analytic grid cells and simulation estimates into long-form records
// for one hypothesis of one seed.
std::vector<CurveRecord> merge_records(const CurveGrid& grid,
                                       const std::vector<EmpiricalEstimate>& estimates,
                                       const std::vector<double>& gammas,
                                       const std::vector<int>& ns, Hypothesis hyp) {
    std::vector<CurveRecord> records;
    records.reserve(gammas.size() * ns.size() * 3);
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        const GammaAnalysis& ga = grid.gammas[gi];
        for (std::size_t ni = 0; ni < ns.size(); ++ni) {
            const CurvePoint& pt = grid.points[gi * ns.size() + ni];
            // simulate() emits estimates n-major, gamma-minor.
            const EmpiricalEstimate& est = estimates[ni * gammas.size() + gi];
            CurveRecord emp;
            emp.hypothesis = hyp;
            emp.gamma = gammas[gi];
            emp.n = ns[ni];
            emp.kind = "empirical";
            emp.value = est.p_hat;
            emp.trials = est.trials;
            emp.events = est.events;
            emp.wilson_low = est.wilson_low;
            emp.wilson_high = est.wilson_high;
            emp.low_confidence = est.low_confidence;
            records.push_back(std::move(emp));

            CurveRecord clt;
            clt.hypothesis = hyp;
            clt.gamma = gammas[gi];
            clt.n = ns[ni];
            clt.kind = "clt";
            clt.value = hyp == Hypothesis::h0 ? pt.alpha_clt : pt.beta_clt;
            records.push_back(std::move(clt));

            const auto& ldp_value = hyp == Hypothesis::h0 ? pt.alpha_ldp : pt.beta_ldp;
            if (ldp_value) {
                const auto& rate = hyp == Hypothesis::h0 ? ga.rate0 : ga.rate1;
                CurveRecord ldp;
                ldp.hypothesis = hyp;
                ldp.gamma = gammas[gi];
                ldp.n = ns[ni];
                ldp.kind = "ldp";
                ldp.value = *ldp_value;
                ldp.zeta = hyp == Hypothesis::h0 ? pt.zeta0 : pt.zeta1;
                ldp.rate = rate->rate;
                ldp.tilt = rate->tilt;
                ldp.clamped = hyp == Hypothesis::h0 ? pt.alpha_clamped : pt.beta_clamped;
                records.push_back(std::move(ldp));
            }
        }
    }
    return records;
}

} // namespace

CommandOutcome cmd_curves(const RunConfig& config) {
    validate_run_config(config);
    std::filesystem::create_directories(config.out_dir / "curves");
    write_effective_config(config);
    CommandOutcome outcome;

    const DatasetSplit population = characterization_population(config);
    const int checkpoint = final_checkpoint(config);

    for (std::uint64_t seed : config.seeds) {
        const SavedModel model = load_model_for(config, seed, checkpoint);
        const SeedArtifacts art = build_pools(config, model.params, population);
        const std::vector<double> gammas =
            resolve_gammas(config, art.char0, art.char1, seed, outcome.diagnostics);

        const CurveGrid grid = error_curves(art.char0, art.char1, gammas, config.ns);
        for (const GammaAnalysis& ga : grid.gammas) {
            for (const std::string& note : ga.notes) {
                outcome.diagnostics.push_back("seed " + std::to_string(seed) + ", gamma " +
                                              num(ga.gamma) + ": " + note);
            }
        }
        if (grid.clamped_cells > 0) {
            outcome.diagnostics.push_back("seed " + std::to_string(seed) + ": " +
                                          std::to_string(grid.clamped_cells) +
                                          " refined-tail cells clamped to 1");
        }

        SimulationPlan plan;
        plan.ns = config.ns;
        plan.gammas = gammas;
        plan.trials = config.trials;
        plan.sampling = config.sampling;
        plan.seed = derive_seed(config.sim_seed, MC_STREAM, seed, 0);
        const auto est0 = simulate(art.pool0, plan);
        plan.seed = derive_seed(config.sim_seed, MC_STREAM, seed, 1);
        const auto est1 = simulate(art.pool1, plan);

        std::vector<CurveRecord> records =
            merge_records(grid, est0, gammas, config.ns, Hypothesis::h0);
        const std::vector<CurveRecord> beta_records =
            merge_records(grid, est1, gammas, config.ns, Hypothesis::h1);
        records.insert(records.end(), beta_records.begin(), beta_records.end());

        const auto csv_path =
            config.out_dir / "curves" / ("curves_seed" + std::to_string(seed) + ".csv");
        const auto json_path =
            config.out_dir / "curves" / ("curves_seed" + std::to_string(seed) + ".json");
        write_curves_csv(csv_path, records);
        write_curves_json(json_path, records);
        outcome.files.push_back(csv_path);
        outcome.files.push_back(json_path);
    }
    if (!outcome.diagnostics.empty()) {
        const auto diag_path = config.out_dir / "curves" / "diagnostics.txt";
        auto out = open_out(diag_path);
        for (const std::string& d : outcome.diagnostics) {
            out << d << "\n";
        }
        finish_out(out, diag_path);
        outcome.files.push_back(diag_path);
    }
    return outcome;
}

CommandOutcome cmd_rates(const RunConfig& config) {
    validate_run_config(config);
    std::filesystem::create_directories(config.out_dir);
    write_effective_config(config);
    CommandOutcome outcome;

    const DatasetSplit population = characterization_population(config);
    if (config.seeds.size() < 2) {
        outcome.diagnostics.push_back(
            "only one seed: cross-seed bands degenerate to zero width");
    }

    const auto per_seed_path = config.out_dir / "rates_per_seed.csv";
    auto per_seed = open_out(per_seed_path);
    per_seed << "checkpoint,seed,position,gamma,i0,i1\n";
    const auto bands_path = config.out_dir / "rates_bands.csv";
    auto bands = open_out(bands_path);
    bands << "checkpoint,position,gamma_mean,i0_mean,i0_std,i0_finite,i1_mean,i1_std,i1_finite\n";

    const int grid = config.tradeoff_grid;
    for (int checkpoint : config.checkpoints) {
        // tradeoffs[seed][i]
        std::vector<std::vector<TradeoffPoint>> tradeoffs;
        tradeoffs.reserve(config.seeds.size());
        for (std::uint64_t seed : config.seeds) {
            const SavedModel model = load_model_for(config, seed, checkpoint);
            const SeedArtifacts art = build_pools(config, model.params, population);
            tradeoffs.push_back(rate_tradeoff(art.char0, art.char1, grid));
            for (int i = 0; i < grid; ++i) {
                const TradeoffPoint& pt = tradeoffs.back()[std::size_t(i)];
                per_seed << checkpoint << ',' << seed << ','
                         << num(double(i) / double(grid - 1)) << ',' << num(pt.gamma) << ','
                         << num(pt.rate0) << ',' << num(pt.rate1) << "\n";
            }
        }
        for (int i = 0; i < grid; ++i) {
            double gamma_sum = 0.0;
            std::array<std::vector<double>, 2> finite_rates;
            for (const auto& tr : tradeoffs) {
                const TradeoffPoint& pt = tr[std::size_t(i)];
                gamma_sum += pt.gamma;
                if (std::isfinite(pt.rate0)) {
                    finite_rates[0].push_back(pt.rate0);
                }
                if (std::isfinite(pt.rate1)) {
                    finite_rates[1].push_back(pt.rate1);
                }
            }
            bands << checkpoint << ',' << num(double(i) / double(grid - 1)) << ','
                  << num(gamma_sum / double(tradeoffs.size()));
            for (const auto& rates : finite_rates) {
                double mean = std::numeric_limits<double>::infinity();
                double sd = 0.0;
                if (!rates.empty()) {
                    mean = 0.0;
                    for (double r : rates) {
                        mean += r;
                    }
                    mean /= double(rates.size());
                    if (rates.size() > 1) {
                        double ss = 0.0;
                        for (double r : rates) {
                            ss += (r - mean) * (r - mean);
                        }
                        sd = std::sqrt(ss / double(rates.size() - 1));
                    }
                }
                bands << ',' << num(mean) << ',' << num(sd) << ',' << rates.size();
            }
            bands << "\n";
        }
    }
    finish_out(per_seed, per_seed_path);
    finish_out(bands, bands_path);
    outcome.files.push_back(per_seed_path);
    outcome.files.push_back(bands_path);
    return outcome;
}

CommandOutcome cmd_simulate(const RunConfig& config) {
    validate_run_config(config);
    std::filesystem::create_directories(config.out_dir / "histograms");
    write_effective_config(config);
    CommandOutcome outcome;

    const DatasetSplit population = characterization_population(config);
    const int checkpoint = final_checkpoint(config);

    for (std::uint64_t seed : config.seeds) {
        const SavedModel model = load_model_for(config, seed, checkpoint);
        const SeedArtifacts art = build_pools(config, model.params, population);
        const std::vector<double> gammas =
            resolve_gammas(config, art.char0, art.char1, seed, outcome.diagnostics);

        SimulationPlan plan;
        plan.ns = config.ns;
        plan.gammas = gammas;
        plan.trials = config.trials;
        plan.sampling = config.sampling;

        std::vector<CurveRecord> records;
        for (const ScorePool* pool : {&art.pool0, &art.pool1}) {
            plan.seed = derive_seed(config.sim_seed, MC_STREAM, seed,
                                    std::uint64_t(index(pool->hypothesis)));
            for (const EmpiricalEstimate& est : simulate(*pool, plan)) {
                CurveRecord r;
                r.hypothesis = est.hypothesis;
                r.gamma = est.gamma;
                r.n = est.n;
                r.kind = "empirical";
                r.value = est.p_hat;
                r.trials = est.trials;
                r.events = est.events;
                r.wilson_low = est.wilson_low;
                r.wilson_high = est.wilson_high;
                r.low_confidence = est.low_confidence;
                records.push_back(std::move(r));
            }
        }
        const auto emp_path =
            config.out_dir / ("empirical_seed" + std::to_string(seed) + ".csv");
        write_curves_csv(emp_path, records);
        outcome.files.push_back(emp_path);

        for (const ScorePool* pool : {&art.pool0, &art.pool1}) {
            for (int n : config.histogram_ns) {
                const std::uint64_t hseed =
                    derive_seed(config.sim_seed, HISTO_STREAM, seed,
                                (std::uint64_t(index(pool->hypothesis)) << 32) | std::uint64_t(n));
                const Histogram h =
                    statistic_histogram(*pool, n, config.histogram_trials, hseed);
                const auto hist_path =
                    config.out_dir / "histograms" /
                    ("hist_" + std::string(name(pool->hypothesis)) + "_seed" +
                     std::to_string(seed) + "_n" + std::to_string(n) + ".csv");
                auto out = open_out(hist_path);
                out << "# seed=" << seed << " hypothesis=" << name(pool->hypothesis)
                    << " n=" << n << " trials=" << h.trials << " clt_mean=" << num(h.clt_mean)
                    << " clt_variance=" << num(h.clt_variance) << "\n";
                out << "bin_low,bin_high,count\n";
                for (std::size_t b = 0; b < h.counts.size(); ++b) {
                    out << num(h.edges[b]) << ',' << num(h.edges[b + 1]) << ',' << h.counts[b]
                        << "\n";
                }
                finish_out(out, hist_path);
                outcome.files.push_back(hist_path);
            }
        }
    }
    return outcome;
}

} // namespace d3f
