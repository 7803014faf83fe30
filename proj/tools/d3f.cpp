// Command-line front end: one subcommand per pipeline stage, a JSON config
// file for defaults, and explicit flags overriding individual fields.

#include "d3f/errors.hpp"
#include "d3f/pipeline.hpp"
#include "d3f/validation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct CliOverrides {
    std::string config_file;
    std::string data_dir;
    std::string out_dir;
    std::vector<std::uint64_t> seeds;
    std::vector<int> checkpoints;
    int epochs = 0;
    int batch_size = 0;
    double learning_rate = 0.0;
    bool reweight_classes = true;
    std::vector<double> gammas;
    std::vector<double> gamma_positions;
    std::vector<int> ns;
    long trials = 0;
    std::string sampling;
    std::uint64_t sim_seed = 0;
    bool exclude_train = false;
    int tradeoff_grid = 0;
    int trajectory_n = 0;
    long histogram_trials = 0;
    std::vector<int> histogram_ns;
};

void add_override_options(CLI::App& app, CliOverrides& ov) {
    app.add_option("--config", ov.config_file, "JSON config file with run defaults");
    app.add_option("--data-dir", ov.data_dir,
                   "dataset directory (default: $D3F_DATA_DIR, then data/mnist)");
    app.add_option("--out-dir", ov.out_dir, "output directory (default: out)");
    app.add_option("--seeds", ov.seeds, "training seeds (default: 1 2 3)");
    app.add_option("--checkpoints", ov.checkpoints, "epochs at which models persist");
    app.add_option("--epochs", ov.epochs, "training epochs (default: 10)");
    app.add_option("--batch-size", ov.batch_size, "minibatch size (default: 128)");
    app.add_option("--learning-rate", ov.learning_rate, "Adam learning rate (default: 1e-3)");
    app.add_option("--reweight-classes", ov.reweight_classes,
                   "inverse-frequency class weights in the loss (default: true)");
    app.add_option("--gammas", ov.gammas, "absolute thresholds (default: relative positions)");
    app.add_option("--gamma-positions", ov.gamma_positions,
                   "relative threshold positions in (0,1)");
    app.add_option("--ns", ov.ns, "block lengths for curves and simulation");
    app.add_option("--trials", ov.trials, "simulation trials per (n, gamma) (default: 100000)");
    app.add_option("--sampling", ov.sampling,
                   "with_replacement (default) or without_replacement");
    app.add_option("--sim-seed", ov.sim_seed, "master seed for simulation draws (default: 1)");
    app.add_option("--exclude-train-from-pools", ov.exclude_train,
                   "score pools use the test split only (default: false)");
    app.add_option("--tradeoff-grid", ov.tradeoff_grid,
                   "gamma grid size for rate tradeoffs (default: 101)");
    app.add_option("--trajectory-n", ov.trajectory_n,
                   "trajectory length (default: 1000)");
    app.add_option("--histogram-trials", ov.histogram_trials,
                   "trials per aggregate histogram (default: 10000)");
    app.add_option("--histogram-ns", ov.histogram_ns,
                   "block lengths for aggregate histograms (default: 1 5 50)");
}

d3f::RunConfig build_config(const CLI::App& app, const CliOverrides& ov) {
    d3f::RunConfig cfg;
    if (app.count("--config") > 0) {
        cfg = d3f::load_run_config(ov.config_file);
    }
    if (app.count("--data-dir")) cfg.data_dir = ov.data_dir;
    if (app.count("--out-dir")) cfg.out_dir = ov.out_dir;
    if (app.count("--seeds")) cfg.seeds = ov.seeds;
    if (app.count("--checkpoints")) cfg.checkpoints = ov.checkpoints;
    if (app.count("--epochs")) cfg.training.epochs = ov.epochs;
    if (app.count("--batch-size")) cfg.training.batch_size = ov.batch_size;
    if (app.count("--learning-rate")) cfg.training.learning_rate = ov.learning_rate;
    if (app.count("--reweight-classes")) cfg.training.reweight_classes = ov.reweight_classes;
    if (app.count("--gammas")) cfg.gammas = ov.gammas;
    if (app.count("--gamma-positions")) cfg.gamma_positions = ov.gamma_positions;
    if (app.count("--ns")) cfg.ns = ov.ns;
    if (app.count("--trials")) cfg.trials = ov.trials;
    if (app.count("--sampling")) {
        if (ov.sampling == "with_replacement") {
            cfg.sampling = d3f::SamplingMode::with_replacement;
        } else if (ov.sampling == "without_replacement") {
            cfg.sampling = d3f::SamplingMode::without_replacement;
        } else {
            throw d3f::ConfigError("unknown sampling mode '" + ov.sampling + "'");
        }
    }
    if (app.count("--sim-seed")) cfg.sim_seed = ov.sim_seed;
    if (app.count("--exclude-train-from-pools")) cfg.exclude_train_from_pools = ov.exclude_train;
    if (app.count("--tradeoff-grid")) cfg.tradeoff_grid = ov.tradeoff_grid;
    if (app.count("--trajectory-n")) cfg.trajectory_n = ov.trajectory_n;
    if (app.count("--histogram-trials")) cfg.histogram_trials = ov.histogram_trials;
    if (app.count("--histogram-ns")) cfg.histogram_ns = ov.histogram_ns;
    return cfg;
}

void report(const d3f::CommandOutcome& outcome) {
    for (const auto& path : outcome.files) {
        std::cout << "wrote " << path.string() << "\n";
    }
    for (const auto& note : outcome.diagnostics) {
        std::cout << "note: " << note << "\n";
    }
}

int run_oracle_check() {
    bool all_pass = true;
    for (const d3f::CheckResult& r : d3f::oracle_checks()) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " — " << r.detail << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asymptotic error analysis of a learned binary image detector"};
    app.require_subcommand(1);
    CliOverrides ov;
    add_override_options(app, ov);

    auto* train = app.add_subcommand("train", "train one scorer per seed, persist checkpoints");
    auto* trajectories =
        app.add_subcommand("trajectories", "running-mean trajectories of the statistic");
    auto* characterize =
        app.add_subcommand("characterize", "score pools and moment summaries per seed");
    auto* curves = app.add_subcommand(
        "curves", "empirical / Gaussian-limit / refined-tail error curves per seed");
    auto* rates = app.add_subcommand("rates", "rate tradeoff grids and cross-seed bands");
    auto* simulate =
        app.add_subcommand("simulate", "empirical estimates and aggregate histograms");
    auto* oracle =
        app.add_subcommand("oracle-check", "closed-form validations, one line per check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (oracle->parsed()) {
            return run_oracle_check();
        }
        const d3f::RunConfig cfg = build_config(app, ov);
        if (train->parsed()) {
            report(d3f::cmd_train(cfg));
        } else if (trajectories->parsed()) {
            report(d3f::cmd_trajectories(cfg));
        } else if (characterize->parsed()) {
            report(d3f::cmd_characterize(cfg));
        } else if (curves->parsed()) {
            report(d3f::cmd_curves(cfg));
        } else if (rates->parsed()) {
            report(d3f::cmd_rates(cfg));
        } else if (simulate->parsed()) {
            report(d3f::cmd_simulate(cfg));
        }
    } catch (const d3f::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
