#pragma once

#include "d3f/characterize.hpp"
#include "d3f/dataset.hpp"
#include "d3f/mlp.hpp"
#include "d3f/montecarlo.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace d3f {

// Everything a run needs, with the documented defaults baked in. A JSON config
// file overrides fields by key; CLI flags override on top of that. data_dir
// falls back to the D3F_DATA_DIR environment variable when left empty.
struct RunConfig {
    std::filesystem::path data_dir; // empty: $D3F_DATA_DIR, then "data/mnist"
    std::filesystem::path out_dir = "out";

    TrainingConfig training;                 // .seed is taken from `seeds` per run
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::vector<int> checkpoints{10};        // epoch marks that persist a model

    // Thresholds: explicit absolute values win; otherwise relative positions
    // between the two characterized means are used.
    std::vector<double> gammas;
    std::vector<double> gamma_positions{1.0 / 6, 2.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6};
    std::vector<int> ns{1, 2, 3, 4, 5, 7, 10, 15, 20, 30, 50};

    long trials = 100000;
    SamplingMode sampling = SamplingMode::with_replacement;
    std::uint64_t sim_seed = 1;
    bool exclude_train_from_pools = false; // pools use train+test unless set

    int tradeoff_grid = 101;
    int trajectory_n = 1000;
    long histogram_trials = 10000;
    std::vector<int> histogram_ns{1, 5, 50};
};

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& config, const std::filesystem::path& path);
void validate_run_config(const RunConfig& config);

// Resolve an input file inside data_dir, accepting either the plain name or
// name + ".gz" (IoError naming both candidates when neither exists).
std::filesystem::path resolve_data_file(const std::filesystem::path& dir,
                                        const std::string& base_name);

DatasetSplit load_train_split(const RunConfig& config);
DatasetSplit load_test_split(const RunConfig& config);

// The characterization population: train+test pooled, or test only when
// exclude_train_from_pools is set.
DatasetSplit characterization_population(const RunConfig& config);

std::filesystem::path model_path(const RunConfig& config, std::uint64_t seed, int checkpoint);

struct CommandOutcome {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> diagnostics;
};

// Train one model per seed; persist a parameter file per (seed, checkpoint)
// and an epoch loss log.
CommandOutcome cmd_train(const RunConfig& config);

// Running-mean trajectories of the statistic under both hypotheses.
CommandOutcome cmd_trajectories(const RunConfig& config);

// Score pools and their moment summaries for every seed.
CommandOutcome cmd_characterize(const RunConfig& config);

// Error-probability curves: empirical, CLT, and refined-tail columns in one
// long-form CSV (+ JSON mirror) per seed.
CommandOutcome cmd_curves(const RunConfig& config);

// Rate tradeoff grids per (checkpoint, seed) plus cross-seed mean/std bands.
CommandOutcome cmd_rates(const RunConfig& config);

// Simulation-only artifacts: empirical estimates and aggregate histograms.
CommandOutcome cmd_simulate(const RunConfig& config);

} // namespace d3f
