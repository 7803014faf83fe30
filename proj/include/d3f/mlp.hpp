#pragma once

#include "d3f/dataset.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace d3f {

inline constexpr std::size_t MLP_INPUT = idx::PIXELS_PER_IMAGE; // 784
inline constexpr std::size_t MLP_HIDDEN = 8;

// Weights of the scorer: 784 -> 8 ReLU -> 1. The sigmoid of the output logit
// is the class-1 posterior estimate; the logit itself is the elementwise score.
struct MlpParameters {
    std::array<double, MLP_HIDDEN * MLP_INPUT> hidden_weights{}; // [unit][pixel]
    std::array<double, MLP_HIDDEN> hidden_bias{};
    std::array<double, MLP_HIDDEN> output_weights{};
    double output_bias = 0.0;
    std::uint64_t seed = 0; // init/training seed, recorded for provenance
};

struct TrainingConfig {
    int epochs = 10;
    int batch_size = 128;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 1;
    bool reweight_classes = true; // inverse class frequency weights in the loss
};

struct ForwardResult {
    double logit = 0.0;
    double p1 = 0.0; // sigmoid(logit)
};

// Uniform fan-in/fan-out initialization (bound sqrt(6 / (fan_in + fan_out))),
// zero biases. Deterministic in the seed.
MlpParameters initialize_mlp(std::uint64_t seed);

// Full forward pass. Throws NumericError on non-finite pixels.
ForwardResult forward(const MlpParameters& params, std::span<const float, MLP_INPUT> pixels);

// The elementwise decision statistic: the pre-sigmoid logit, which equals
// log p1 - log(1 - p1) identically. No probability is formed, so the value is
// exact even where the sigmoid saturates.
double elementwise_score(const MlpParameters& params, std::span<const float, MLP_INPUT> pixels);

// Gradient container mirroring MlpParameters.
struct MlpGradients {
    std::array<double, MLP_HIDDEN * MLP_INPUT> hidden_weights{};
    std::array<double, MLP_HIDDEN> hidden_bias{};
    std::array<double, MLP_HIDDEN> output_weights{};
    double output_bias = 0.0;
};

// Mean weighted binary cross-entropy over the index batch, evaluated in logit
// form (softplus(z) - y z), plus its gradient. class_weights is indexed by
// Hypothesis. Exposed separately so the gradient can be finite-difference
// checked.
double bce_loss_and_gradient(const MlpParameters& params, const DatasetSplit& data,
                             std::span<const std::size_t> batch,
                             const std::array<double, 2>& class_weights, MlpGradients& grad);

// Loss only (used by the finite-difference check).
double bce_loss(const MlpParameters& params, const DatasetSplit& data,
                std::span<const std::size_t> batch, const std::array<double, 2>& class_weights);

// Adam training with seeded shuffling. Requires both hypotheses present
// (TrainingSetupError). on_epoch, when set, fires after every epoch with the
// 1-based epoch number, the current parameters, and the epoch's mean loss.
// Deterministic: same data + config give bitwise identical parameters.
using EpochCallback = std::function<void(int, const MlpParameters&, double)>;
MlpParameters train(const DatasetSplit& data, const TrainingConfig& config,
                    const EpochCallback& on_epoch = {});

// Versioned JSON persistence; doubles survive the round trip bit for bit.
struct SavedModel {
    MlpParameters params;
    TrainingConfig config;
};
void save_model(const MlpParameters& params, const TrainingConfig& config,
                const std::filesystem::path& path);
SavedModel load_model(const std::filesystem::path& path);

} // namespace d3f
