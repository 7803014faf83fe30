#include "d3f/mlp.hpp"
#include "d3f/characterize.hpp"
#include "d3f/errors.hpp"
#include "d3f/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

namespace d3f {

namespace {

constexpr std::uint64_t INIT_STREAM = 0x696e6974ULL;    // "init"
constexpr std::uint64_t SHUFFLE_STREAM = 0x73686066ULL; // shuffle

double stable_sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z), overflow-free for any z.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

void check_pixels(std::span<const float, MLP_INPUT> pixels) {
    for (float p : pixels) {
        if (!std::isfinite(p)) {
            throw NumericError("forward: non-finite pixel value");
        }
    }
}

struct Activations {
    std::array<double, MLP_HIDDEN> pre{};    // a_j before ReLU
    std::array<double, MLP_HIDDEN> hidden{}; // max(a_j, 0)
    double logit = 0.0;
};

Activations run_forward(const MlpParameters& params, std::span<const float, MLP_INPUT> pixels) {
    Activations act;
    for (std::size_t j = 0; j < MLP_HIDDEN; ++j) {
        const double* w = params.hidden_weights.data() + j * MLP_INPUT;
        double a = params.hidden_bias[j];
        for (std::size_t k = 0; k < MLP_INPUT; ++k) {
            a += w[k] * double(pixels[k]);
        }
        act.pre[j] = a;
        act.hidden[j] = a > 0.0 ? a : 0.0;
    }
    double z = params.output_bias;
    for (std::size_t j = 0; j < MLP_HIDDEN; ++j) {
        z += params.output_weights[j] * act.hidden[j];
    }
    act.logit = z;
    return act;
}

std::array<double, 2> class_weights_for(const DatasetSplit& data, const TrainingConfig& config) {
    if (!config.reweight_classes) {
        return {1.0, 1.0};
    }
    // Inverse class frequency, normalized so the two weights average to 1.
    const double total = double(data.size());
    return {total / (2.0 * double(data.count(Hypothesis::h0))),
            total / (2.0 * double(data.count(Hypothesis::h1)))};
}

void validate_config(const TrainingConfig& c) {
    if (c.epochs < 0) {
        throw ConfigError("training: epochs must be >= 0");
    }
    if (c.batch_size < 1) {
        throw ConfigError("training: batch_size must be >= 1");
    }
    if (!(c.learning_rate > 0.0)) {
        throw ConfigError("training: learning_rate must be > 0");
    }
    if (!(c.adam_beta1 > 0.0 && c.adam_beta1 < 1.0) ||
        !(c.adam_beta2 > 0.0 && c.adam_beta2 < 1.0)) {
        throw ConfigError("training: adam betas must lie in (0, 1)");
    }
    if (!(c.adam_epsilon > 0.0)) {
        throw ConfigError("training: adam_epsilon must be > 0");
    }
}

} // namespace

MlpParameters initialize_mlp(std::uint64_t seed) {
    MlpParameters params;
    params.seed = seed;
    std::mt19937_64 engine(derive_seed(seed, INIT_STREAM));
    const double hidden_bound = std::sqrt(6.0 / double(MLP_INPUT + MLP_HIDDEN));
    const double output_bound = std::sqrt(6.0 / double(MLP_HIDDEN + 1));
    std::uniform_real_distribution<double> hidden_u(-hidden_bound, hidden_bound);
    std::uniform_real_distribution<double> output_u(-output_bound, output_bound);
    for (auto& w : params.hidden_weights) {
        w = hidden_u(engine);
    }
    for (auto& w : params.output_weights) {
        w = output_u(engine);
    }
    // Biases start at zero; only the weights are randomized.
    return params;
}

ForwardResult forward(const MlpParameters& params, std::span<const float, MLP_INPUT> pixels) {
    check_pixels(pixels);
    const Activations act = run_forward(params, pixels);
    return {act.logit, stable_sigmoid(act.logit)};
}

double elementwise_score(const MlpParameters& params, std::span<const float, MLP_INPUT> pixels) {
    check_pixels(pixels);
    return run_forward(params, pixels).logit;
}

double bce_loss_and_gradient(const MlpParameters& params, const DatasetSplit& data,
                             std::span<const std::size_t> batch,
                             const std::array<double, 2>& class_weights, MlpGradients& grad) {
    if (batch.empty()) {
        throw DomainError("gradient: empty batch");
    }
    grad = MlpGradients{};
    double loss = 0.0;
    for (std::size_t idx : batch) {
        const LabeledImage& img = data.images.at(idx);
        const Activations act = run_forward(params, img.pixels);
        const double y = img.hypothesis == Hypothesis::h1 ? 1.0 : 0.0;
        const double w = class_weights[std::size_t(index(img.hypothesis))];
        loss += w * (softplus(act.logit) - y * act.logit);
        const double dz = w * (stable_sigmoid(act.logit) - y);
        grad.output_bias += dz;
        for (std::size_t j = 0; j < MLP_HIDDEN; ++j) {
            grad.output_weights[j] += dz * act.hidden[j];
            if (act.pre[j] > 0.0) {
                const double da = dz * params.output_weights[j];
                grad.hidden_bias[j] += da;
                double* gw = grad.hidden_weights.data() + j * MLP_INPUT;
                const float* x = img.pixels.data();
                for (std::size_t k = 0; k < MLP_INPUT; ++k) {
                    gw[k] += da * double(x[k]);
                }
            }
        }
    }
    const double inv = 1.0 / double(batch.size());
    loss *= inv;
    for (auto& g : grad.hidden_weights) {
        g *= inv;
    }
    for (auto& g : grad.hidden_bias) {
        g *= inv;
    }
    for (auto& g : grad.output_weights) {
        g *= inv;
    }
    grad.output_bias *= inv;
    return loss;
}

double bce_loss(const MlpParameters& params, const DatasetSplit& data,
                std::span<const std::size_t> batch, const std::array<double, 2>& class_weights) {
    if (batch.empty()) {
        throw DomainError("loss: empty batch");
    }
    double loss = 0.0;
    for (std::size_t idx : batch) {
        const LabeledImage& img = data.images.at(idx);
        const Activations act = run_forward(params, img.pixels);
        const double y = img.hypothesis == Hypothesis::h1 ? 1.0 : 0.0;
        const double w = class_weights[std::size_t(index(img.hypothesis))];
        loss += w * (softplus(act.logit) - y * act.logit);
    }
    return loss / double(batch.size());
}

MlpParameters train(const DatasetSplit& data, const TrainingConfig& config,
                    const EpochCallback& on_epoch) {
    validate_config(config);
    if (data.size() == 0 || data.count(Hypothesis::h0) == 0 || data.count(Hypothesis::h1) == 0) {
        throw TrainingSetupError("train: need samples under both hypotheses (h0 " +
                                 std::to_string(data.count(Hypothesis::h0)) + ", h1 " +
                                 std::to_string(data.count(Hypothesis::h1)) + ")");
    }
    const std::array<double, 2> weights = class_weights_for(data, config);
    MlpParameters params = initialize_mlp(config.seed);

    // Adam state, one slot per parameter. Bias corrections are tracked
    // incrementally (beta^t) instead of calling pow per parameter.
    MlpGradients m{}, v{};
    double beta1_pow = 1.0, beta2_pow = 1.0;
    double bias1 = 1.0, bias2 = 1.0;
    const auto adam_update = [&](double& theta, double& m1, double& m2, double g) {
        m1 = config.adam_beta1 * m1 + (1.0 - config.adam_beta1) * g;
        m2 = config.adam_beta2 * m2 + (1.0 - config.adam_beta2) * g * g;
        const double mhat = m1 / bias1;
        const double vhat = m2 / bias2;
        theta -= config.learning_rate * mhat / (std::sqrt(vhat) + config.adam_epsilon);
    };

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    MlpGradients grad;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::mt19937_64 shuffler(derive_seed(config.seed, SHUFFLE_STREAM, std::uint64_t(epoch)));
        std::shuffle(order.begin(), order.end(), shuffler);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += std::size_t(config.batch_size)) {
            const std::size_t len = std::min(std::size_t(config.batch_size), order.size() - start);
            const std::span<const std::size_t> batch(order.data() + start, len);
            const double batch_loss = bce_loss_and_gradient(params, data, batch, weights, grad);
            if (!std::isfinite(batch_loss)) {
                throw NumericError("train: loss became non-finite at epoch " +
                                   std::to_string(epoch));
            }
            epoch_loss += batch_loss * double(len);
            beta1_pow *= config.adam_beta1;
            beta2_pow *= config.adam_beta2;
            bias1 = 1.0 - beta1_pow;
            bias2 = 1.0 - beta2_pow;
            for (std::size_t i = 0; i < params.hidden_weights.size(); ++i) {
                adam_update(params.hidden_weights[i], m.hidden_weights[i], v.hidden_weights[i],
                            grad.hidden_weights[i]);
            }
            for (std::size_t j = 0; j < MLP_HIDDEN; ++j) {
                adam_update(params.hidden_bias[j], m.hidden_bias[j], v.hidden_bias[j],
                            grad.hidden_bias[j]);
                adam_update(params.output_weights[j], m.output_weights[j], v.output_weights[j],
                            grad.output_weights[j]);
            }
            adam_update(params.output_bias, m.output_bias, v.output_bias, grad.output_bias);
        }
        epoch_loss /= double(order.size());
        if (on_epoch) {
            on_epoch(epoch, params, epoch_loss);
        }
    }
    return params;
}

ScorePool score_pool(const MlpParameters& params, const DatasetSplit& data, Hypothesis h,
                     std::string source) {
    ScorePool pool;
    pool.hypothesis = h;
    pool.seed = params.seed;
    pool.source = std::move(source);
    pool.values.reserve(data.count(h));
    for (const LabeledImage& img : data.images) {
        if (img.hypothesis == h) {
            pool.values.push_back(elementwise_score(params, img.pixels));
        }
    }
    return pool;
}

// ==== persistence ===========================================================

namespace {
constexpr const char* MODEL_FORMAT = "d3f-mlp";
constexpr int MODEL_VERSION = 1;
} // namespace

void save_model(const MlpParameters& params, const TrainingConfig& config,
                const std::filesystem::path& path) {
    nlohmann::json j;
    j["format"] = MODEL_FORMAT;
    j["version"] = MODEL_VERSION;
    j["seed"] = params.seed;
    j["hidden_weights"] = params.hidden_weights;
    j["hidden_bias"] = params.hidden_bias;
    j["output_weights"] = params.output_weights;
    j["output_bias"] = params.output_bias;
    j["training"] = {{"epochs", config.epochs},
                     {"batch_size", config.batch_size},
                     {"learning_rate", config.learning_rate},
                     {"adam_beta1", config.adam_beta1},
                     {"adam_beta2", config.adam_beta2},
                     {"adam_epsilon", config.adam_epsilon},
                     {"seed", config.seed},
                     {"reweight_classes", config.reweight_classes}};
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << j.dump(2) << "\n";
    if (!out) {
        throw IoError("write failure on " + path.string());
    }
}

SavedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("model file " + path.string() + ": " + e.what());
    }
    try {
        if (j.at("format") != MODEL_FORMAT) {
            throw FormatError("model file " + path.string() + ": unknown format tag");
        }
        if (j.at("version") != MODEL_VERSION) {
            throw FormatError("model file " + path.string() + ": unsupported version");
        }
        SavedModel saved;
        saved.params.seed = j.at("seed").get<std::uint64_t>();
        const auto hw = j.at("hidden_weights").get<std::vector<double>>();
        const auto hb = j.at("hidden_bias").get<std::vector<double>>();
        const auto ow = j.at("output_weights").get<std::vector<double>>();
        if (hw.size() != saved.params.hidden_weights.size() ||
            hb.size() != saved.params.hidden_bias.size() ||
            ow.size() != saved.params.output_weights.size()) {
            throw FormatError("model file " + path.string() + ": wrong weight array sizes");
        }
        std::copy(hw.begin(), hw.end(), saved.params.hidden_weights.begin());
        std::copy(hb.begin(), hb.end(), saved.params.hidden_bias.begin());
        std::copy(ow.begin(), ow.end(), saved.params.output_weights.begin());
        saved.params.output_bias = j.at("output_bias").get<double>();
        const auto& t = j.at("training");
        saved.config.epochs = t.at("epochs").get<int>();
        saved.config.batch_size = t.at("batch_size").get<int>();
        saved.config.learning_rate = t.at("learning_rate").get<double>();
        saved.config.adam_beta1 = t.at("adam_beta1").get<double>();
        saved.config.adam_beta2 = t.at("adam_beta2").get<double>();
        saved.config.adam_epsilon = t.at("adam_epsilon").get<double>();
        saved.config.seed = t.at("seed").get<std::uint64_t>();
        saved.config.reweight_classes = t.at("reweight_classes").get<bool>();
        return saved;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("model file " + path.string() + ": " + e.what());
    }
}

} // namespace d3f
