#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scse/buffer.hpp"
#include "scse/encoder.hpp"
#include "scse/loss.hpp"

namespace scse {

enum class SmoothingMode { none, knn, kmeans, both };

SmoothingMode parse_mode(const std::string& name);
std::string mode_name(SmoothingMode mode);

struct Dims {
    int vocab = 500;
    int embed = 32;
    int hidden = 64;
    int out = 32;
};

struct TrainConfig {
    std::size_t buffer_size = 256;
    std::size_t knn_k = 16;
    std::size_t kmeans_k = 64;
    std::size_t kmeans_iters = 20;
    double tau = 0.05;
    double beta = 2.0;
    double gamma = 0.5;
    AlphaSchedule alpha;  // t_max is wired to `steps` when the run starts
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    double dropout = 0.1;
    std::size_t steps = 500;
    std::uint64_t seed = 1;
    SmoothingMode mode = SmoothingMode::knn;
    Dims dims;

    void validate() const;
};

// Adam with the standard defaults and bias correction.
inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

struct AdamMoments {
    EncoderParams m;
    EncoderParams v;
};

/// One Adam step; `step` is 1-based for bias correction.
void adam_update(EncoderParams& params, const EncoderParams& grads, AdamMoments& moments,
                 double lr, std::size_t step);

struct StepMetrics {
    std::size_t step = 0;  // the 0-based index this step ran at
    double instance_loss = 0.0;
    double smoothing_loss = 0.0;
    double alpha = 0.0;
    double total = 0.0;
    std::size_t buffer_fill = 0;
};

struct TrainState {
    EncoderParams params;
    AdamMoments moments;
    std::size_t step = 0;
    MemoryBuffer buffer;
    std::mt19937_64 rng;
};

TrainState init_train_state(const TrainConfig& cfg);

/// One training step: two-view encoding, retrieval from the pre-step
/// buffer, smoothing, combined loss, backprop, Adam, buffer push.
StepMetrics train_step(TrainState& state, const std::vector<Sentence>& batch,
                       const TrainConfig& cfg);

struct TrainResult {
    EncoderParams params;
    std::vector<StepMetrics> metrics;
};

/// Runs cfg.steps steps over the corpus, reshuffling each epoch with a
/// seed derived from (cfg.seed, epoch). Single-threaded and bitwise
/// reproducible for identical inputs.
TrainResult train_run(const TrainConfig& cfg, const std::vector<Sentence>& corpus);

}  // namespace scse
