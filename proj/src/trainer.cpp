#include "scse/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "scse/retrieval.hpp"
#include "scse/smoothing.hpp"

namespace scse {

SmoothingMode parse_mode(const std::string& name) {
    if (name == "none") return SmoothingMode::none;
    if (name == "knn") return SmoothingMode::knn;
    if (name == "kmeans") return SmoothingMode::kmeans;
    if (name == "both") return SmoothingMode::both;
    throw std::invalid_argument("unknown smoothing mode: " + name);
}

std::string mode_name(SmoothingMode mode) {
    switch (mode) {
        case SmoothingMode::none: return "none";
        case SmoothingMode::knn: return "knn";
        case SmoothingMode::kmeans: return "kmeans";
        case SmoothingMode::both: return "both";
    }
    return "?";
}

void TrainConfig::validate() const {
    if (buffer_size < 1) throw std::invalid_argument("config: buffer_size must be >= 1");
    if (kmeans_k < 1) throw std::invalid_argument("config: kmeans_k must be >= 1");
    if (kmeans_iters < 1) throw std::invalid_argument("config: kmeans_iters must be >= 1");
    if (!(tau > 0.0)) throw std::invalid_argument("config: tau must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("config: beta must be positive");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("config: gamma must be in [0, 1]");
    if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
    if (batch_size > buffer_size) throw std::invalid_argument("config: batch_size exceeds buffer_size");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("config: learning_rate must be positive");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("config: dropout must be in [0, 1)");
    if (alpha.alpha_const < 0.0 || alpha.alpha_start < 0.0 || alpha.alpha_end < 0.0) {
        throw std::invalid_argument("config: alpha values must be >= 0");
    }
    if (dims.vocab < 2 || dims.embed < 2 || dims.hidden < 2 || dims.out < 2) {
        throw std::invalid_argument("config: dims must be >= 2");
    }
}

void adam_update(EncoderParams& params, const EncoderParams& grads, AdamMoments& moments,
                 double lr, std::size_t step) {
    if (step < 1) {
        throw std::invalid_argument("adam_update: step must be >= 1");
    }
    auto pt = tensors(params);
    auto gt = tensors(grads);
    auto mt = tensors(moments.m);
    auto vt = tensors(moments.v);
    const double corr1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
    const double corr2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
    for (std::size_t t = 0; t < pt.size(); ++t) {
        Vec& p = *pt[t];
        const Vec& g = *gt[t];
        Vec& m = *mt[t];
        Vec& v = *vt[t];
        if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
            throw std::invalid_argument("adam_update: shape mismatch");
        }
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = kAdamBeta1 * m[i] + (1.0 - kAdamBeta1) * g[i];
            v[i] = kAdamBeta2 * v[i] + (1.0 - kAdamBeta2) * g[i] * g[i];
            const double mhat = m[i] / corr1;
            const double vhat = v[i] / corr2;
            p[i] -= lr * mhat / (std::sqrt(vhat) + kAdamEps);
        }
    }
}

namespace {

std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9E3779B97F4A7C15ull * (b + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

}  // namespace

TrainState init_train_state(const TrainConfig& cfg) {
    cfg.validate();
    TrainState state{
        init_params(cfg.seed, cfg.dims.vocab, cfg.dims.embed, cfg.dims.hidden, cfg.dims.out),
        AdamMoments{},
        0,
        MemoryBuffer(cfg.buffer_size, static_cast<std::size_t>(cfg.dims.out)),
        std::mt19937_64(mix64(cfg.seed, 0x7261696e)),
    };
    state.moments.m = zeros_like(state.params);
    state.moments.v = zeros_like(state.params);
    return state;
}

StepMetrics train_step(TrainState& state, const std::vector<Sentence>& batch,
                       const TrainConfig& cfg) {
    const std::size_t n = cfg.batch_size;
    if (batch.size() != n) {
        throw std::invalid_argument("train_step: batch size mismatch");
    }

    // (1) two dropout views per sentence
    std::vector<Vec> h(n), h_plus(n);
    std::vector<EncodeCache> cache_h(n), cache_hp(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [va, vb] =
            encode_views(batch[i], state.params, state.rng, cfg.dropout, &cache_h[i], &cache_hp[i]);
        h[i] = std::move(va.h);
        h_plus[i] = std::move(vb.h);
    }

    // (2) retrieval against the buffer as it stood before this step, then
    // smoothing; the current batch is pushed only after the loss
    std::vector<std::vector<Vec>> smooth_groups;
    std::vector<AttentionSmoothCache> knn_caches;
    std::vector<AttentionSmoothCache> fallback_caches;  // kmeans warm-up path
    const bool knn_group = cfg.mode == SmoothingMode::knn || cfg.mode == SmoothingMode::both;
    const bool kmeans_group =
        cfg.mode == SmoothingMode::kmeans || cfg.mode == SmoothingMode::both;
    const bool kmeans_warmup = kmeans_group && state.buffer.empty();
    if (knn_group) {
        knn_caches.resize(n);
        std::vector<Vec> group(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<Vec> neighbors = knn_retrieve(state.buffer, h_plus[i], cfg.knn_k);
            group[i] = attention_smooth(h_plus[i], neighbors, cfg.beta, &knn_caches[i]).value;
        }
        smooth_groups.push_back(std::move(group));
    }
    if (kmeans_group) {
        std::vector<Vec> group(n);
        if (kmeans_warmup) {
            // no centers exist yet; fall back to the identity aggregation
            // so the loss reduces to the instance form
            fallback_caches.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                group[i] = attention_smooth(h_plus[i], {}, cfg.beta, &fallback_caches[i]).value;
            }
        } else {
            const std::size_t k = std::min(cfg.kmeans_k, state.buffer.size());
            const ClusterModel model = spherical_kmeans(state.buffer, k, cfg.kmeans_iters,
                                                        mix64(cfg.seed, state.step));
            for (std::size_t i = 0; i < n; ++i) {
                group[i] = center_smooth(h_plus[i], assigned_center(model, h_plus[i]),
                                         cfg.gamma).value;
            }
        }
        smooth_groups.push_back(std::move(group));
    }

    // (3) combined objective at the scheduled alpha
    AlphaSchedule schedule = cfg.alpha;
    schedule.t_max = cfg.steps;
    const double alpha = alpha_at(schedule, state.step);
    const CombinedLossResult loss =
        combined_loss_multi(h, h_plus, smooth_groups, cfg.tau, alpha);

    // (4) backprop: loss -> smoothing -> encoder, both views
    EncoderParams grads = zeros_like(state.params);
    for (std::size_t i = 0; i < n; ++i) {
        encode_backward(cache_h[i], state.params, loss.grad_h[i], grads);

        Vec dhp = loss.grad_h_plus[i];
        std::size_t group_idx = 0;
        if (knn_group) {
            const Vec g = attention_smooth_vjp(knn_caches[i], loss.grad_h_smooth[group_idx][i])
                              .wrt_h_plus;
            for (std::size_t t = 0; t < dhp.size(); ++t) {
                dhp[t] += g[t];
            }
            ++group_idx;
        }
        if (kmeans_group) {
            const Vec g =
                kmeans_warmup
                    ? attention_smooth_vjp(fallback_caches[i], loss.grad_h_smooth[group_idx][i])
                          .wrt_h_plus
                    : center_smooth_vjp(h_plus[i], cfg.gamma, loss.grad_h_smooth[group_idx][i])
                          .wrt_h_plus;
            for (std::size_t t = 0; t < dhp.size(); ++t) {
                dhp[t] += g[t];
            }
        }
        encode_backward(cache_hp[i], state.params, dhp, grads);
    }

    // (5) optimizer
    adam_update(state.params, grads, state.moments, cfg.learning_rate, state.step + 1);

    // (6) only now does the step's batch enter the buffer
    state.buffer.push_batch(h_plus);

    StepMetrics metrics;
    metrics.step = state.step;
    metrics.instance_loss = loss.breakdown.instance_loss;
    metrics.smoothing_loss = loss.breakdown.smoothing_loss;
    metrics.alpha = alpha;
    metrics.total = loss.breakdown.total;
    metrics.buffer_fill = state.buffer.size();

    // (7)
    state.step += 1;
    return metrics;
}

TrainResult train_run(const TrainConfig& cfg, const std::vector<Sentence>& corpus) {
    cfg.validate();
    if (corpus.size() < cfg.batch_size) {
        throw std::invalid_argument("train_run: corpus smaller than one batch");
    }
    for (const Sentence& s : corpus) {
        if (s.empty()) {
            throw std::invalid_argument("train_run: empty sentence in corpus");
        }
        for (int t : s) {
            if (t < 0 || t >= cfg.dims.vocab) {
                throw std::invalid_argument("train_run: token id out of vocab range");
            }
        }
    }

    TrainState state = init_train_state(cfg);
    TrainResult result;
    result.metrics.reserve(cfg.steps);

    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t epoch = 0;
    while (state.step < cfg.steps) {
        std::mt19937_64 shuffle_rng(mix64(cfg.seed, 0x65706f63 + epoch));
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        const std::size_t batches = corpus.size() / cfg.batch_size;
        for (std::size_t b = 0; b < batches && state.step < cfg.steps; ++b) {
            std::vector<Sentence> batch;
            batch.reserve(cfg.batch_size);
            for (std::size_t i = 0; i < cfg.batch_size; ++i) {
                batch.push_back(corpus[order[b * cfg.batch_size + i]]);
            }
            result.metrics.push_back(train_step(state, batch, cfg));
        }
        ++epoch;
    }
    result.params = std::move(state.params);
    return result;
}

}  // namespace scse
