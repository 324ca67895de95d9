#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scse/core_math.hpp"

namespace scse {

/// Token ids; id 0 is reserved for the unknown token.
using Sentence = std::vector<int>;

struct Vocabulary {
    std::vector<std::string> id_to_token;  // [0] == "<unk>"
    std::unordered_map<std::string, int> token_to_id;

    int size() const { return static_cast<int>(id_to_token.size()); }
};

/// Lowercases, strips ASCII punctuation, splits on whitespace.
std::vector<std::string> tokenize(const std::string& line);

/// Top max_size-1 tokens by frequency (ties broken lexicographically),
/// ids contiguous from 1; id 0 is the unknown token.
Vocabulary build_vocab(const std::vector<std::string>& corpus, int max_size);

/// Maps a raw line to token ids; unseen tokens become 0.
Sentence to_ids(const Vocabulary& vocab, const std::string& line);

/// Trainable state: token-embedding table plus a one-hidden-layer projector.
/// Row-major flat storage.
struct EncoderParams {
    int vocab = 0;
    int d_embed = 0;
    int d_hidden = 0;
    int d_out = 0;
    Vec embed;  // vocab x d_embed
    Vec w1;     // d_embed x d_hidden
    Vec b1;     // d_hidden
    Vec w2;     // d_hidden x d_out
    Vec b2;     // d_out
};

/// Seeded uniform init scaled by 1/sqrt(fan_in); biases zero.
/// The same seed yields bitwise-identical parameters.
EncoderParams init_params(std::uint64_t seed, int vocab, int d_embed, int d_hidden, int d_out);

EncoderParams zeros_like(const EncoderParams& p);

/// The five tensors in checkpoint order.
std::array<Vec*, 5> tensors(EncoderParams& p);
std::array<const Vec*, 5> tensors(const EncoderParams& p);

/// Keep flags (1 keep, 0 drop) for the two dropout sites: the pooled
/// vector and the hidden activations. Flags are drawn independently per
/// element with keep probability 1 - drop_rate.
struct DropoutMask {
    Vec keep_pooled;  // d_embed
    Vec keep_hidden;  // d_hidden
    double drop_rate = 0.0;
};

DropoutMask all_keep_mask(int d_embed, int d_hidden);
DropoutMask draw_mask(std::mt19937_64& rng, int d_embed, int d_hidden, double drop_rate);

struct EncodeCache {
    Sentence tokens;
    Vec pooled;  // mean token embedding, pre-mask
    Vec r;       // masked pooled (inference representation when drop_rate == 0)
    Vec z1;      // hidden pre-activation
    Vec a1;      // masked relu(z1)
    DropoutMask mask;
};

struct Encoded {
    Vec r;  // inference representation (pre-projector)
    Vec h;  // projector output, feeds the training losses
};

/// r = mask-scaled mean token embedding; h = relu(r W1 + b1) (masked) W2 + b2.
Encoded encode(const Sentence& s, const EncoderParams& p, const DropoutMask& mask,
               EncodeCache* cache = nullptr);

/// Accumulates d(loss)/d(params) into `grads` given d(loss)/dh.
void encode_backward(const EncodeCache& cache, const EncoderParams& p, const Vec& dh,
                     EncoderParams& grads);

/// Two encodes of the same sentence under independently drawn masks:
/// the positive-pair construction.
std::pair<Encoded, Encoded> encode_views(const Sentence& s, const EncoderParams& p,
                                         std::mt19937_64& rng, double drop_rate,
                                         EncodeCache* cache_a = nullptr,
                                         EncodeCache* cache_b = nullptr);

// --- checkpoint file (versioned binary; layout documented in README) ---

struct Checkpoint {
    EncoderParams params;
    Vocabulary vocab;
};

void save_checkpoint(const std::string& path, const EncoderParams& p, const Vocabulary& vocab);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace scse
