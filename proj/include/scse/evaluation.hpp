#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scse/core_math.hpp"
#include "scse/encoder.hpp"

namespace scse {

struct StsPair {
    Sentence a;
    Sentence b;
    double gold = 0.0;
};

/// Pearson correlation of average ranks; rejects constant inputs.
double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys);

/// Dropout-free inference representation (the pre-projector pooled vector).
Vec inference_embedding(const EncoderParams& p, const Sentence& s);

/// Spearman correlation between gold scores and cosine similarities of
/// the inference representations.
double eval_sts(const EncoderParams& p, const std::vector<StsPair>& pairs);

/// Mean squared distance between normalized inference representations of
/// positive pairs; lower is better.
double alignment_score(const EncoderParams& p, const std::vector<StsPair>& positive_pairs);

/// log of the mean of exp(-2 ||f(x) - f(y)||^2) over all distinct
/// unordered sentence pairs; always <= 0.
double uniformity_score(const EncoderParams& p, const std::vector<Sentence>& sentences);

struct HistogramBucket {
    std::string label;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    double mean = 0.0;      // meaningful only when count > 0
    double variance = 0.0;  // population variance
    std::vector<double> values;
};

struct SimilarityHistogram {
    std::vector<HistogramBucket> buckets;
    std::size_t out_of_range = 0;  // pairs clamped to the nearest edge bucket
};

/// Groups pairs into gold-score buckets [e_i, e_{i+1}) (last bucket closed)
/// and collects the cosine similarities per bucket. Golds outside the
/// edges are assigned to the nearest edge bucket and counted.
SimilarityHistogram similarity_histogram(const EncoderParams& p,
                                         const std::vector<StsPair>& pairs,
                                         const std::vector<double>& edges);

// --- STS file: one pair per line, sentence_a TAB sentence_b TAB gold ---

struct RawStsPair {
    std::string a;
    std::string b;
    double gold = 0.0;
};

std::vector<RawStsPair> load_sts_file(const std::string& path);

/// Tokenizes raw pairs against a vocabulary; rejects pairs whose text
/// tokenizes to nothing (errors name the 1-based pair index).
std::vector<StsPair> to_sts_pairs(const Vocabulary& vocab, const std::vector<RawStsPair>& raw);

}  // namespace scse
