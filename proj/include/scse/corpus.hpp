#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scse/evaluation.hpp"

namespace scse {

/// One sentence per line; blank lines skipped.
std::vector<std::string> load_corpus_lines(const std::string& path);

/// Synthetic training corpus plus a held-out similarity set, built from
/// slot templates with controlled lexical overlap:
///   - topics, each realized by two sibling templates sharing the topic
///     words but nothing else;
///   - a shared pool of slot fillers; a seeded subset is held out of
///     training entirely and used only for the similarity pairs;
///   - function-word sets arranged so every emitted pair shares exactly
///     the same number of surface tokens regardless of its gold tier.
/// Gold scores encode the construction relation (sibling-template /
/// shared-filler / unrelated) with a small seeded jitter.
struct GeneratorConfig {
    int topics = 10;          // templates = 2 * topics
    int fillers = 100;
    int holdout_fillers = 10;
    int pairs_per_tier = 50;
    std::uint64_t seed = 1;
};

struct SyntheticData {
    std::vector<std::string> corpus;  // training sentences, shuffled
    std::vector<RawStsPair> sts;      // held-out scored pairs, shuffled
};

SyntheticData generate_synthetic(const GeneratorConfig& cfg);

}  // namespace scse
