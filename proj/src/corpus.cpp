#include "scse/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "scse/errors.hpp"

namespace scse {

std::vector<std::string> load_corpus_lines(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw InputError("cannot open corpus file: " + path);
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        lines.push_back(line);
    }
    if (lines.empty()) {
        throw InputError("corpus file has no sentences: " + path);
    }
    return lines;
}

namespace {

constexpr std::array<const char*, 8> kStopwords = {"the", "a",  "of", "to",
                                                   "in",  "on", "is", "and"};

constexpr std::array<std::array<const char*, 3>, 10> kTopicWords = {{
    {"tide", "reef", "wave"},
    {"pine", "moss", "fern"},
    {"chord", "melody", "rhythm"},
    {"oven", "spice", "skillet"},
    {"summit", "ridge", "glacier"},
    {"subway", "plaza", "skyline"},
    {"dune", "cactus", "mirage"},
    {"frost", "sleet", "blizzard"},
    {"tulip", "hedge", "trellis"},
    {"pier", "mast", "buoy"},
}};

constexpr std::array<const char*, 40> kUniqueWords = {
    "gleaming", "rusty",  "ancient", "quiet",  "crooked", "vivid",   "hollow",  "brisk",
    "mellow",   "stark",  "dusty",   "nimble", "solemn",  "vast",    "tattered", "sleek",
    "rugged",   "faint",  "sturdy",  "pale",   "amber",   "crisp",   "dim",     "eager",
    "fierce",   "gentle", "humble",  "jagged", "keen",    "lively",  "murky",   "noble",
    "ornate",   "placid", "quaint",  "radiant", "serene", "timid",   "upright", "wry"};

constexpr std::array<const char*, 100> kFillers = {
    "fox",     "lamp",    "violin",  "kettle",  "anchor",   "basket",  "candle",  "drum",
    "easel",   "falcon",  "goblet",  "hammer",  "ladder",   "magnet",  "needle",  "otter",
    "pencil",  "quill",   "rocket",  "saddle",  "umbrella", "vase",    "wagon",   "yarn",
    "zipper",  "acorn",   "badger",  "compass", "donkey",   "envelope", "ferret", "glove",
    "helmet",  "ingot",   "jigsaw",  "kayak",   "lantern",  "mirror",  "nutmeg",  "oboe",
    "parrot",  "quartz",  "rabbit",  "sponge",  "trumpet",  "urchin",  "walnut",  "yacht",
    "zebra",   "apron",   "beacon",  "cabinet", "dagger",   "emerald", "fiddle",  "garnet",
    "hamster", "icicle",  "jewel",   "kimono",  "lobster",  "marble",  "nickel",  "olive",
    "pebble",  "quiver",  "raven",   "satchel", "teapot",   "viper",   "whistle", "cricket",
    "dolphin", "engine",  "flute",   "goose",   "hawk",     "iguana",  "jackal",  "koala",
    "lemur",   "mole",    "newt",    "osprey",  "pony",     "quokka",  "rooster", "salmon",
    "toad",    "urn",     "vulture", "weasel",  "yak",      "antelope", "bison",  "camel",
    "heron",   "ibex",    "jay",     "kestrel"};

struct Template {
    int topic = 0;
    bool type_b = false;
    std::array<std::string, 4> stops;
    std::array<std::string, 3> topics;
    std::array<std::string, 2> uniques;
};

std::string realize(const Template& t, const std::string& filler) {
    // fixed interleave: s0 t0 u0 s1 t1 FILLER s2 t2 u1 s3
    return t.stops[0] + " " + t.topics[0] + " " + t.uniques[0] + " " + t.stops[1] + " " +
           t.topics[1] + " " + filler + " " + t.stops[2] + " " + t.topics[2] + " " +
           t.uniques[1] + " " + t.stops[3];
}

double jittered(double base, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    return std::round((base + jitter(rng)) * 100.0) / 100.0;
}

}  // namespace

SyntheticData generate_synthetic(const GeneratorConfig& cfg) {
    if (cfg.topics < 2 || cfg.topics % 2 != 0 ||
        cfg.topics > static_cast<int>(kTopicWords.size())) {
        throw std::invalid_argument("generate_synthetic: topics must be even and in [2, 10]");
    }
    if (cfg.fillers < 4 || cfg.fillers > static_cast<int>(kFillers.size())) {
        throw std::invalid_argument("generate_synthetic: fillers must be in [4, 100]");
    }
    if (cfg.holdout_fillers < 2 || cfg.holdout_fillers >= cfg.fillers) {
        throw std::invalid_argument(
            "generate_synthetic: holdout_fillers must be in [2, fillers)");
    }
    if (cfg.pairs_per_tier < 1) {
        throw std::invalid_argument("generate_synthetic: pairs_per_tier must be >= 1");
    }

    const int half = cfg.topics / 2;

    // Function-word sets. Sibling templates of the first topic half share
    // no function words; siblings of the second half share exactly one.
    // Type-a sets of the two halves share three. Any same-set pair shares
    // four. Combined with the topic/filler relations below, every emitted
    // pair overlaps in exactly four surface tokens.
    const std::array<std::string, 4> stops_a1 = {"the", "a", "of", "to"};
    const std::array<std::string, 4> stops_a2 = {"the", "a", "of", "in"};
    const std::array<std::string, 4> stops_b = {"in", "on", "is", "and"};

    std::vector<Template> templates;  // index = 2 * topic + (type_b ? 1 : 0)
    for (int t = 0; t < cfg.topics; ++t) {
        for (int type = 0; type < 2; ++type) {
            Template tpl;
            tpl.topic = t;
            tpl.type_b = type == 1;
            tpl.stops = type == 1 ? stops_b : (t < half ? stops_a1 : stops_a2);
            for (int w = 0; w < 3; ++w) {
                tpl.topics[w] = kTopicWords[t][w];
            }
            tpl.uniques[0] = kUniqueWords[4 * t + 2 * type];
            tpl.uniques[1] = kUniqueWords[4 * t + 2 * type + 1];
            templates.push_back(tpl);
        }
    }

    std::mt19937_64 rng(cfg.seed);

    // held-out fillers never appear in a training sentence
    std::vector<int> filler_idx(cfg.fillers);
    std::iota(filler_idx.begin(), filler_idx.end(), 0);
    std::shuffle(filler_idx.begin(), filler_idx.end(), rng);
    std::vector<int> holdout(filler_idx.begin(), filler_idx.begin() + cfg.holdout_fillers);
    std::vector<int> training(filler_idx.begin() + cfg.holdout_fillers, filler_idx.end());
    std::sort(holdout.begin(), holdout.end());
    std::sort(training.begin(), training.end());

    SyntheticData data;
    for (const Template& tpl : templates) {
        for (int f : training) {
            data.corpus.push_back(realize(tpl, kFillers[f]));
        }
    }
    std::shuffle(data.corpus.begin(), data.corpus.end(), rng);

    auto tpl_at = [&](int topic, bool type_b) -> const Template& {
        return templates[static_cast<std::size_t>(2 * topic + (type_b ? 1 : 0))];
    };

    // tier 1, gold 4.2: sibling templates, same filler (first topic half)
    std::vector<RawStsPair> tier1;
    for (int t = 0; t < half; ++t) {
        for (int f : holdout) {
            tier1.push_back({realize(tpl_at(t, false), kFillers[f]),
                             realize(tpl_at(t, true), kFillers[f]), 4.2});
        }
    }

    // tier 2, gold 3.0: sibling templates, different fillers (second half)
    std::vector<RawStsPair> tier2;
    for (int t = half; t < cfg.topics; ++t) {
        for (int f1 : holdout) {
            for (int f2 : holdout) {
                if (f1 == f2) {
                    continue;
                }
                tier2.push_back({realize(tpl_at(t, false), kFillers[f1]),
                                 realize(tpl_at(t, true), kFillers[f2]), 3.0});
            }
        }
    }

    // tier 3, gold 2.0: cross-topic type-a templates from different halves,
    // same filler
    std::vector<RawStsPair> tier3;
    for (int t1 = 0; t1 < half; ++t1) {
        for (int t2 = half; t2 < cfg.topics; ++t2) {
            for (int f : holdout) {
                tier3.push_back({realize(tpl_at(t1, false), kFillers[f]),
                                 realize(tpl_at(t2, false), kFillers[f]), 2.0});
            }
        }
    }

    // tier 4, gold 0.8: cross-topic templates with identical function-word
    // sets, different fillers
    std::vector<RawStsPair> tier4;
    auto add_tier4 = [&](int t1, int t2, bool type_b) {
        for (int f1 : holdout) {
            for (int f2 : holdout) {
                if (f1 == f2) {
                    continue;
                }
                tier4.push_back({realize(tpl_at(t1, type_b), kFillers[f1]),
                                 realize(tpl_at(t2, type_b), kFillers[f2]), 0.8});
            }
        }
    };
    for (int t1 = 0; t1 < cfg.topics; ++t1) {
        for (int t2 = t1 + 1; t2 < cfg.topics; ++t2) {
            add_tier4(t1, t2, true);  // type-b sets are identical everywhere
            const bool same_half = (t1 < half) == (t2 < half);
            if (same_half) {
                add_tier4(t1, t2, false);
            }
        }
    }

    for (auto* tier : {&tier1, &tier2, &tier3, &tier4}) {
        if (static_cast<int>(tier->size()) < cfg.pairs_per_tier) {
            throw std::invalid_argument(
                "generate_synthetic: pairs_per_tier exceeds tier capacity");
        }
        std::shuffle(tier->begin(), tier->end(), rng);
        for (int i = 0; i < cfg.pairs_per_tier; ++i) {
            RawStsPair pair = (*tier)[static_cast<std::size_t>(i)];
            pair.gold = jittered(pair.gold, rng);
            data.sts.push_back(std::move(pair));
        }
    }
    std::shuffle(data.sts.begin(), data.sts.end(), rng);
    return data;
}

}  // namespace scse
