#include "scse/evaluation.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "scse/errors.hpp"

namespace scse {

double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("spearman_rho: length mismatch");
    }
    if (xs.size() < 2) {
        throw std::invalid_argument("spearman_rho: need at least two observations");
    }
    const std::vector<double> rx = rankdata(xs);
    const std::vector<double> ry = rankdata(ys);
    const std::size_t n = rx.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        throw std::invalid_argument("spearman_rho: zero rank variance");
    }
    return sxy / std::sqrt(sxx * syy);
}

Vec inference_embedding(const EncoderParams& p, const Sentence& s) {
    return encode(s, p, all_keep_mask(p.d_embed, p.d_hidden)).r;
}

double eval_sts(const EncoderParams& p, const std::vector<StsPair>& pairs) {
    if (pairs.empty()) {
        throw std::invalid_argument("eval_sts: empty pair list");
    }
    std::vector<double> pred, gold;
    pred.reserve(pairs.size());
    gold.reserve(pairs.size());
    for (const StsPair& pair : pairs) {
        const Vec ra = inference_embedding(p, pair.a);
        const Vec rb = inference_embedding(p, pair.b);
        pred.push_back(cosine_sim(ra, rb));
        gold.push_back(pair.gold);
    }
    return spearman_rho(pred, gold);
}

double alignment_score(const EncoderParams& p, const std::vector<StsPair>& positive_pairs) {
    if (positive_pairs.empty()) {
        throw std::invalid_argument("alignment_score: empty pair list");
    }
    double total = 0.0;
    for (const StsPair& pair : positive_pairs) {
        const Vec fa = l2_normalize(inference_embedding(p, pair.a));
        const Vec fb = l2_normalize(inference_embedding(p, pair.b));
        double d2 = 0.0;
        for (std::size_t i = 0; i < fa.size(); ++i) {
            d2 += (fa[i] - fb[i]) * (fa[i] - fb[i]);
        }
        total += d2;
    }
    return total / static_cast<double>(positive_pairs.size());
}

double uniformity_score(const EncoderParams& p, const std::vector<Sentence>& sentences) {
    if (sentences.size() < 2) {
        throw std::invalid_argument("uniformity_score: need at least two sentences");
    }
    std::vector<Vec> f;
    f.reserve(sentences.size());
    for (const Sentence& s : sentences) {
        f.push_back(l2_normalize(inference_embedding(p, s)));
    }
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t j = i + 1; j < f.size(); ++j) {
            double d2 = 0.0;
            for (std::size_t t = 0; t < f[i].size(); ++t) {
                d2 += (f[i][t] - f[j][t]) * (f[i][t] - f[j][t]);
            }
            acc += std::exp(-2.0 * d2);
            ++count;
        }
    }
    return std::log(acc / static_cast<double>(count));
}

SimilarityHistogram similarity_histogram(const EncoderParams& p,
                                         const std::vector<StsPair>& pairs,
                                         const std::vector<double>& edges) {
    if (pairs.empty()) {
        throw std::invalid_argument("similarity_histogram: empty pair list");
    }
    if (edges.size() < 2) {
        throw std::invalid_argument("similarity_histogram: need at least two edges");
    }
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i] > edges[i - 1])) {
            throw std::invalid_argument("similarity_histogram: edges must be strictly increasing");
        }
    }
    SimilarityHistogram hist;
    const std::size_t nb = edges.size() - 1;
    hist.buckets.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        std::ostringstream label;
        label << (b + 1 == nb ? "[" : "[") << edges[b] << "," << edges[b + 1]
              << (b + 1 == nb ? "]" : ")");
        hist.buckets[b].label = label.str();
        hist.buckets[b].lo = edges[b];
        hist.buckets[b].hi = edges[b + 1];
    }
    for (const StsPair& pair : pairs) {
        std::size_t b;
        if (pair.gold < edges.front()) {
            b = 0;
            ++hist.out_of_range;
        } else if (pair.gold > edges.back()) {
            b = nb - 1;
            ++hist.out_of_range;
        } else {
            b = nb - 1;
            for (std::size_t i = 0; i < nb; ++i) {
                if (pair.gold < edges[i + 1]) {
                    b = i;
                    break;
                }
            }
        }
        const Vec ra = inference_embedding(p, pair.a);
        const Vec rb = inference_embedding(p, pair.b);
        hist.buckets[b].values.push_back(cosine_sim(ra, rb));
    }
    for (HistogramBucket& bucket : hist.buckets) {
        bucket.count = bucket.values.size();
        if (bucket.count == 0) {
            continue;
        }
        double m = 0.0;
        for (double v : bucket.values) {
            m += v;
        }
        m /= static_cast<double>(bucket.count);
        double var = 0.0;
        for (double v : bucket.values) {
            var += (v - m) * (v - m);
        }
        bucket.mean = m;
        bucket.variance = var / static_cast<double>(bucket.count);
    }
    return hist;
}

std::vector<RawStsPair> load_sts_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw InputError("cannot open sts file: " + path);
    }
    std::vector<RawStsPair> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        const std::size_t t3 = t2 == std::string::npos ? std::string::npos : line.find('\t', t2 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos || t3 != std::string::npos) {
            throw InputError("sts file " + path + " line " + std::to_string(lineno) +
                             ": expected 3 tab-separated fields");
        }
        RawStsPair pair;
        pair.a = line.substr(0, t1);
        pair.b = line.substr(t1 + 1, t2 - t1 - 1);
        const std::string gold_str = line.substr(t2 + 1);
        try {
            std::size_t used = 0;
            pair.gold = std::stod(gold_str, &used);
            if (used != gold_str.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw InputError("sts file " + path + " line " + std::to_string(lineno) +
                             ": bad gold score '" + gold_str + "'");
        }
        if (pair.a.empty() || pair.b.empty()) {
            throw InputError("sts file " + path + " line " + std::to_string(lineno) +
                             ": empty sentence field");
        }
        out.push_back(std::move(pair));
    }
    if (out.empty()) {
        throw InputError("sts file " + path + ": no pairs");
    }
    return out;
}

std::vector<StsPair> to_sts_pairs(const Vocabulary& vocab, const std::vector<RawStsPair>& raw) {
    std::vector<StsPair> out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        StsPair pair;
        pair.a = to_ids(vocab, raw[i].a);
        pair.b = to_ids(vocab, raw[i].b);
        pair.gold = raw[i].gold;
        if (pair.a.empty() || pair.b.empty()) {
            throw InputError("sts pair " + std::to_string(i + 1) +
                             ": sentence tokenizes to nothing");
        }
        out.push_back(std::move(pair));
    }
    return out;
}

}  // namespace scse
