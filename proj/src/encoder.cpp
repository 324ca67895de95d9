#include "scse/encoder.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

#include "scse/errors.hpp"

namespace scse {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    };
    for (unsigned char c : line) {
        if (std::isspace(c)) {
            flush();
        } else if (c < 128 && std::ispunct(c)) {
            // ASCII punctuation is stripped, not treated as a separator
        } else {
            cur.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    flush();
    return out;
}

Vocabulary build_vocab(const std::vector<std::string>& corpus, int max_size) {
    if (corpus.empty()) {
        throw std::invalid_argument("build_vocab: empty corpus");
    }
    if (max_size < 2) {
        throw std::invalid_argument("build_vocab: max_size must be >= 2");
    }
    // std::map keeps ties resolvable lexicographically without a second key
    std::map<std::string, std::int64_t> counts;
    for (const auto& line : corpus) {
        for (const auto& tok : tokenize(line)) {
            ++counts[tok];
        }
    }
    std::vector<std::pair<std::string, std::int64_t>> items(counts.begin(), counts.end());
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    Vocabulary v;
    v.id_to_token.push_back("<unk>");
    v.token_to_id["<unk>"] = 0;
    for (const auto& [tok, cnt] : items) {
        if (v.size() >= max_size) {
            break;
        }
        v.token_to_id[tok] = v.size();
        v.id_to_token.push_back(tok);
    }
    return v;
}

Sentence to_ids(const Vocabulary& vocab, const std::string& line) {
    Sentence s;
    for (const auto& tok : tokenize(line)) {
        auto it = vocab.token_to_id.find(tok);
        s.push_back(it == vocab.token_to_id.end() ? 0 : it->second);
    }
    return s;
}

EncoderParams init_params(std::uint64_t seed, int vocab, int d_embed, int d_hidden, int d_out) {
    if (vocab < 1 || d_embed < 2 || d_hidden < 2 || d_out < 2) {
        throw std::invalid_argument("init_params: dims out of range");
    }
    EncoderParams p;
    p.vocab = vocab;
    p.d_embed = d_embed;
    p.d_hidden = d_hidden;
    p.d_out = d_out;
    p.embed.resize(static_cast<std::size_t>(vocab) * d_embed);
    p.w1.resize(static_cast<std::size_t>(d_embed) * d_hidden);
    p.b1.assign(static_cast<std::size_t>(d_hidden), 0.0);
    p.w2.resize(static_cast<std::size_t>(d_hidden) * d_out);
    p.b2.assign(static_cast<std::size_t>(d_out), 0.0);

    std::mt19937_64 rng(seed);
    auto fill = [&rng](Vec& v, double bound) {
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (double& x : v) {
            x = dist(rng);
        }
    };
    fill(p.embed, 1.0 / std::sqrt(static_cast<double>(d_embed)));
    fill(p.w1, 1.0 / std::sqrt(static_cast<double>(d_embed)));
    fill(p.w2, 1.0 / std::sqrt(static_cast<double>(d_hidden)));
    return p;
}

EncoderParams zeros_like(const EncoderParams& p) {
    EncoderParams z;
    z.vocab = p.vocab;
    z.d_embed = p.d_embed;
    z.d_hidden = p.d_hidden;
    z.d_out = p.d_out;
    z.embed.assign(p.embed.size(), 0.0);
    z.w1.assign(p.w1.size(), 0.0);
    z.b1.assign(p.b1.size(), 0.0);
    z.w2.assign(p.w2.size(), 0.0);
    z.b2.assign(p.b2.size(), 0.0);
    return z;
}

std::array<Vec*, 5> tensors(EncoderParams& p) {
    return {&p.embed, &p.w1, &p.b1, &p.w2, &p.b2};
}

std::array<const Vec*, 5> tensors(const EncoderParams& p) {
    return {&p.embed, &p.w1, &p.b1, &p.w2, &p.b2};
}

DropoutMask all_keep_mask(int d_embed, int d_hidden) {
    DropoutMask m;
    m.keep_pooled.assign(static_cast<std::size_t>(d_embed), 1.0);
    m.keep_hidden.assign(static_cast<std::size_t>(d_hidden), 1.0);
    m.drop_rate = 0.0;
    return m;
}

DropoutMask draw_mask(std::mt19937_64& rng, int d_embed, int d_hidden, double drop_rate) {
    if (!(drop_rate >= 0.0 && drop_rate < 1.0)) {
        throw std::invalid_argument("draw_mask: drop_rate must be in [0, 1)");
    }
    DropoutMask m;
    m.drop_rate = drop_rate;
    std::bernoulli_distribution keep(1.0 - drop_rate);
    m.keep_pooled.resize(static_cast<std::size_t>(d_embed));
    for (double& f : m.keep_pooled) {
        f = keep(rng) ? 1.0 : 0.0;
    }
    m.keep_hidden.resize(static_cast<std::size_t>(d_hidden));
    for (double& f : m.keep_hidden) {
        f = keep(rng) ? 1.0 : 0.0;
    }
    return m;
}

Encoded encode(const Sentence& s, const EncoderParams& p, const DropoutMask& mask,
               EncodeCache* cache) {
    if (s.empty()) {
        throw std::invalid_argument("encode: empty sentence");
    }
    const int de = p.d_embed;
    const int dh = p.d_hidden;
    const int do_ = p.d_out;
    if (static_cast<int>(mask.keep_pooled.size()) != de ||
        static_cast<int>(mask.keep_hidden.size()) != dh) {
        throw std::invalid_argument("encode: mask shape mismatch");
    }

    Vec pooled(de, 0.0);
    for (int t : s) {
        if (t < 0 || t >= p.vocab) {
            throw std::invalid_argument("encode: token id out of range");
        }
        const double* row = &p.embed[static_cast<std::size_t>(t) * de];
        for (int i = 0; i < de; ++i) {
            pooled[i] += row[i];
        }
    }
    const double inv_n = 1.0 / static_cast<double>(s.size());
    for (double& x : pooled) {
        x *= inv_n;
    }

    // inverted dropout: kept units scaled by 1/(1-p)
    const double scale = 1.0 / (1.0 - mask.drop_rate);
    Vec r(de);
    for (int i = 0; i < de; ++i) {
        r[i] = pooled[i] * mask.keep_pooled[i] * scale;
    }

    Vec z1(dh);
    for (int j = 0; j < dh; ++j) {
        double acc = p.b1[j];
        for (int i = 0; i < de; ++i) {
            acc += r[i] * p.w1[static_cast<std::size_t>(i) * dh + j];
        }
        z1[j] = acc;
    }
    Vec a1(dh);
    for (int j = 0; j < dh; ++j) {
        a1[j] = (z1[j] > 0.0 ? z1[j] : 0.0) * mask.keep_hidden[j] * scale;
    }

    Vec h(do_);
    for (int k = 0; k < do_; ++k) {
        double acc = p.b2[k];
        for (int j = 0; j < dh; ++j) {
            acc += a1[j] * p.w2[static_cast<std::size_t>(j) * do_ + k];
        }
        h[k] = acc;
    }

    if (cache != nullptr) {
        cache->tokens = s;
        cache->pooled = pooled;
        cache->r = r;
        cache->z1 = z1;
        cache->a1 = a1;
        cache->mask = mask;
    }
    return Encoded{std::move(r), std::move(h)};
}

void encode_backward(const EncodeCache& cache, const EncoderParams& p, const Vec& dh,
                     EncoderParams& grads) {
    const int de = p.d_embed;
    const int dh_ = p.d_hidden;
    const int do_ = p.d_out;
    if (static_cast<int>(dh.size()) != do_) {
        throw std::invalid_argument("encode_backward: dh shape mismatch");
    }
    const double scale = 1.0 / (1.0 - cache.mask.drop_rate);

    Vec g_a1(dh_, 0.0);
    for (int j = 0; j < dh_; ++j) {
        double acc = 0.0;
        for (int k = 0; k < do_; ++k) {
            const double w = p.w2[static_cast<std::size_t>(j) * do_ + k];
            acc += w * dh[k];
            grads.w2[static_cast<std::size_t>(j) * do_ + k] += cache.a1[j] * dh[k];
        }
        g_a1[j] = acc;
    }
    for (int k = 0; k < do_; ++k) {
        grads.b2[k] += dh[k];
    }

    Vec g_z1(dh_);
    for (int j = 0; j < dh_; ++j) {
        g_z1[j] = cache.z1[j] > 0.0 ? g_a1[j] * cache.mask.keep_hidden[j] * scale : 0.0;
    }

    Vec g_r(de, 0.0);
    for (int i = 0; i < de; ++i) {
        double acc = 0.0;
        for (int j = 0; j < dh_; ++j) {
            acc += p.w1[static_cast<std::size_t>(i) * dh_ + j] * g_z1[j];
            grads.w1[static_cast<std::size_t>(i) * dh_ + j] += cache.r[i] * g_z1[j];
        }
        g_r[i] = acc;
    }
    for (int j = 0; j < dh_; ++j) {
        grads.b1[j] += g_z1[j];
    }

    const double inv_n = 1.0 / static_cast<double>(cache.tokens.size());
    for (int t : cache.tokens) {
        double* row = &grads.embed[static_cast<std::size_t>(t) * de];
        for (int i = 0; i < de; ++i) {
            row[i] += g_r[i] * cache.mask.keep_pooled[i] * scale * inv_n;
        }
    }
}

std::pair<Encoded, Encoded> encode_views(const Sentence& s, const EncoderParams& p,
                                         std::mt19937_64& rng, double drop_rate,
                                         EncodeCache* cache_a, EncodeCache* cache_b) {
    const DropoutMask ma = draw_mask(rng, p.d_embed, p.d_hidden, drop_rate);
    const DropoutMask mb = draw_mask(rng, p.d_embed, p.d_hidden, drop_rate);
    Encoded a = encode(s, p, ma, cache_a);
    Encoded b = encode(s, p, mb, cache_b);
    return {std::move(a), std::move(b)};
}

// --- checkpoint I/O ---

namespace {

constexpr char kMagic[8] = {'S', 'C', 'S', 'E', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ofstream& f, std::uint32_t v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::ifstream& f) {
    std::uint32_t v = 0;
    f.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const EncoderParams& p, const Vocabulary& vocab) {
    if (vocab.size() != p.vocab) {
        throw std::invalid_argument("save_checkpoint: vocab size mismatch");
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw InputError("save_checkpoint: cannot open " + path);
    }
    f.write(kMagic, sizeof(kMagic));
    write_u32(f, kVersion);
    write_u32(f, static_cast<std::uint32_t>(p.vocab));
    write_u32(f, static_cast<std::uint32_t>(p.d_embed));
    write_u32(f, static_cast<std::uint32_t>(p.d_hidden));
    write_u32(f, static_cast<std::uint32_t>(p.d_out));
    for (const auto& tok : vocab.id_to_token) {
        write_u32(f, static_cast<std::uint32_t>(tok.size()));
        f.write(tok.data(), static_cast<std::streamsize>(tok.size()));
    }
    for (const Vec* t : tensors(p)) {
        f.write(reinterpret_cast<const char*>(t->data()),
                static_cast<std::streamsize>(t->size() * sizeof(double)));
    }
    if (!f) {
        throw InputError("save_checkpoint: write failed for " + path);
    }
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("load_checkpoint: cannot open " + path);
    }
    char magic[8];
    f.read(magic, sizeof(magic));
    if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw InputError("load_checkpoint: bad magic in " + path);
    }
    const std::uint32_t version = read_u32(f);
    if (version != kVersion) {
        throw InputError("load_checkpoint: unsupported version in " + path);
    }
    const std::uint32_t vocab = read_u32(f);
    const std::uint32_t de = read_u32(f);
    const std::uint32_t dh = read_u32(f);
    const std::uint32_t d = read_u32(f);
    if (!f || vocab < 1 || de < 2 || dh < 2 || d < 2) {
        throw InputError("load_checkpoint: bad dims header in " + path);
    }

    Checkpoint ck;
    ck.vocab.id_to_token.reserve(vocab);
    for (std::uint32_t i = 0; i < vocab; ++i) {
        const std::uint32_t len = read_u32(f);
        if (!f || len > 4096) {
            throw InputError("load_checkpoint: corrupt vocab entry in " + path);
        }
        std::string tok(len, '\0');
        f.read(tok.data(), len);
        ck.vocab.token_to_id[tok] = static_cast<int>(i);
        ck.vocab.id_to_token.push_back(std::move(tok));
    }

    ck.params.vocab = static_cast<int>(vocab);
    ck.params.d_embed = static_cast<int>(de);
    ck.params.d_hidden = static_cast<int>(dh);
    ck.params.d_out = static_cast<int>(d);
    ck.params.embed.resize(static_cast<std::size_t>(vocab) * de);
    ck.params.w1.resize(static_cast<std::size_t>(de) * dh);
    ck.params.b1.resize(dh);
    ck.params.w2.resize(static_cast<std::size_t>(dh) * d);
    ck.params.b2.resize(d);
    for (Vec* t : tensors(ck.params)) {
        f.read(reinterpret_cast<char*>(t->data()),
               static_cast<std::streamsize>(t->size() * sizeof(double)));
    }
    if (!f) {
        throw InputError("load_checkpoint: truncated tensor data in " + path);
    }
    return ck;
}

}  // namespace scse
