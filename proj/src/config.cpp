#include "scse/config.hpp"

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "scse/errors.hpp"

namespace scse {

using nlohmann::json;

std::string version_string() {
    return "smoothcse 0.1.0";
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) {
            throw InputError("config: unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) {
        try {
            out = obj.at(key).get<T>();
        } catch (const json::exception&) {
            throw InputError(std::string("config: bad value for '") + key + "'");
        }
    }
}

}  // namespace

TrainConfig train_config_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw InputError("config: top-level document must be an object");
    }
    reject_unknown_keys(doc,
                        {"buffer_size", "knn_k", "kmeans_k", "kmeans_iters", "tau", "beta",
                         "gamma", "alpha", "batch_size", "learning_rate", "dropout", "steps",
                         "seed", "mode", "dims"},
                        "top level");

    TrainConfig cfg;
    read_field(doc, "buffer_size", cfg.buffer_size);
    read_field(doc, "knn_k", cfg.knn_k);
    read_field(doc, "kmeans_k", cfg.kmeans_k);
    read_field(doc, "kmeans_iters", cfg.kmeans_iters);
    read_field(doc, "tau", cfg.tau);
    read_field(doc, "beta", cfg.beta);
    read_field(doc, "gamma", cfg.gamma);
    read_field(doc, "batch_size", cfg.batch_size);
    read_field(doc, "learning_rate", cfg.learning_rate);
    read_field(doc, "dropout", cfg.dropout);
    read_field(doc, "steps", cfg.steps);
    read_field(doc, "seed", cfg.seed);

    if (doc.contains("mode")) {
        std::string mode;
        read_field(doc, "mode", mode);
        try {
            cfg.mode = parse_mode(mode);
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("config: ") + e.what());
        }
    }

    if (doc.contains("alpha")) {
        const json& a = doc.at("alpha");
        if (!a.is_object()) {
            throw InputError("config: 'alpha' must be an object");
        }
        reject_unknown_keys(a, {"mode", "value", "start", "end"}, "'alpha'");
        std::string mode = "constant";
        read_field(a, "mode", mode);
        if (mode == "constant") {
            cfg.alpha.mode = AlphaSchedule::Mode::constant;
        } else if (mode == "cosine") {
            cfg.alpha.mode = AlphaSchedule::Mode::cosine;
        } else {
            throw InputError("config: alpha mode must be 'constant' or 'cosine'");
        }
        read_field(a, "value", cfg.alpha.alpha_const);
        read_field(a, "start", cfg.alpha.alpha_start);
        read_field(a, "end", cfg.alpha.alpha_end);
    }

    if (doc.contains("dims")) {
        const json& d = doc.at("dims");
        if (!d.is_object()) {
            throw InputError("config: 'dims' must be an object");
        }
        reject_unknown_keys(d, {"vocab", "embed", "hidden", "out"}, "'dims'");
        read_field(d, "vocab", cfg.dims.vocab);
        read_field(d, "embed", cfg.dims.embed);
        read_field(d, "hidden", cfg.dims.hidden);
        read_field(d, "out", cfg.dims.out);
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return cfg;
}

TrainConfig load_train_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw InputError("cannot open config file: " + path);
    }
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is a 1-based offset into the document
        std::size_t line = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
            }
        }
        throw InputError("config file " + path + " line " + std::to_string(line) + ": " +
                         e.what());
    }
    return train_config_from_json(doc);
}

json train_config_to_json(const TrainConfig& cfg) {
    json alpha;
    alpha["mode"] = cfg.alpha.mode == AlphaSchedule::Mode::constant ? "constant" : "cosine";
    alpha["value"] = cfg.alpha.alpha_const;
    alpha["start"] = cfg.alpha.alpha_start;
    alpha["end"] = cfg.alpha.alpha_end;
    return json{{"buffer_size", cfg.buffer_size},
                {"knn_k", cfg.knn_k},
                {"kmeans_k", cfg.kmeans_k},
                {"kmeans_iters", cfg.kmeans_iters},
                {"tau", cfg.tau},
                {"beta", cfg.beta},
                {"gamma", cfg.gamma},
                {"alpha", alpha},
                {"batch_size", cfg.batch_size},
                {"learning_rate", cfg.learning_rate},
                {"dropout", cfg.dropout},
                {"steps", cfg.steps},
                {"seed", cfg.seed},
                {"mode", mode_name(cfg.mode)},
                {"dims", json{{"vocab", cfg.dims.vocab},
                              {"embed", cfg.dims.embed},
                              {"hidden", cfg.dims.hidden},
                              {"out", cfg.dims.out}}}};
}

std::string fnv1a64_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("cannot open file for checksum: " + path);
    }
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char buf[4096];
    while (f.read(buf, sizeof(buf)) || f.gcount() > 0) {
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ull;
        }
        if (!f) {
            break;
        }
    }
    std::ostringstream out;
    out << std::hex << hash;
    return out.str();
}

}  // namespace scse
