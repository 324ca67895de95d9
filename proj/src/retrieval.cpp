#include "scse/retrieval.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace scse {

std::vector<Vec> knn_retrieve(const MemoryBuffer& buf, const Vec& query, std::size_t k) {
    if (norm(query) <= 0.0) {
        throw std::invalid_argument("knn_retrieve: zero-norm query");
    }
    if (query.size() != buf.dim()) {
        throw std::invalid_argument("knn_retrieve: dimension mismatch");
    }
    const std::size_t n = buf.size();
    const std::size_t take = std::min(k, n);
    if (take == 0) {
        return {};
    }
    // entries are unit norm, so dot/||query|| is the cosine; the shared
    // 1/||query|| factor does not change the ordering
    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i) {
        score[i] = dot(buf.at(i), query);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (score[a] != score[b]) {
            return score[a] > score[b];
        }
        return a < b;  // tie: older entry first
    });
    std::vector<Vec> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back(buf.at(order[i]));
    }
    return out;
}

namespace {

std::size_t best_center(const std::vector<Vec>& centers, const Vec& entry) {
    std::size_t best = 0;
    double best_sim = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double sim = dot(centers[c], entry);
        if (sim > best_sim) {  // strict: ties keep the lowest index
            best_sim = sim;
            best = c;
        }
    }
    return best;
}

}  // namespace

ClusterModel spherical_kmeans(const MemoryBuffer& buf, std::size_t k, std::size_t max_iters,
                              std::uint64_t seed) {
    const std::size_t n = buf.size();
    if (k < 1) {
        throw std::invalid_argument("spherical_kmeans: k must be >= 1");
    }
    if (n < k) {
        throw std::invalid_argument("spherical_kmeans: fewer buffer entries than clusters");
    }
    if (max_iters < 1) {
        throw std::invalid_argument("spherical_kmeans: max_iters must be >= 1");
    }

    // seed centers from k distinct entries (partial Fisher-Yates)
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }

    ClusterModel model;
    model.centers.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        model.centers.push_back(buf.at(idx[i]));
    }
    model.assignments.assign(n, 0);

    for (std::size_t iter = 0;; ++iter) {
        // assignment pass
        bool changed = false;
        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = best_center(model.centers, buf.at(i));
            if (c != model.assignments[i]) {
                changed = true;
            }
            model.assignments[i] = c;
            objective += dot(model.centers[c], buf.at(i));
        }
        model.objective_per_iter.push_back(objective);

        if ((!changed && iter > 0) || iter + 1 >= max_iters) {
            break;  // model is consistent: assignments match current centers
        }

        // update pass: centers become normalized member means
        std::vector<Vec> sums(k, Vec(buf.dim(), 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec& e = buf.at(i);
            Vec& s = sums[model.assignments[i]];
            for (std::size_t d = 0; d < e.size(); ++d) {
                s[d] += e[d];
            }
            ++counts[model.assignments[i]];
        }
        std::vector<std::size_t> reseeded;
        for (std::size_t c = 0; c < k; ++c) {
            // a cluster whose members cancel out contributes zero to the
            // objective, same as an empty one: reseed both cases
            if (counts[c] > 0 && norm(sums[c]) > 1e-12) {
                model.centers[c] = l2_normalize(sums[c]);
                continue;
            }
            // reseed with the worst-fit entry (lowest similarity to its
            // own center), skipping entries already used this pass
            std::size_t worst = 0;
            double worst_sim = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                if (std::find(reseeded.begin(), reseeded.end(), i) != reseeded.end()) {
                    continue;
                }
                const double sim = dot(model.centers[model.assignments[i]], buf.at(i));
                if (sim < worst_sim) {
                    worst_sim = sim;
                    worst = i;
                }
            }
            model.centers[c] = buf.at(worst);
            reseeded.push_back(worst);
        }
    }
    return model;
}

Vec assigned_center(const ClusterModel& model, const Vec& query) {
    if (model.centers.empty()) {
        throw std::invalid_argument("assigned_center: empty model");
    }
    const double qn = norm(query);
    if (qn <= 0.0) {
        throw std::invalid_argument("assigned_center: zero-norm query");
    }
    std::size_t best = 0;
    double best_sim = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.centers.size(); ++c) {
        const double sim = dot(model.centers[c], query);
        if (sim > best_sim) {
            best_sim = sim;
            best = c;
        }
    }
    return model.centers[best];
}

}  // namespace scse
