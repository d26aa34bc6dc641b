#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prasemap/errors.hpp"
#include "prasemap/pr/mapping.hpp"
#include "prasemap/se/adjacency.hpp"
#include "prasemap/se/embedding.hpp"

namespace prase {

struct SEConfig {
    std::size_t dimension = 32;
    std::size_t epochs = 50;
    double learning_rate = 0.05;
    std::size_t negatives_per_positive = 5;
    double margin = 1.0;
    double theta_seed = 0.9;  // minimum mapping probability for a training seed
    double tau_se = 0.9;      // minimum similarity for a proposed mapping
    std::uint64_t rng_seed = 7;

    void validate() const {
        auto fail = [](const std::string& what) { throw InvalidConfig("se config: " + what); };
        if (dimension == 0) fail("dimension must be positive");
        if (epochs == 0) fail("epochs must be positive");
        if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
        if (negatives_per_positive == 0) fail("negatives_per_positive must be positive");
        if (!(margin > 0.0)) fail("margin must be positive");
        if (!(theta_seed > 0.0 && theta_seed < 1.0)) fail("theta_seed must lie in (0, 1)");
        if (!(tau_se > 0.0 && tau_se <= 1.0)) fail("tau_se must lie in (0, 1]");
    }
};

using SeedPair = std::pair<EntityId, EntityId>;

// High-confidence entity mappings. Frozen positives always qualify, frozen
// negatives never do.
inline std::vector<SeedPair> select_seeds(const MappingStore& mappings, double theta_seed) {
    std::vector<SeedPair> seeds;
    for (const auto& m : mappings.of_kind(MappingKind::Entity)) {
        if (m.frozen) {
            if (m.probability == 1.0) seeds.emplace_back(m.left, m.right);
        } else if (m.probability >= theta_seed) {
            seeds.emplace_back(m.left, m.right);
        }
    }
    return seeds;
}

struct MarginGradient {
    double loss = 0.0;
    std::vector<double> d_anchor;    // ∂/∂ left vector
    std::vector<double> d_positive;  // ∂/∂ right vector of the seed
    std::vector<double> d_negative;  // ∂/∂ corrupted right vector
};

// max(0, margin + |l - r| - |l - r'|)
inline double margin_loss(std::span<const double> anchor, std::span<const double> positive,
                          std::span<const double> negative, double margin) {
    return std::max(0.0, margin + euclidean_distance(anchor, positive) - euclidean_distance(anchor, negative));
}

// Analytic (sub)gradient of margin_loss. A zero distance contributes a zero
// subgradient.
inline MarginGradient margin_loss_gradient(std::span<const double> anchor, std::span<const double> positive,
                                           std::span<const double> negative, double margin) {
    const std::size_t d = anchor.size();
    MarginGradient g;
    g.d_anchor.assign(d, 0.0);
    g.d_positive.assign(d, 0.0);
    g.d_negative.assign(d, 0.0);
    const double dp = euclidean_distance(anchor, positive);
    const double dn = euclidean_distance(anchor, negative);
    g.loss = std::max(0.0, margin + dp - dn);
    if (g.loss <= 0.0) return g;
    for (std::size_t i = 0; i < d; ++i) {
        const double up = dp > 0.0 ? (anchor[i] - positive[i]) / dp : 0.0;
        const double un = dn > 0.0 ? (anchor[i] - negative[i]) / dn : 0.0;
        g.d_anchor[i] = up - un;
        g.d_positive[i] = -up;
        g.d_negative[i] = un;
    }
    return g;
}

namespace detail {

inline void normalize_rows(VectorTable& table) {
    for (std::size_t i = 0; i < table.rows(); ++i) {
        auto row = table.row(i);
        const double n = norm(row);
        if (n == 0.0) continue;
        for (auto& v : row) v /= n;
    }
}

// Replaces every vector by the adjacency-weighted mean; the self-loop keeps
// part of the entity's own vector.
inline void smooth(VectorTable& table, const WeightedAdjacency& adj) {
    VectorTable next(table.rows(), table.dimension());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        auto out = next.row(i);
        for (const auto& [j, w] : adj.rows[i]) {
            const auto src = table.row(j);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * src[k];
        }
    }
    table = std::move(next);
}

}  // namespace detail

// Both KGs share one vector space; seed pairs pull the sides together.
// Each epoch: neighbourhood smoothing, SGD on the seed margin loss with
// uniformly corrupted right entities, renormalization, loss bookkeeping.
inline EmbeddingSet train_embeddings(const KnowledgeGraph& left, const KnowledgeGraph& right,
                                     const WeightedAdjacency& adj_left, const WeightedAdjacency& adj_right,
                                     const std::vector<SeedPair>& seeds, const SEConfig& config,
                                     const std::function<void(int epoch, double mean_loss)>& on_epoch = {}) {
    config.validate();
    if (seeds.empty()) throw NoSeeds();

    EmbeddingSet emb;
    emb.dimension = config.dimension;
    emb.vectors_left = VectorTable(left.num_entities(), config.dimension);
    emb.vectors_right = VectorTable(right.num_entities(), config.dimension);

    std::mt19937_64 rng(config.rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto* table : {&emb.vectors_left, &emb.vectors_right}) {
        for (std::size_t i = 0; i < table->rows(); ++i) {
            for (auto& v : table->row(i)) v = gauss(rng);
        }
        detail::normalize_rows(*table);
    }

    std::vector<SeedPair> order = seeds;
    const std::size_t num_right = right.num_entities();
    const double lr = config.learning_rate;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        detail::smooth(emb.vectors_left, adj_left);
        detail::smooth(emb.vectors_right, adj_right);

        std::shuffle(order.begin(), order.end(), rng);
        double total = 0.0;
        std::size_t terms = 0;
        for (const auto& [l, r] : order) {
            if (num_right < 2) break;
            std::uniform_int_distribution<EntityId> corrupt(0, static_cast<EntityId>(num_right - 2));
            for (std::size_t k = 0; k < config.negatives_per_positive; ++k) {
                EntityId neg = corrupt(rng);
                if (neg >= r) ++neg;  // uniform over right entities other than r
                auto anchor = emb.vectors_left.row(l);
                auto positive = emb.vectors_right.row(r);
                auto negative = emb.vectors_right.row(neg);
                const auto g = margin_loss_gradient(anchor, positive, negative, config.margin);
                total += g.loss;
                ++terms;
                if (g.loss <= 0.0) continue;
                for (std::size_t i = 0; i < anchor.size(); ++i) {
                    anchor[i] -= lr * g.d_anchor[i];
                    positive[i] -= lr * g.d_positive[i];
                    negative[i] -= lr * g.d_negative[i];
                }
            }
        }

        detail::normalize_rows(emb.vectors_left);
        detail::normalize_rows(emb.vectors_right);
        emb.loss_trace.emplace_back(static_cast<int>(epoch + 1), terms ? total / static_cast<double>(terms) : 0.0);
        if (on_epoch) on_epoch(emb.loss_trace.back().first, emb.loss_trace.back().second);
    }
    return emb;
}

}  // namespace prase
