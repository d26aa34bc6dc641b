#pragma once

#include <vector>

#include "prasemap/pr/mapping.hpp"
#include "prasemap/se/embedding.hpp"
#include "prasemap/se/trainer.hpp"

namespace prase {

// Mutually nearest cross-KG pairs (by cosine) with similarity >= tau_se.
// Ties resolve to the lowest entity id, which keeps the result a partial
// injection.
inline MappingStore propose_mappings(const EmbeddingSet& emb, const SEConfig& config) {
    const std::size_t nl = emb.vectors_left.rows();
    const std::size_t nr = emb.vectors_right.rows();
    std::vector<EntityId> best_right(nl, 0);
    std::vector<double> best_right_sim(nl, -1.0);
    std::vector<EntityId> best_left(nr, 0);
    std::vector<double> best_left_sim(nr, -1.0);

    std::vector<double> right_norms(nr);
    for (std::size_t j = 0; j < nr; ++j) right_norms[j] = norm(emb.vectors_right.row(j));

    for (std::size_t i = 0; i < nl; ++i) {
        const auto u = emb.vectors_left.row(i);
        const double nu = norm(u);
        for (std::size_t j = 0; j < nr; ++j) {
            double sim = 0.0;
            if (nu > 0.0 && right_norms[j] > 0.0) {
                sim = std::clamp(dot(u, emb.vectors_right.row(j)) / (nu * right_norms[j]), 0.0, 1.0);
            }
            if (sim > best_right_sim[i]) {
                best_right_sim[i] = sim;
                best_right[i] = static_cast<EntityId>(j);
            }
            if (sim > best_left_sim[j]) {
                best_left_sim[j] = sim;
                best_left[j] = static_cast<EntityId>(i);
            }
        }
    }

    MappingStore out;
    for (std::size_t i = 0; i < nl; ++i) {
        if (nr == 0) break;
        const EntityId j = best_right[i];
        if (best_left[j] != i) continue;
        const double sim = best_right_sim[i];
        if (sim < config.tau_se) continue;
        out.upsert({static_cast<EntityId>(i), j, MappingKind::Entity, sim, false, MappingSource::SE});
    }
    return out;
}

}  // namespace prase
