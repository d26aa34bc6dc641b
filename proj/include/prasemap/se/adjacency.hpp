#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "prasemap/kg/knowledge_graph.hpp"
#include "prasemap/pr/functionality.hpp"

namespace prase {

// Row-normalized neighbour weights of one KG, self-loop included.
struct WeightedAdjacency {
    std::vector<std::vector<std::pair<EntityId, double>>> rows;

    const std::vector<std::pair<EntityId, double>>& neighbours(EntityId e) const { return rows.at(e); }
};

// Raw weight of a link h–t is the largest fun_inv over the directed relation
// predicates connecting them (inverse edges included); the self-loop has raw
// weight 1. Each row is then scaled to sum to 1.
inline WeightedAdjacency build_weighted_adjacency(const KnowledgeGraph& kg, const FunctionalityTable& funcs) {
    WeightedAdjacency adj;
    adj.rows.resize(kg.num_entities());
    for (EntityId e = 0; e < kg.num_entities(); ++e) {
        auto& row = adj.rows[e];
        row.emplace_back(e, 1.0);
        for (const auto& edge : kg.out_edges(e)) {
            if (kg.is_attribute(edge.predicate)) continue;
            row.emplace_back(edge.target, funcs.fun_inv(edge.predicate));
        }
        std::sort(row.begin(), row.end());
        // collapse duplicates keeping the maximum weight
        std::vector<std::pair<EntityId, double>> merged;
        for (const auto& [n, w] : row) {
            if (!merged.empty() && merged.back().first == n) {
                merged.back().second = std::max(merged.back().second, w);
            } else {
                merged.emplace_back(n, w);
            }
        }
        double total = 0.0;
        for (const auto& [n, w] : merged) total += w;
        for (auto& [n, w] : merged) w /= total;
        row = std::move(merged);
    }
    return adj;
}

}  // namespace prase
