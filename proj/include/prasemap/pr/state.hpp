#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "prasemap/kg/knowledge_graph.hpp"
#include "prasemap/pr/config.hpp"
#include "prasemap/pr/functionality.hpp"
#include "prasemap/pr/mapping.hpp"

namespace prase {

struct PRState {
    std::shared_ptr<const KnowledgeGraph> kg_left;
    std::shared_ptr<const KnowledgeGraph> kg_right;
    FunctionalityTable funcs_left;
    FunctionalityTable funcs_right;
    MappingStore mappings;
    std::size_t iteration = 0;

    const KnowledgeGraph& left() const { return *kg_left; }
    const KnowledgeGraph& right() const { return *kg_right; }
};

// Every pair of identical normalized literals becomes a certain LITERAL
// mapping; every pair of entities with identical non-empty labels becomes an
// ENTITY mapping at theta_lexical.
inline MappingStore seed_lexical_mappings(const KnowledgeGraph& left, const KnowledgeGraph& right,
                                          const PRConfig& config) {
    MappingStore store;
    for (LiteralId l = 0; l < left.num_literals(); ++l) {
        if (auto r = right.find_literal(left.literal(l))) {
            store.upsert({l, *r, MappingKind::Literal, 1.0, false, MappingSource::Lexical});
        }
    }
    std::unordered_map<std::string_view, std::vector<EntityId>> by_label;
    for (EntityId e = 0; e < right.num_entities(); ++e) {
        const auto& label = right.entity_label(e);
        if (!label.empty()) by_label[label].push_back(e);
    }
    for (EntityId x = 0; x < left.num_entities(); ++x) {
        auto it = by_label.find(left.entity_label(x));
        if (it == by_label.end()) continue;
        for (EntityId y : it->second) {
            store.upsert({x, y, MappingKind::Entity, config.theta_lexical, false, MappingSource::Lexical});
        }
    }
    return store;
}

// Functionalities plus lexical seeds; the starting point of every pipeline.
inline PRState initialize_state(std::shared_ptr<const KnowledgeGraph> left,
                                std::shared_ptr<const KnowledgeGraph> right, const PRConfig& config) {
    config.validate();
    PRState state;
    state.funcs_left = compute_functionalities(*left);
    state.funcs_right = compute_functionalities(*right);
    state.mappings = seed_lexical_mappings(*left, *right, config);
    state.kg_left = std::move(left);
    state.kg_right = std::move(right);
    return state;
}

}  // namespace prase
