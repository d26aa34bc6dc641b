#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "prasemap/errors.hpp"
#include "prasemap/kg/knowledge_graph.hpp"

namespace prase {

struct KGStats {
    std::size_t num_entities = 0;
    std::size_t num_relations = 0;
    std::size_t num_attributes = 0;
    std::size_t num_rel_triples = 0;
    std::size_t num_attr_triples = 0;
    bool operator==(const KGStats&) const = default;
};

// Counts reflect the input files: synthetic inverse relations are not included.
inline KGStats kg_stats(const KnowledgeGraph& kg) {
    return {kg.num_entities(), kg.num_relations(), kg.num_attributes(), kg.relation_triples().size(),
            kg.attribute_triples().size()};
}

struct SubgraphNode {
    std::string entity;
    std::string label;
    std::vector<std::pair<std::string, std::string>> attributes;  // (attribute, literal)
};

struct SubgraphEdge {
    std::string head;
    std::string relation;
    std::string tail;
};

struct Subgraph {
    std::string center;
    std::size_t hop_limit = 1;
    std::vector<SubgraphNode> nodes;  // BFS order, center first
    std::vector<SubgraphEdge> edges;
};

// Entities within `hops` of center over relation triples in either
// direction, in BFS order.
inline std::vector<EntityId> entities_within(const KnowledgeGraph& kg, EntityId center, std::size_t hops) {
    std::vector<int> depth(kg.num_entities(), -1);
    std::vector<EntityId> order{center};
    std::deque<EntityId> frontier{center};
    depth[center] = 0;
    while (!frontier.empty()) {
        const EntityId e = frontier.front();
        frontier.pop_front();
        if (static_cast<std::size_t>(depth[e]) == hops) continue;
        for (const auto& edge : kg.out_edges(e)) {
            if (kg.is_attribute(edge.predicate) || depth[edge.target] >= 0) continue;
            depth[edge.target] = depth[e] + 1;
            order.push_back(edge.target);
            frontier.push_back(edge.target);
        }
    }
    return order;
}

// Induced subgraph on the entities within `hops` of center, each node carrying
// its attribute list.
inline Subgraph neighbourhood(const KnowledgeGraph& kg, EntityId center, std::size_t hops) {
    if (center >= kg.num_entities()) throw UnknownEntity(std::to_string(center));
    if (hops == 0) throw Error("neighbourhood hop limit must be positive");

    Subgraph g;
    g.center = kg.entity_name(center);
    g.hop_limit = hops;
    const auto members = entities_within(kg, center, hops);
    std::vector<bool> in_graph(kg.num_entities(), false);
    for (auto e : members) in_graph[e] = true;

    for (auto e : members) {
        SubgraphNode node{kg.entity_name(e), kg.entity_label(e), {}};
        for (const auto& edge : kg.out_edges(e)) {
            if (kg.is_attribute(edge.predicate)) {
                node.attributes.emplace_back(kg.attribute_name(kg.attribute_of(edge.predicate)),
                                             kg.literal(edge.target));
            } else if (!kg.is_inverse(edge.predicate) && in_graph[edge.target]) {
                g.edges.push_back({kg.entity_name(e), kg.relation_name(kg.relation_of(edge.predicate)),
                                   kg.entity_name(edge.target)});
            }
        }
        g.nodes.push_back(std::move(node));
    }
    return g;
}

inline Subgraph neighbourhood(const KnowledgeGraph& kg, std::string_view center, std::size_t hops) {
    const auto id = kg.find_entity(center);
    if (!id) throw UnknownEntity(std::string(center));
    return neighbourhood(kg, *id, hops);
}

}  // namespace prase
