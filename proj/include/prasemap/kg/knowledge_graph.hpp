#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "prasemap/kg/normalize.hpp"

namespace prase {

enum class Side : std::uint8_t { Left, Right };

inline std::string_view to_string(Side side) { return side == Side::Left ? "left" : "right"; }

using EntityId = std::uint32_t;
using LiteralId = std::uint32_t;
using RelationId = std::uint32_t;
using AttributeId = std::uint32_t;

// Directed predicate over one KG. Relation r owns ids 2r (forward) and 2r+1
// (synthetic inverse); attribute a owns id 2*num_relations + a.
using PredicateId = std::uint32_t;

struct RelationTriple {
    EntityId head;
    RelationId relation;
    EntityId tail;
    auto operator<=>(const RelationTriple&) const = default;
};

struct AttributeTriple {
    EntityId entity;
    AttributeId attribute;
    LiteralId literal;
    auto operator<=>(const AttributeTriple&) const = default;
};

// Outgoing statement of an entity. For attribute predicates the target is a
// literal id, otherwise an entity id.
struct Edge {
    PredicateId predicate;
    std::uint32_t target;
    auto operator<=>(const Edge&) const = default;
};

struct PredicatePair {
    std::uint32_t head;
    std::uint32_t tail;
    auto operator<=>(const PredicatePair&) const = default;
};

namespace detail {

class StringInterner {
public:
    std::uint32_t intern(std::string_view s) {
        auto [it, inserted] = index_.try_emplace(std::string(s), static_cast<std::uint32_t>(values_.size()));
        if (inserted) values_.emplace_back(s);
        return it->second;
    }

    std::optional<std::uint32_t> find(std::string_view s) const {
        auto it = index_.find(std::string(s));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& at(std::uint32_t id) const { return values_.at(id); }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<std::string>& values() const noexcept { return values_; }

private:
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<std::string> values_;
};

}  // namespace detail

class KnowledgeGraphBuilder;

// Immutable interned triple store for one side of an alignment task.
class KnowledgeGraph {
public:
    Side side() const noexcept { return side_; }

    std::size_t num_entities() const noexcept { return entities_.size(); }
    std::size_t num_relations() const noexcept { return relations_.size(); }
    std::size_t num_attributes() const noexcept { return attributes_.size(); }
    std::size_t num_literals() const noexcept { return literals_.size(); }
    std::size_t num_predicates() const noexcept { return 2 * relations_.size() + attributes_.size(); }

    const std::string& entity_name(EntityId e) const { return entities_.at(e); }
    const std::string& entity_label(EntityId e) const { return labels_.at(e); }
    const std::string& relation_name(RelationId r) const { return relations_.at(r); }
    const std::string& attribute_name(AttributeId a) const { return attributes_.at(a); }
    const std::string& literal(LiteralId l) const { return literals_.at(l); }

    std::optional<EntityId> find_entity(std::string_view name) const { return entities_.find(name); }
    std::optional<LiteralId> find_literal(std::string_view normalized) const { return literals_.find(normalized); }
    std::optional<RelationId> find_relation(std::string_view name) const { return relations_.find(name); }
    std::optional<AttributeId> find_attribute(std::string_view name) const { return attributes_.find(name); }

    const std::vector<std::string>& entity_names() const noexcept { return entities_.values(); }
    const std::vector<std::string>& literals() const noexcept { return literals_.values(); }

    std::span<const RelationTriple> relation_triples() const noexcept { return rel_triples_; }
    std::span<const AttributeTriple> attribute_triples() const noexcept { return attr_triples_; }

    // Predicate id helpers.
    PredicateId forward(RelationId r) const noexcept { return 2 * r; }
    PredicateId inverse(RelationId r) const noexcept { return 2 * r + 1; }
    PredicateId attribute_predicate(AttributeId a) const noexcept {
        return static_cast<PredicateId>(2 * relations_.size() + a);
    }
    bool is_attribute(PredicateId p) const noexcept { return p >= 2 * relations_.size(); }
    bool is_inverse(PredicateId p) const noexcept { return !is_attribute(p) && (p % 2 == 1); }
    RelationId relation_of(PredicateId p) const noexcept { return p / 2; }
    AttributeId attribute_of(PredicateId p) const noexcept {
        return static_cast<AttributeId>(p - 2 * relations_.size());
    }
    std::string predicate_name(PredicateId p) const {
        if (is_attribute(p)) return attribute_name(attribute_of(p));
        return is_inverse(p) ? "inverse(" + relation_name(relation_of(p)) + ")" : relation_name(relation_of(p));
    }

    // All statements with e as subject: forward relations, inverse relations
    // (one per incoming triple) and attributes. Sorted.
    std::span<const Edge> out_edges(EntityId e) const { return out_edges_.at(e); }
    // Statements (subject, p, e) with e as object, reported as (p, subject). Sorted.
    std::span<const Edge> in_edges(EntityId e) const { return in_edges_.at(e); }
    // Attribute statements (subject, a, l) reported as (a, subject). Sorted.
    std::span<const Edge> literal_in_edges(LiteralId l) const { return literal_in_.at(l); }

    // Distinct (head, tail) pairs of a predicate; inverse predicates list the
    // reversed pairs. Sorted.
    std::span<const PredicatePair> predicate_pairs(PredicateId p) const { return predicate_pairs_.at(p); }

private:
    friend class KnowledgeGraphBuilder;

    Side side_ = Side::Left;
    detail::StringInterner entities_;
    std::vector<std::string> labels_;
    detail::StringInterner relations_;
    detail::StringInterner attributes_;
    detail::StringInterner literals_;
    std::vector<RelationTriple> rel_triples_;
    std::vector<AttributeTriple> attr_triples_;
    std::vector<std::vector<Edge>> out_edges_;
    std::vector<std::vector<Edge>> in_edges_;
    std::vector<std::vector<Edge>> literal_in_;
    std::vector<std::vector<PredicatePair>> predicate_pairs_;
};

class KnowledgeGraphBuilder {
public:
    explicit KnowledgeGraphBuilder(Side side) { kg_.side_ = side; }

    EntityId add_entity(std::string_view name) {
        const auto before = kg_.entities_.size();
        const auto id = kg_.entities_.intern(name);
        if (kg_.entities_.size() != before) kg_.labels_.push_back(prase::entity_label(name));
        return id;
    }

    // Returns false when the triple was already present.
    bool add_relation_triple(std::string_view head, std::string_view relation, std::string_view tail) {
        const auto h = add_entity(head);
        const auto r = kg_.relations_.intern(relation);
        const auto t = add_entity(tail);
        return rel_seen_.insert(RelationTriple{h, r, t});
    }

    bool add_attribute_triple(std::string_view entity, std::string_view attribute, std::string_view raw_literal) {
        const auto e = add_entity(entity);
        const auto a = kg_.attributes_.intern(attribute);
        const auto l = kg_.literals_.intern(normalize_literal(raw_literal));
        return attr_seen_.insert(AttributeTriple{e, a, l});
    }

    std::size_t duplicates() const noexcept { return rel_seen_.duplicates + attr_seen_.duplicates; }

    KnowledgeGraph build() && {
        kg_.rel_triples_ = std::move(rel_seen_.items);
        kg_.attr_triples_ = std::move(attr_seen_.items);
        std::sort(kg_.rel_triples_.begin(), kg_.rel_triples_.end());
        std::sort(kg_.attr_triples_.begin(), kg_.attr_triples_.end());

        const std::size_t n = kg_.entities_.size();
        kg_.out_edges_.assign(n, {});
        kg_.in_edges_.assign(n, {});
        kg_.literal_in_.assign(kg_.literals_.size(), {});
        kg_.predicate_pairs_.assign(kg_.num_predicates(), {});

        for (const auto& t : kg_.rel_triples_) {
            const auto fwd = kg_.forward(t.relation);
            const auto inv = kg_.inverse(t.relation);
            kg_.out_edges_[t.head].push_back({fwd, t.tail});
            kg_.out_edges_[t.tail].push_back({inv, t.head});
            kg_.in_edges_[t.tail].push_back({fwd, t.head});
            kg_.in_edges_[t.head].push_back({inv, t.tail});
            kg_.predicate_pairs_[fwd].push_back({t.head, t.tail});
            kg_.predicate_pairs_[inv].push_back({t.tail, t.head});
        }
        for (const auto& t : kg_.attr_triples_) {
            const auto p = kg_.attribute_predicate(t.attribute);
            kg_.out_edges_[t.entity].push_back({p, t.literal});
            kg_.literal_in_[t.literal].push_back({p, t.entity});
            kg_.predicate_pairs_[p].push_back({t.entity, t.literal});
        }
        auto sort_all = [](auto& lists) {
            for (auto& list : lists) std::sort(list.begin(), list.end());
        };
        sort_all(kg_.out_edges_);
        sort_all(kg_.in_edges_);
        sort_all(kg_.literal_in_);
        sort_all(kg_.predicate_pairs_);
        return std::move(kg_);
    }

private:
    template <typename Triple>
    struct UniqueTriples {
        struct Hash {
            std::size_t operator()(const Triple& t) const noexcept {
                const auto [a, b, c] = t;
                std::uint64_t h = (static_cast<std::uint64_t>(a) << 32) ^ b;
                h ^= static_cast<std::uint64_t>(c) * 0x9E3779B97F4A7C15ULL;
                return std::hash<std::uint64_t>{}(h);
            }
        };
        std::unordered_set<Triple, Hash> seen;
        std::vector<Triple> items;
        std::size_t duplicates = 0;

        bool insert(const Triple& t) {
            if (!seen.insert(t).second) {
                ++duplicates;
                return false;
            }
            items.push_back(t);
            return true;
        }
    };

    KnowledgeGraph kg_;
    UniqueTriples<RelationTriple> rel_seen_;
    UniqueTriples<AttributeTriple> attr_seen_;
};

}  // namespace prase
