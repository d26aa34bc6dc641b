#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace prase {

enum class MappingKind : std::uint8_t { Entity, Literal, RelSubsumptionLR, RelSubsumptionRL };
enum class MappingSource : std::uint8_t { Lexical, PR, SE, Feedback };

inline std::string_view to_string(MappingSource s) {
    switch (s) {
        case MappingSource::Lexical: return "lexical";
        case MappingSource::PR: return "pr";
        case MappingSource::SE: return "se";
        case MappingSource::Feedback: return "feedback";
    }
    return "?";
}

// Cross-KG correspondence. `left` always indexes the left KG and `right` the
// right KG; the kind says whether they are entities, literals or predicates.
// RelSubsumptionLR(l, r) is P(l ⊆ r); RelSubsumptionRL(l, r) is P(r ⊆ l).
struct Mapping {
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    MappingKind kind = MappingKind::Entity;
    double probability = 0.0;
    bool frozen = false;
    MappingSource source = MappingSource::PR;

    bool operator==(const Mapping&) const = default;
};

struct MappingKey {
    MappingKind kind;
    std::uint32_t left;
    std::uint32_t right;
    auto operator<=>(const MappingKey&) const = default;
};

inline MappingKey key_of(const Mapping& m) { return {m.kind, m.left, m.right}; }

// At most one mapping per (kind, left, right); iteration is ordered by key.
class MappingStore {
public:
    using Container = std::map<MappingKey, Mapping>;

    void upsert(const Mapping& m) { items_[key_of(m)] = m; }

    bool erase(MappingKind kind, std::uint32_t left, std::uint32_t right) {
        return items_.erase({kind, left, right}) > 0;
    }

    const Mapping* find(MappingKind kind, std::uint32_t left, std::uint32_t right) const {
        auto it = items_.find({kind, left, right});
        return it == items_.end() ? nullptr : &it->second;
    }

    double probability(MappingKind kind, std::uint32_t left, std::uint32_t right) const {
        const auto* m = find(kind, left, right);
        return m ? m->probability : 0.0;
    }

    std::vector<Mapping> of_kind(MappingKind kind) const {
        std::vector<Mapping> out;
        for (auto it = items_.lower_bound({kind, 0, 0}); it != items_.end() && it->first.kind == kind; ++it) {
            out.push_back(it->second);
        }
        return out;
    }

    std::size_t count(MappingKind kind) const {
        std::size_t n = 0;
        for (auto it = items_.lower_bound({kind, 0, 0}); it != items_.end() && it->first.kind == kind; ++it) ++n;
        return n;
    }

    // Drops every mapping of the kind that is not frozen.
    void clear_unfrozen(MappingKind kind) {
        for (auto it = items_.lower_bound({kind, 0, 0}); it != items_.end() && it->first.kind == kind;) {
            it = it->second.frozen ? std::next(it) : items_.erase(it);
        }
    }

    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    Container::const_iterator begin() const { return items_.begin(); }
    Container::const_iterator end() const { return items_.end(); }

    bool operator==(const MappingStore&) const = default;

private:
    Container items_;
};

}  // namespace prase
