#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "prasemap/errors.hpp"
#include "prasemap/pr/config.hpp"
#include "prasemap/pr/state.hpp"

namespace prase {

struct FeedbackLabel {
    EntityId left = 0;
    EntityId right = 0;
    int label = 0;  // 0 = not equivalent, 1 = equivalent
};

// Uniform sample without replacement of non-frozen entity mappings whose
// probability lies strictly inside the band. The sample is a prefix-stable
// partial Fisher-Yates shuffle, so for a fixed state and seed the result for n
// is a prefix of the result for any larger n.
inline std::vector<Mapping> select_uncertain(const PRState& state, std::size_t n, UncertainBand band,
                                             std::uint64_t rng_seed) {
    std::vector<Mapping> pool;
    for (const auto& m : state.mappings.of_kind(MappingKind::Entity)) {
        if (!m.frozen && band.contains(m.probability)) pool.push_back(m);
    }
    const std::size_t k = std::min(n, pool.size());
    std::mt19937_64 rng(rng_seed);
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(k);
    return pool;
}

inline std::vector<Mapping> select_uncertain(const PRState& state, std::size_t n, const PRConfig& config) {
    return select_uncertain(state, n, config.uncertain_band, config.rng_seed);
}

// Labels become frozen ENTITY mappings with probability 0 or 1. Label-0 pairs
// stay in the store so later rounds cannot rediscover them.
inline PRState& apply_feedback(PRState& state, const std::vector<FeedbackLabel>& labels) {
    for (const auto& l : labels) {
        if (l.left >= state.left().num_entities()) throw UnknownEntity("left#" + std::to_string(l.left));
        if (l.right >= state.right().num_entities()) throw UnknownEntity("right#" + std::to_string(l.right));
        if (l.label != 0 && l.label != 1) throw Error("feedback label must be 0 or 1");
    }
    for (const auto& l : labels) {
        state.mappings.upsert(
            {l.left, l.right, MappingKind::Entity, static_cast<double>(l.label), true, MappingSource::Feedback});
    }
    return state;
}

inline FeedbackLabel resolve_label(const PRState& state, const std::string& left, const std::string& right,
                                   int label) {
    const auto l = state.left().find_entity(left);
    if (!l) throw UnknownEntity(left);
    const auto r = state.right().find_entity(right);
    if (!r) throw UnknownEntity(right);
    return {*l, *r, label};
}

}  // namespace prase
