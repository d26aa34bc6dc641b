#pragma once

#include <memory>
#include <random>
#include <string>

#include "prasemap/prasemap.hpp"

namespace fixtures {

using KGPtr = std::shared_ptr<const prase::KnowledgeGraph>;

inline KGPtr kg(const std::string& rel, const std::string& attr = "", prase::Side side = prase::Side::Left) {
    return std::make_shared<const prase::KnowledgeGraph>(prase::parse_kg_strings(rel, attr, side));
}

inline prase::PRState state(const std::string& left_rel, const std::string& left_attr, const std::string& right_rel,
                            const std::string& right_attr, const prase::PRConfig& config = {}) {
    return prase::initialize_state(kg(left_rel, left_attr, prase::Side::Left),
                                   kg(right_rel, right_attr, prase::Side::Right), config);
}

struct KGText {
    std::string rel;
    std::string attr;
};

// Random single KG over entities "http://ex.org/n<i>", relations "r<k>",
// attributes "a<k>" and a small literal pool, duplicates allowed.
inline KGText random_kg_text(std::mt19937_64& rng, std::size_t entities, std::size_t rel_triples,
                             std::size_t attr_triples, std::size_t relations = 3, std::size_t attributes = 2,
                             std::size_t literals = 6) {
    std::uniform_int_distribution<std::size_t> e(0, entities - 1), r(0, relations - 1), a(0, attributes - 1),
        l(0, literals - 1);
    KGText out;
    for (std::size_t i = 0; i < rel_triples; ++i) {
        out.rel += "http://ex.org/n" + std::to_string(e(rng)) + "\tr" + std::to_string(r(rng)) + "\thttp://ex.org/n" +
                   std::to_string(e(rng)) + "\n";
    }
    for (std::size_t i = 0; i < attr_triples; ++i) {
        out.attr += "http://ex.org/n" + std::to_string(e(rng)) + "\ta" + std::to_string(a(rng)) + "\tValue " +
                    std::to_string(l(rng)) + "\n";
    }
    return out;
}

}  // namespace fixtures
