#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "prasemap/errors.hpp"
#include "prasemap/kg/io.hpp"

namespace prase::bench {

// Shape of the generated left KG and of the perturbation producing the right
// one. Relation triples come from three families: near-bijective relations
// (each head and tail used at most once per relation), grouped relations
// whose tails are drawn from a smaller pool (several heads per tail), and
// many-to-one relations into a small set of hub entities.
struct SyntheticOptions {
    std::uint64_t seed = 1;
    std::size_t num_entities = 1000;
    std::size_t num_hubs = 12;
    std::size_t injective_relations = 3;
    std::size_t triples_per_injective_relation = 330;
    std::size_t grouped_relations = 3;
    std::size_t triples_per_grouped_relation = 330;
    std::size_t group_pool = 110;  // distinct tails per grouped relation
    double country_rate = 0.7;     // share of regular entities with a hub "country"
    double genre_rate = 0.35;      // share with a hub "genre"
    double birth_year_rate = 0.5;
    double identifier_rate = 0.15;
    double status_rate = 0.8;
    double rename_fraction = 0.6;  // right-side identifiers replaced by opaque ones
    double drop_fraction = 0.2;    // right-side triples removed
};

struct SyntheticBenchmark {
    std::string left_rel;
    std::string left_attr;
    std::string right_rel;
    std::string right_attr;
    std::set<NamePair> reference;

    std::string reference_tsv() const {
        std::string out;
        for (const auto& [l, r] : reference) out += l + '\t' + r + '\n';
        return out;
    }
};

namespace detail {

inline std::string pseudo_word(std::mt19937_64& rng) {
    static constexpr std::string_view consonants = "bdfgklmnprstvz";
    static constexpr std::string_view vowels = "aeiou";
    std::uniform_int_distribution<int> syllables(2, 3);
    std::uniform_int_distribution<std::size_t> c(0, consonants.size() - 1);
    std::uniform_int_distribution<std::size_t> v(0, vowels.size() - 1);
    std::string w;
    const int n = syllables(rng);
    for (int i = 0; i < n; ++i) {
        w += consonants[c(rng)];
        w += vowels[v(rng)];
    }
    w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

}  // namespace detail

inline SyntheticBenchmark generate_synthetic_benchmark(const SyntheticOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };

    const std::size_t n = opt.num_entities;
    const std::size_t hubs = std::min(opt.num_hubs, n);
    std::vector<std::string> names;
    std::unordered_set<std::string> used;
    while (names.size() < n) {
        auto name = detail::pseudo_word(rng) + "_" + detail::pseudo_word(rng);
        if (used.insert(name).second) names.push_back(std::move(name));
    }

    // relation triples over entity indices; hubs are indices [0, hubs)
    std::vector<std::array<std::size_t, 3>> rel;  // head, relation index, tail
    std::vector<std::string> relation_names;
    std::vector<std::size_t> regular(n - hubs);
    for (std::size_t i = 0; i < regular.size(); ++i) regular[i] = hubs + i;

    for (std::size_t r = 0; r < opt.injective_relations; ++r) {
        relation_names.push_back("linkedTo" + std::to_string(r + 1));
        auto heads = regular;
        auto tails = regular;
        std::shuffle(heads.begin(), heads.end(), rng);
        std::shuffle(tails.begin(), tails.end(), rng);
        const std::size_t count = std::min(opt.triples_per_injective_relation, regular.size());
        std::size_t made = 0;
        for (std::size_t i = 0; i < heads.size() && made < count; ++i) {
            if (heads[i] == tails[i]) continue;
            rel.push_back({heads[i], r, tails[i]});
            ++made;
        }
    }
    for (std::size_t r = 0; r < opt.grouped_relations; ++r) {
        const std::size_t rid = relation_names.size();
        relation_names.push_back("memberOf" + std::to_string(r + 1));
        auto heads = regular;
        auto pool = regular;
        std::shuffle(heads.begin(), heads.end(), rng);
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(std::clamp<std::size_t>(opt.group_pool, 1, pool.size()));
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        const std::size_t count = std::min(opt.triples_per_grouped_relation, heads.size());
        for (std::size_t i = 0; i < count; ++i) {
            const auto t = pool[pick(rng)];
            if (t != heads[i]) rel.push_back({heads[i], rid, t});
        }
    }
    if (hubs > 0) {
        const std::size_t country = relation_names.size();
        relation_names.push_back("country");
        const std::size_t genre = relation_names.size();
        relation_names.push_back("genre");
        const std::size_t half = std::max<std::size_t>(1, hubs / 2);
        std::uniform_int_distribution<std::size_t> pick_country(0, half - 1);
        std::uniform_int_distribution<std::size_t> pick_genre(hubs > half ? half : 0, hubs - 1);
        for (auto e : regular) {
            if (chance(opt.country_rate)) rel.push_back({e, country, pick_country(rng)});
            if (chance(opt.genre_rate)) rel.push_back({e, genre, pick_genre(rng)});
        }
    }

    struct Attr {
        std::size_t entity;
        int kind;  // 0 birthYear, 1 identifier, 2 status
        std::string value;
    };
    static const char* statuses[] = {"active", "retired", "deceased", "unknown"};
    std::vector<Attr> attrs;
    std::uniform_int_distribution<int> year(1900, 2005), status(0, 3);
    std::uniform_int_distribution<int> code(10000, 99999);
    for (auto e : regular) {
        if (chance(opt.birth_year_rate)) attrs.push_back({e, 0, std::to_string(year(rng))});
        if (chance(opt.identifier_rate)) attrs.push_back({e, 1, "ID-" + std::to_string(code(rng))});
        if (chance(opt.status_rate)) attrs.push_back({e, 2, statuses[status(rng)]});
    }
    static const char* attribute_names[] = {"birthYear", "identifier", "status"};

    // right-side identifiers
    std::vector<std::string> left_ids(n), right_ids(n);
    std::uniform_int_distribution<std::uint64_t> hex(0, 0xFFFFFFFFFFULL);
    for (std::size_t i = 0; i < n; ++i) {
        left_ids[i] = "http://left.example.org/resource/" + names[i];
        if (chance(opt.rename_fraction)) {
            char buf[24];
            std::snprintf(buf, sizeof buf, "Q%010llx", static_cast<unsigned long long>(hex(rng)));
            right_ids[i] = std::string("http://right.example.org/entity/") + buf;
        } else {
            right_ids[i] = "http://right.example.org/resource/" + names[i];
        }
    }

    SyntheticBenchmark b;
    std::vector<bool> in_left(n, false), in_right(n, false);
    std::vector<std::string> right_rel_lines, right_attr_lines;
    for (const auto& [h, r, t] : rel) {
        b.left_rel += left_ids[h] + '\t' + relation_names[r] + '\t' + left_ids[t] + '\n';
        in_left[h] = in_left[t] = true;
        if (chance(opt.drop_fraction)) continue;
        right_rel_lines.push_back(right_ids[h] + '\t' + relation_names[r] + '\t' + right_ids[t] + '\n');
        in_right[h] = in_right[t] = true;
    }
    for (const auto& a : attrs) {
        b.left_attr += left_ids[a.entity] + '\t' + attribute_names[a.kind] + '\t' + a.value + '\n';
        in_left[a.entity] = true;
        if (chance(opt.drop_fraction)) continue;
        // same values, different surface forms; normalization must reconcile them
        std::string value = a.value;
        if (a.kind == 0) value += "^^xsd:gYear";
        if (a.kind == 2) std::transform(value.begin(), value.end(), value.begin(), ::toupper);
        right_attr_lines.push_back(right_ids[a.entity] + '\t' + attribute_names[a.kind] + '\t' + value + '\n');
        in_right[a.entity] = true;
    }
    std::shuffle(right_rel_lines.begin(), right_rel_lines.end(), rng);
    std::shuffle(right_attr_lines.begin(), right_attr_lines.end(), rng);
    for (const auto& l : right_rel_lines) b.right_rel += l;
    for (const auto& l : right_attr_lines) b.right_attr += l;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_left[i] && in_right[i]) b.reference.emplace(left_ids[i], right_ids[i]);
    }
    return b;
}

// Dataset directory layout shared by the CLI and the task service.
struct DatasetFiles {
    static constexpr const char* left_rel = "left_rel.tsv";
    static constexpr const char* left_attr = "left_attr.tsv";
    static constexpr const char* right_rel = "right_rel.tsv";
    static constexpr const char* right_attr = "right_attr.tsv";
    static constexpr const char* reference = "reference.tsv";
};

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

inline void write_benchmark(const SyntheticBenchmark& b, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / DatasetFiles::left_rel, b.left_rel);
    write_text_file(dir / DatasetFiles::left_attr, b.left_attr);
    write_text_file(dir / DatasetFiles::right_rel, b.right_rel);
    write_text_file(dir / DatasetFiles::right_attr, b.right_attr);
    write_text_file(dir / DatasetFiles::reference, b.reference_tsv());
}

}  // namespace prase::bench
