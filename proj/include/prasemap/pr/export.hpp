#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <set>
#include <string>
#include <vector>

#include "prasemap/kg/io.hpp"
#include "prasemap/pr/state.hpp"

namespace prase {

inline bool is_exported(const Mapping& m, double theta_output) {
    if (m.kind != MappingKind::Entity) return false;
    if (m.frozen && m.probability == 0.0) return false;
    return m.probability >= theta_output;
}

// Exported entity mappings, by descending probability then by the
// lexicographic (left, right) identifier pair.
inline std::vector<Mapping> exported_mappings(const PRState& state, double theta_output) {
    std::vector<Mapping> out;
    for (const auto& m : state.mappings.of_kind(MappingKind::Entity)) {
        if (is_exported(m, theta_output)) out.push_back(m);
    }
    const auto& L = state.left();
    const auto& R = state.right();
    std::sort(out.begin(), out.end(), [&](const Mapping& a, const Mapping& b) {
        if (a.probability != b.probability) return a.probability > b.probability;
        const auto& al = L.entity_name(a.left);
        const auto& bl = L.entity_name(b.left);
        if (al != bl) return al < bl;
        return R.entity_name(a.right) < R.entity_name(b.right);
    });
    return out;
}

inline std::set<NamePair> exported_pairs(const PRState& state, double theta_output) {
    std::set<NamePair> pairs;
    for (const auto& m : exported_mappings(state, theta_output)) {
        pairs.emplace(state.left().entity_name(m.left), state.right().entity_name(m.right));
    }
    return pairs;
}

// `left<TAB>right<TAB>probability` with six decimals, no header.
inline std::string export_mappings_tsv(const PRState& state, double theta_output) {
    std::string out;
    char prob[32];
    for (const auto& m : exported_mappings(state, theta_output)) {
        std::snprintf(prob, sizeof prob, "%.6f", m.probability);
        out += state.left().entity_name(m.left);
        out += '\t';
        out += state.right().entity_name(m.right);
        out += '\t';
        out += prob;
        out += '\n';
    }
    return out;
}

struct ExportedMapping {
    std::string left;
    std::string right;
    double probability = 0.0;
};

// Reads the export format back.
inline std::vector<ExportedMapping> parse_mappings_tsv(std::istream& in, const std::string& source = "mappings") {
    std::vector<ExportedMapping> out;
    detail::for_each_tsv_row(in, 3, source, [&](const std::vector<std::string_view>& f, std::size_t line) {
        const std::string text(f[2]);
        char* end = nullptr;
        const double p = std::strtod(text.c_str(), &end);
        if (text.empty() || *end != '\0' || !(p >= 0.0 && p <= 1.0)) throw MalformedLine(line, source);
        out.push_back({std::string(f[0]), std::string(f[1]), p});
    });
    return out;
}

inline std::vector<ExportedMapping> parse_mappings_string(const std::string& text) {
    std::istringstream in(text);
    return parse_mappings_tsv(in);
}

}  // namespace prase
