#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "prasemap/errors.hpp"
#include "prasemap/kg/knowledge_graph.hpp"

namespace prase {

struct ParseReport {
    std::size_t relation_lines = 0;
    std::size_t attribute_lines = 0;
    std::size_t duplicates = 0;
};

namespace detail {

// Splits a TSV line into exactly `fields` parts; returns false otherwise.
inline bool split_tabs(std::string_view line, std::size_t fields, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return out.size() == fields;
}

inline bool is_blank(std::string_view line) {
    for (char c : line) {
        if (!is_space(c)) return false;
    }
    return true;
}

template <typename OnFields>
void for_each_tsv_row(std::istream& in, std::size_t fields, const std::string& source, OnFields&& on_fields) {
    std::string line;
    std::vector<std::string_view> parts;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;
        if (!split_tabs(line, fields, parts)) throw MalformedLine(line_no, source);
        if constexpr (std::is_invocable_v<OnFields&, const std::vector<std::string_view>&, std::size_t>) {
            on_fields(parts, line_no);
        } else {
            on_fields(parts);
        }
    }
}

}  // namespace detail

inline KnowledgeGraph parse_kg(std::istream& rel_source, std::istream& attr_source, Side side,
                               ParseReport* report = nullptr) {
    KnowledgeGraphBuilder builder(side);
    ParseReport local;
    detail::for_each_tsv_row(rel_source, 3, std::string(to_string(side)) + " relation triples",
                             [&](const std::vector<std::string_view>& f) {
                                 ++local.relation_lines;
                                 builder.add_relation_triple(f[0], f[1], f[2]);
                             });
    detail::for_each_tsv_row(attr_source, 3, std::string(to_string(side)) + " attribute triples",
                             [&](const std::vector<std::string_view>& f) {
                                 ++local.attribute_lines;
                                 builder.add_attribute_triple(f[0], f[1], f[2]);
                             });
    local.duplicates = builder.duplicates();
    if (report) *report = local;
    return std::move(builder).build();
}

inline KnowledgeGraph parse_kg_strings(const std::string& rel_text, const std::string& attr_text, Side side,
                                       ParseReport* report = nullptr) {
    std::istringstream rel(rel_text);
    std::istringstream attr(attr_text);
    return parse_kg(rel, attr, side, report);
}

inline KnowledgeGraph load_kg(const std::string& rel_path, const std::string& attr_path, Side side,
                              ParseReport* report = nullptr) {
    std::ifstream rel(rel_path);
    if (!rel) throw Error("cannot open " + rel_path);
    std::ifstream attr(attr_path);
    if (!attr) throw Error("cannot open " + attr_path);
    return parse_kg(rel, attr, side, report);
}

// Writes the KG back in the two-file TSV layout. Literals are written in
// normalized form, so reparsing the output reproduces the same triple sets.
inline void write_kg(const KnowledgeGraph& kg, std::ostream& rel_out, std::ostream& attr_out) {
    for (const auto& t : kg.relation_triples()) {
        rel_out << kg.entity_name(t.head) << '\t' << kg.relation_name(t.relation) << '\t' << kg.entity_name(t.tail)
                << '\n';
    }
    for (const auto& t : kg.attribute_triples()) {
        attr_out << kg.entity_name(t.entity) << '\t' << kg.attribute_name(t.attribute) << '\t'
                 << kg.literal(t.literal) << '\n';
    }
}

using NamePair = std::pair<std::string, std::string>;

// Reference alignment: `left<TAB>right` per line.
inline std::set<NamePair> parse_reference(std::istream& in, const std::string& source = "reference alignment") {
    std::set<NamePair> pairs;
    detail::for_each_tsv_row(in, 2, source, [&](const std::vector<std::string_view>& f) {
        pairs.emplace(std::string(f[0]), std::string(f[1]));
    });
    return pairs;
}

inline std::set<NamePair> parse_reference_string(const std::string& text) {
    std::istringstream in(text);
    return parse_reference(in);
}

inline std::set<NamePair> load_reference(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return parse_reference(in, path);
}

}  // namespace prase
