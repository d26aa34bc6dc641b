#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "prasemap/prasemap.hpp"

using namespace prase;

namespace {

using TripleSet = std::set<std::tuple<std::string, std::string, std::string>>;

TripleSet relation_set(const KnowledgeGraph& kg) {
    TripleSet s;
    for (const auto& t : kg.relation_triples()) {
        s.emplace(kg.entity_name(t.head), kg.relation_name(t.relation), kg.entity_name(t.tail));
    }
    return s;
}

TripleSet attribute_set(const KnowledgeGraph& kg) {
    TripleSet s;
    for (const auto& t : kg.attribute_triples()) {
        s.emplace(kg.entity_name(t.entity), kg.attribute_name(t.attribute), kg.literal(t.literal));
    }
    return s;
}

}  // namespace

TEST(ParseKg, CountsEntitiesRelationsAndTriples) {
    const auto kg = parse_kg_strings("a\tr\tb\na\tr\tc\n", "a\thasName\t\"x\"\n", Side::Left);
    EXPECT_EQ(kg.num_entities(), 3u);
    EXPECT_EQ(kg.num_relations(), 1u);
    EXPECT_EQ(kg.num_predicates(), 3u);  // r, inverse(r), hasName
    EXPECT_EQ(kg.num_attributes(), 1u);
    EXPECT_EQ(kg.relation_triples().size(), 2u);
    EXPECT_EQ(kg.attribute_triples().size(), 1u);
    EXPECT_EQ(kg.side(), Side::Left);
}

TEST(ParseKg, EmptyAttributeSource) {
    const auto kg = parse_kg_strings("a\tr\tb\n", "", Side::Right);
    EXPECT_EQ(kg.attribute_triples().size(), 0u);
    EXPECT_EQ(kg.num_entities(), 2u);
}

TEST(ParseKg, MalformedLineReportsLineNumber) {
    try {
        parse_kg_strings("a\tr\n", "", Side::Left);
        FAIL() << "expected MalformedLine";
    } catch (const MalformedLine& e) {
        EXPECT_EQ(e.line(), 1u);
    }
    try {
        parse_kg_strings("a\tr\tb\n\nc\td\n", "", Side::Left);
        FAIL() << "expected MalformedLine";
    } catch (const MalformedLine& e) {
        EXPECT_EQ(e.line(), 3u);  // blank line 2 is skipped but still counted
    }
    EXPECT_THROW(parse_kg_strings("a\tr\tb\n", "a\tp\tx\ty\n", Side::Left), MalformedLine);
}

TEST(ParseKg, BlankLinesAndCarriageReturnsAreIgnored) {
    const auto kg = parse_kg_strings("\n  \na\tr\tb\r\n\n", "a\tp\tV\r\n", Side::Left);
    EXPECT_EQ(kg.relation_triples().size(), 1u);
    EXPECT_EQ(kg.entity_name(kg.relation_triples()[0].tail), "b");
    EXPECT_EQ(kg.literal(kg.attribute_triples()[0].literal), "v");
}

TEST(ParseKg, DuplicatesDroppedAndCounted) {
    ParseReport report;
    const auto kg = parse_kg_strings("a\tr\tb\na\tr\tb\n", "a\tp\tX\na\tp\t x \n", Side::Left, &report);
    EXPECT_EQ(kg.relation_triples().size(), 1u);
    EXPECT_EQ(kg.attribute_triples().size(), 1u);  // literals compare after normalization
    EXPECT_EQ(report.duplicates, 2u);
    EXPECT_EQ(report.relation_lines, 2u);
    EXPECT_EQ(report.attribute_lines, 2u);
}

TEST(ParseKg, LabelsAndLiteralsAreNormalized) {
    const auto kg = parse_kg_strings("http://x.org/Mariah_Carey\tr\thttp://x.org/a#Florin%20Tene\n",
                                     "http://x.org/Mariah_Carey\tname\t  Mariah   CAREY@en\n", Side::Left);
    EXPECT_EQ(kg.entity_label(*kg.find_entity("http://x.org/Mariah_Carey")), "mariah_carey");
    EXPECT_EQ(kg.entity_label(*kg.find_entity("http://x.org/a#Florin%20Tene")), "florin tene");
    EXPECT_TRUE(kg.find_literal("mariah carey").has_value());
}

TEST(ParseKg, InverseStatementsAreQueryable) {
    const auto kg = parse_kg_strings("a\tr\tb\n", "", Side::Left);
    const auto a = *kg.find_entity("a");
    const auto b = *kg.find_entity("b");
    const auto r = *kg.find_relation("r");
    ASSERT_EQ(kg.out_edges(b).size(), 1u);
    EXPECT_EQ(kg.out_edges(b)[0].predicate, kg.inverse(r));
    EXPECT_EQ(kg.out_edges(b)[0].target, a);
    EXPECT_TRUE(kg.is_inverse(kg.inverse(r)));
    EXPECT_EQ(kg.predicate_name(kg.inverse(r)), "inverse(r)");
    ASSERT_EQ(kg.predicate_pairs(kg.inverse(r)).size(), 1u);
    EXPECT_EQ(kg.predicate_pairs(kg.inverse(r))[0].head, b);
    EXPECT_EQ(kg.predicate_pairs(kg.inverse(r))[0].tail, a);
}

TEST(ParseKg, AttributeStatementsIndexByLiteral) {
    const auto kg = parse_kg_strings("", "a\tp\tx\nb\tp\tx\n", Side::Left);
    const auto x = *kg.find_literal("x");
    EXPECT_EQ(kg.literal_in_edges(x).size(), 2u);
    const auto p = kg.attribute_predicate(*kg.find_attribute("p"));
    EXPECT_TRUE(kg.is_attribute(p));
    EXPECT_EQ(kg.predicate_name(p), "p");
}

TEST(KnowledgeGraphProperty, EveryReferencedIdExists) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto text = fixtures::random_kg_text(rng, 20, 40, 20);
        const auto kg = parse_kg_strings(text.rel, text.attr, Side::Left);
        for (const auto& t : kg.relation_triples()) {
            ASSERT_LT(t.head, kg.num_entities());
            ASSERT_LT(t.tail, kg.num_entities());
            ASSERT_LT(t.relation, kg.num_relations());
        }
        for (const auto& t : kg.attribute_triples()) {
            ASSERT_LT(t.entity, kg.num_entities());
            ASSERT_LT(t.attribute, kg.num_attributes());
            ASSERT_LT(t.literal, kg.num_literals());
        }
        // set semantics: no duplicate triples
        ASSERT_EQ(relation_set(kg).size(), kg.relation_triples().size());
        ASSERT_EQ(attribute_set(kg).size(), kg.attribute_triples().size());
    }
}

TEST(KnowledgeGraphProperty, SerializeAndReparseRoundTrips) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto text = fixtures::random_kg_text(rng, 15, 30, 15);
        const auto kg = parse_kg_strings(text.rel, text.attr, Side::Left);
        std::ostringstream rel, attr;
        write_kg(kg, rel, attr);
        const auto again = parse_kg_strings(rel.str(), attr.str(), Side::Left);
        ASSERT_EQ(relation_set(again), relation_set(kg));
        ASSERT_EQ(attribute_set(again), attribute_set(kg));
    }
}

TEST(Reference, ParsesPairs) {
    const auto ref = parse_reference_string("a\tb\n\nc\td\na\tb\n");
    EXPECT_EQ(ref.size(), 2u);
    EXPECT_TRUE(ref.count({"a", "b"}));
    EXPECT_THROW(parse_reference_string("a\tb\tc\n"), MalformedLine);
}
