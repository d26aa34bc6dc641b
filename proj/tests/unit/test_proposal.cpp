#include <random>
#include <set>

#include <gtest/gtest.h>

#include "prasemap/prasemap.hpp"

using namespace prase;

namespace {

EmbeddingSet make_set(const std::vector<std::vector<double>>& left, const std::vector<std::vector<double>>& right) {
    EmbeddingSet e;
    e.dimension = left.empty() ? right.at(0).size() : left.at(0).size();
    e.vectors_left = VectorTable(left.size(), e.dimension);
    e.vectors_right = VectorTable(right.size(), e.dimension);
    for (std::size_t i = 0; i < left.size(); ++i) std::copy(left[i].begin(), left[i].end(), e.vectors_left.row(i).begin());
    for (std::size_t i = 0; i < right.size(); ++i) {
        std::copy(right[i].begin(), right[i].end(), e.vectors_right.row(i).begin());
    }
    return e;
}

}  // namespace

TEST(Propose, IdenticalVectorsGiveCertainMapping) {
    const auto e = make_set({{1, 0, 0}, {0, 1, 0}}, {{0, 0, 1}, {1, 0, 0}});
    const auto out = propose_mappings(e, SEConfig{});
    ASSERT_EQ(out.size(), 1u);
    const auto m = out.of_kind(MappingKind::Entity)[0];
    EXPECT_EQ(m.left, 0u);
    EXPECT_EQ(m.right, 1u);
    EXPECT_EQ(m.probability, 1.0);
    EXPECT_EQ(m.source, MappingSource::SE);
    EXPECT_FALSE(m.frozen);
}

TEST(Propose, BelowThresholdExcluded) {
    // cosine 0.5 between the only two vectors
    const auto e = make_set({{1, 0}}, {{0.5, std::sqrt(0.75)}});
    EXPECT_TRUE(propose_mappings(e, SEConfig{}).empty());
    SEConfig loose;
    loose.tau_se = 0.5 - 1e-9;
    EXPECT_EQ(propose_mappings(e, loose).size(), 1u);
}

TEST(Propose, RequiresMutualNearestNeighbours) {
    // l0's nearest is r0, but r0's nearest is l1
    const auto e = make_set({{1, 0.2}, {1, 0.05}}, {{1, 0}, {0, 1}});
    SEConfig loose;
    loose.tau_se = 0.1;
    const auto out = propose_mappings(e, loose);
    EXPECT_EQ(out.find(MappingKind::Entity, 0, 0), nullptr);
    EXPECT_NE(out.find(MappingKind::Entity, 1, 0), nullptr);
}

TEST(Propose, EmptySides) {
    EmbeddingSet e;
    e.dimension = 2;
    e.vectors_left = VectorTable(0, 2);
    e.vectors_right = VectorTable(0, 2);
    EXPECT_TRUE(propose_mappings(e, SEConfig{}).empty());
}

TEST(ProposeProperty, PartialInjectionWithinThreshold) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<std::size_t> size(1, 30);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::vector<double>> left(size(rng), std::vector<double>(3)), right(size(rng), std::vector<double>(3));
        for (auto& v : left) {
            for (auto& x : v) x = g(rng);
        }
        for (auto& v : right) {
            for (auto& x : v) x = g(rng);
        }
        // exact duplicates create ties
        if (trial % 3 == 0 && left.size() > 1) left[1] = left[0];
        if (trial % 3 == 0) right[0] = left[0];
        SEConfig config;
        config.tau_se = trial % 2 ? 0.9 : 0.3;
        const auto out = propose_mappings(make_set(left, right), config);
        std::set<EntityId> ls, rs;
        for (const auto& m : out.of_kind(MappingKind::Entity)) {
            ASSERT_TRUE(ls.insert(m.left).second);
            ASSERT_TRUE(rs.insert(m.right).second);
            ASSERT_GE(m.probability, config.tau_se);
            ASSERT_LE(m.probability, 1.0);
        }
    }
}
