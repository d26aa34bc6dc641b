#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "prasemap/prasemap.hpp"

using namespace prase;

TEST(Metrics, HarmonicMeanOfPublishedRows) {
    EXPECT_NEAR(Metrics::from_precision_recall(0.80588, 0.37110).f1, 0.50818, 1e-5);
    EXPECT_NEAR(Metrics::from_precision_recall(0.83833, 0.61973).f1, 0.71265, 1e-5);
}

TEST(Metrics, ZeroDenominator) {
    const auto m = Metrics::from_precision_recall(0.0, 0.0);
    EXPECT_EQ(m.f1, 0.0);
}

TEST(Metrics, PerfectPrediction) {
    const std::set<NamePair> ref{{"a", "b"}, {"c", "d"}};
    const auto m = evaluate_metrics(ref, ref);
    EXPECT_EQ(m.precision, 1.0);
    EXPECT_EQ(m.recall, 1.0);
    EXPECT_EQ(m.f1, 1.0);
}

TEST(Metrics, EmptyPrediction) {
    const auto m = evaluate_metrics(std::set<NamePair>{}, {{"a", "b"}});
    EXPECT_EQ(m.precision, 0.0);
    EXPECT_EQ(m.recall, 0.0);
    EXPECT_EQ(m.f1, 0.0);
}

TEST(Metrics, EmptyReferenceThrows) {
    EXPECT_THROW(evaluate_metrics(std::set<NamePair>{{"a", "b"}}, {}), EmptyReference);
}

TEST(Metrics, CountsOnlyExportedMappings) {
    PRState s;
    s.kg_left = fixtures::kg("a\tr\tb\n", "", Side::Left);
    s.kg_right = fixtures::kg("x\tr\ty\n", "", Side::Right);
    s.mappings.upsert({0, 0, MappingKind::Entity, 0.8, false, MappingSource::PR});      // a-x, correct
    s.mappings.upsert({1, 0, MappingKind::Entity, 0.05, false, MappingSource::PR});     // below threshold
    s.mappings.upsert({1, 1, MappingKind::Entity, 0.0, true, MappingSource::Feedback});  // frozen negative
    const auto m = evaluate_metrics(s, 0.1, {{"a", "x"}, {"b", "y"}});
    EXPECT_EQ(m.precision, 1.0);
    EXPECT_EQ(m.recall, 0.5);
    EXPECT_DOUBLE_EQ(m.f1, 2.0 / 3.0);
}

TEST(MetricsProperty, AddingCorrectMappingNeverLowersRecall) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 500; ++trial) {
        std::set<NamePair> reference, predicted;
        const int n = 1 + static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i) reference.emplace("l" + std::to_string(i), "r" + std::to_string(i));
        for (int i = 0; i < n; ++i) {
            if (rng() % 2) predicted.emplace("l" + std::to_string(i), "r" + std::to_string(rng() % 3 ? i : i + 1));
        }
        const auto before = evaluate_metrics(predicted, reference);
        std::vector<NamePair> missing;
        for (const auto& p : reference) {
            if (!predicted.count(p)) missing.push_back(p);
        }
        if (missing.empty()) continue;
        predicted.insert(missing[rng() % missing.size()]);
        const auto after = evaluate_metrics(predicted, reference);
        ASSERT_GT(after.recall, before.recall);
        ASSERT_GE(after.precision, before.precision);
    }
}
