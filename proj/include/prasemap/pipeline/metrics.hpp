#pragma once

#include <set>

#include "prasemap/errors.hpp"
#include "prasemap/kg/io.hpp"
#include "prasemap/pr/export.hpp"

namespace prase {

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    static double harmonic_mean(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

    static Metrics from_precision_recall(double p, double r) { return {p, r, harmonic_mean(p, r)}; }
};

inline Metrics evaluate_metrics(const std::set<NamePair>& predicted, const std::set<NamePair>& reference) {
    if (reference.empty()) throw EmptyReference();
    std::size_t hits = 0;
    for (const auto& p : predicted) hits += reference.count(p);
    const double precision = predicted.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(predicted.size());
    const double recall = static_cast<double>(hits) / static_cast<double>(reference.size());
    return Metrics::from_precision_recall(precision, recall);
}

// Scores only what would be exported: entity mappings at or above
// theta_output that are not frozen negatives.
inline Metrics evaluate_metrics(const PRState& state, double theta_output, const std::set<NamePair>& reference) {
    return evaluate_metrics(exported_pairs(state, theta_output), reference);
}

}  // namespace prase
