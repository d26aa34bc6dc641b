#pragma once

#include <algorithm>
#include <vector>

#include "prasemap/kg/knowledge_graph.hpp"

namespace prase {

// fun(p) = distinct heads / statements, fun_inv(p) = distinct tails / statements,
// per directed predicate. Because inverse predicates list reversed pairs,
// fun(r⁻) = fun_inv(r) falls out of the same definition.
class FunctionalityTable {
public:
    FunctionalityTable() = default;
    FunctionalityTable(std::vector<double> fun, std::vector<double> fun_inv)
        : fun_(std::move(fun)), fun_inv_(std::move(fun_inv)) {}

    bool contains(PredicateId p) const noexcept { return p < fun_.size() && fun_[p] > 0.0; }
    double fun(PredicateId p) const noexcept { return p < fun_.size() ? fun_[p] : 0.0; }
    double fun_inv(PredicateId p) const noexcept { return p < fun_inv_.size() ? fun_inv_[p] : 0.0; }
    std::size_t size() const noexcept { return fun_.size(); }

private:
    std::vector<double> fun_;
    std::vector<double> fun_inv_;
};

inline FunctionalityTable compute_functionalities(const KnowledgeGraph& kg) {
    const std::size_t n = kg.num_predicates();
    std::vector<double> fun(n, 0.0), fun_inv(n, 0.0);
    std::vector<std::uint32_t> tails;
    for (PredicateId p = 0; p < n; ++p) {
        const auto pairs = kg.predicate_pairs(p);
        if (pairs.empty()) continue;
        // pairs are sorted by head, so distinct heads are runs
        std::size_t heads = 0;
        tails.clear();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (i == 0 || pairs[i].head != pairs[i - 1].head) ++heads;
            tails.push_back(pairs[i].tail);
        }
        std::sort(tails.begin(), tails.end());
        const auto distinct_tails = static_cast<std::size_t>(std::unique(tails.begin(), tails.end()) - tails.begin());
        const double total = static_cast<double>(pairs.size());
        fun[p] = static_cast<double>(heads) / total;
        fun_inv[p] = static_cast<double>(distinct_tails) / total;
    }
    return {std::move(fun), std::move(fun_inv)};
}

}  // namespace prase
