#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prasemap/pr/config.hpp"
#include "prasemap/pr/state.hpp"
#include "prasemap/se/embedding.hpp"

namespace prase {

enum class SubsumptionDirection : std::uint8_t { LR, RL };

// alpha * pr_old + (1 - alpha) * sim, written so that equal inputs come back
// unchanged and rounding never leaves [min, max].
inline double blend_probability(double pr_old, double sim, double alpha) {
    const double b = sim + alpha * (pr_old - sim);
    return std::clamp(b, std::min(pr_old, sim), std::max(pr_old, sim));
}

namespace detail {

struct ScoredPair {
    std::uint32_t left;
    std::uint32_t right;
    double probability;
};

// Greedy one-to-one selection by descending probability, ties kept: a pair
// survives unless one of its entities already holds a surviving pair of
// strictly higher probability. Entities in `claimed_*` enter with the given
// probability already held. Returns the survivors in input order.
inline std::vector<bool> greedy_assignment(const std::vector<ScoredPair>& pairs, std::vector<double> claimed_left,
                                           std::vector<double> claimed_right) {
    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pairs[a].probability > pairs[b].probability; });
    std::vector<bool> keep(pairs.size(), false);
    for (auto i : order) {
        const auto& p = pairs[i];
        if (claimed_left[p.left] > p.probability || claimed_right[p.right] > p.probability) continue;
        keep[i] = true;
        claimed_left[p.left] = std::max(claimed_left[p.left], p.probability);
        claimed_right[p.right] = std::max(claimed_right[p.right], p.probability);
    }
    return keep;
}

}  // namespace detail

// Read-only view of the mapping probabilities of one iteration, indexed for
// the update loops.
class EquivalenceSnapshot {
public:
    using Counterparts = std::vector<std::pair<std::uint32_t, double>>;

    explicit EquivalenceSnapshot(const PRState& state)
        : entity_l2r_(state.left().num_entities()),
          entity_r2l_(state.right().num_entities()),
          literal_l2r_(state.left().num_literals()) {
        for (const auto& [key, m] : state.mappings) {
            if (m.probability <= 0.0) continue;
            switch (key.kind) {
                case MappingKind::Entity:
                    entity_l2r_[m.left].emplace_back(m.right, m.probability);
                    entity_r2l_[m.right].emplace_back(m.left, m.probability);
                    break;
                case MappingKind::Literal:
                    literal_l2r_[m.left].emplace_back(m.right, m.probability);
                    break;
                case MappingKind::RelSubsumptionLR:
                    sub_lr_[pack(m.left, m.right)] = m.probability;
                    break;
                case MappingKind::RelSubsumptionRL:
                    sub_rl_[pack(m.left, m.right)] = m.probability;
                    break;
            }
        }
        keep_assigned();
    }

    const Counterparts& entity_counterparts(EntityId x) const { return entity_l2r_[x]; }
    const Counterparts& entity_counterparts_of_right(EntityId y) const { return entity_r2l_[y]; }
    const Counterparts& literal_counterparts(LiteralId l) const { return literal_l2r_[l]; }

    double entity(EntityId x, EntityId y) const { return lookup(entity_l2r_[x], y); }
    double literal(LiteralId x, LiteralId y) const { return lookup(literal_l2r_[x], y); }

    // P(left_pred ⊆ right_pred) and P(right_pred ⊆ left_pred).
    double sub_lr(PredicateId l, PredicateId r) const { return find(sub_lr_, pack(l, r)); }
    double sub_rl(PredicateId l, PredicateId r) const { return find(sub_rl_, pack(l, r)); }

private:
    // Entity mappings count as evidence only after greedy one-to-one
    // selection. Weak non-maximal pairs would otherwise accumulate through the
    // noisy-or and saturate hub entities.
    void keep_assigned() {
        std::vector<detail::ScoredPair> pairs;
        for (std::size_t x = 0; x < entity_l2r_.size(); ++x) {
            for (const auto& [y, p] : entity_l2r_[x]) pairs.push_back({static_cast<std::uint32_t>(x), y, p});
        }
        const auto keep = detail::greedy_assignment(pairs, std::vector<double>(entity_l2r_.size(), 0.0),
                                                    std::vector<double>(entity_r2l_.size(), 0.0));
        for (auto& list : entity_l2r_) list.clear();
        for (auto& list : entity_r2l_) list.clear();
        // pairs are in (left, right) order, so both list families stay sorted
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (!keep[i]) continue;
            entity_l2r_[pairs[i].left].emplace_back(pairs[i].right, pairs[i].probability);
            entity_r2l_[pairs[i].right].emplace_back(pairs[i].left, pairs[i].probability);
        }
    }

    static std::uint64_t pack(std::uint32_t a, std::uint32_t b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

    static double find(const std::unordered_map<std::uint64_t, double>& m, std::uint64_t k) {
        auto it = m.find(k);
        return it == m.end() ? 0.0 : it->second;
    }

    static double lookup(const Counterparts& list, std::uint32_t id) {
        auto it = std::lower_bound(list.begin(), list.end(), id,
                                   [](const auto& entry, std::uint32_t v) { return entry.first < v; });
        return (it != list.end() && it->first == id) ? it->second : 0.0;
    }

    std::vector<Counterparts> entity_l2r_;
    std::vector<Counterparts> entity_r2l_;
    std::vector<Counterparts> literal_l2r_;
    std::unordered_map<std::uint64_t, double> sub_lr_;
    std::unordered_map<std::uint64_t, double> sub_rl_;
};

namespace detail {

// Probability that the objects of two statements denote the same thing.
inline double object_equivalence(const EquivalenceSnapshot& snap, bool attribute, std::uint32_t u, std::uint32_t v) {
    return attribute ? snap.literal(u, v) : snap.entity(u, v);
}

inline double evidence_factor(const PRState& state, const EquivalenceSnapshot& snap, PredicateId r, PredicateId s,
                              double p_uv) {
    return (1.0 - snap.sub_rl(r, s) * state.funcs_left.fun_inv(r) * p_uv) *
           (1.0 - snap.sub_lr(r, s) * state.funcs_right.fun_inv(s) * p_uv);
}

}  // namespace detail

// Noisy-or over every pair of statements r(x, u) on the left and s(y, v) on the
// right (inverse relations and attributes included):
//   1 - Π [1 - P(s⊆r)·fun_inv(r)·P(u≡v)] · [1 - P(r⊆s)·fun_inv(s)·P(u≡v)]
inline double entity_equivalence_update(const PRState& state, const EquivalenceSnapshot& snap, EntityId x,
                                        EntityId y) {
    const auto& L = state.left();
    const auto& R = state.right();
    double product = 1.0;
    for (const auto& a : L.out_edges(x)) {
        const bool attribute = L.is_attribute(a.predicate);
        for (const auto& b : R.out_edges(y)) {
            if (R.is_attribute(b.predicate) != attribute) continue;
            const double p = detail::object_equivalence(snap, attribute, a.target, b.target);
            if (p <= 0.0) continue;
            product *= detail::evidence_factor(state, snap, a.predicate, b.predicate, p);
        }
    }
    return std::clamp(1.0 - product, 0.0, 1.0);
}

inline double entity_equivalence_update(const PRState& state, EntityId x, EntityId y) {
    return entity_equivalence_update(state, EquivalenceSnapshot(state), x, y);
}

// Direct evaluation of one subsumption. For LR, r is a left predicate and s a
// right one and the result estimates P(r ⊆ s); for RL the roles swap (r is
// the right predicate, s the left one).
//   Σ_(h,t)∈r max_(h',t')∈s P(h≡h')P(t≡t')  /  Σ_(h,t)∈r max_(h',t') any P(h≡h')P(t≡t')
inline double subsumption_update(const PRState& state, const EquivalenceSnapshot& snap, PredicateId r, PredicateId s,
                                 SubsumptionDirection direction) {
    const bool lr = direction == SubsumptionDirection::LR;
    const auto& from = lr ? state.left() : state.right();
    const auto& to = lr ? state.right() : state.left();
    const bool attribute = from.is_attribute(r);
    if (to.is_attribute(s) != attribute) return 0.0;

    auto pair_prob = [&](std::uint32_t h, std::uint32_t t, std::uint32_t h2, std::uint32_t t2) {
        const double ph = lr ? snap.entity(h, h2) : snap.entity(h2, h);
        if (ph <= 0.0) return 0.0;
        const double pt = lr ? detail::object_equivalence(snap, attribute, t, t2)
                             : detail::object_equivalence(snap, attribute, t2, t);
        return ph * pt;
    };
    const auto& counterparts_of = [&](EntityId h) -> const EquivalenceSnapshot::Counterparts& {
        return lr ? snap.entity_counterparts(h) : snap.entity_counterparts_of_right(h);
    };

    double numerator = 0.0;
    double denominator = 0.0;
    for (const auto& pr : from.predicate_pairs(r)) {
        double best_s = 0.0;
        double best_any = 0.0;
        for (const auto& [h2, ph] : counterparts_of(pr.head)) {
            for (const auto& e : to.out_edges(h2)) {
                if (to.is_attribute(e.predicate) != attribute) continue;
                const double v = pair_prob(pr.head, pr.tail, h2, e.target);
                best_any = std::max(best_any, v);
                if (e.predicate == s) best_s = std::max(best_s, v);
            }
        }
        numerator += best_s;
        denominator += best_any;
    }
    return denominator > 0.0 ? numerator / denominator : 0.0;
}

namespace detail {

// All subsumptions of one direction in a single pass over the source
// predicates. Writes nonzero values into `out`.
inline void accumulate_subsumptions(const PRState& state, const EquivalenceSnapshot& snap,
                                    SubsumptionDirection direction, MappingStore& out) {
    const bool lr = direction == SubsumptionDirection::LR;
    const auto& from = lr ? state.left() : state.right();
    const auto& to = lr ? state.right() : state.left();
    const auto kind = lr ? MappingKind::RelSubsumptionLR : MappingKind::RelSubsumptionRL;

    std::vector<double> best(to.num_predicates(), 0.0);
    std::vector<double> numerator(to.num_predicates(), 0.0);
    std::vector<PredicateId> touched, touched_total;
    std::vector<bool> in_total(to.num_predicates(), false);

    for (PredicateId r = 0; r < from.num_predicates(); ++r) {
        const bool attribute = from.is_attribute(r);
        double denominator = 0.0;
        touched_total.clear();
        for (const auto& pr : from.predicate_pairs(r)) {
            double best_any = 0.0;
            touched.clear();
            const auto& cps = lr ? snap.entity_counterparts(pr.head) : snap.entity_counterparts_of_right(pr.head);
            for (const auto& [h2, ph] : cps) {
                for (const auto& e : to.out_edges(h2)) {
                    if (to.is_attribute(e.predicate) != attribute) continue;
                    const double pt = lr ? object_equivalence(snap, attribute, pr.tail, e.target)
                                         : object_equivalence(snap, attribute, e.target, pr.tail);
                    const double v = ph * pt;
                    if (v <= 0.0) continue;
                    best_any = std::max(best_any, v);
                    if (best[e.predicate] == 0.0) touched.push_back(e.predicate);
                    best[e.predicate] = std::max(best[e.predicate], v);
                }
            }
            denominator += best_any;
            for (auto s : touched) {
                numerator[s] += best[s];
                best[s] = 0.0;
                if (!in_total[s]) {
                    in_total[s] = true;
                    touched_total.push_back(s);
                }
            }
        }
        std::sort(touched_total.begin(), touched_total.end());
        for (auto s : touched_total) {
            if (denominator > 0.0 && numerator[s] > 0.0) {
                const double p = std::min(1.0, numerator[s] / denominator);
                if (lr) {
                    out.upsert({r, s, kind, p, false, MappingSource::PR});
                } else {
                    out.upsert({s, r, kind, p, false, MappingSource::PR});
                }
            }
            numerator[s] = 0.0;
            in_total[s] = false;
        }
    }
}

}  // namespace detail

// Replaces every subsumption mapping in the state with values recomputed from
// the current entity and literal probabilities.
inline void refresh_subsumptions(PRState& state) {
    const EquivalenceSnapshot snap(state);
    state.mappings.clear_unfrozen(MappingKind::RelSubsumptionLR);
    state.mappings.clear_unfrozen(MappingKind::RelSubsumptionRL);
    detail::accumulate_subsumptions(state, snap, SubsumptionDirection::LR, state.mappings);
    detail::accumulate_subsumptions(state, snap, SubsumptionDirection::RL, state.mappings);
}

namespace detail {

// Reduces a fresh round to its greedy one-to-one selection. Frozen positive
// labels hold their entities at probability 1.
inline void keep_assignment(const PRState& state, std::vector<Mapping>& fresh) {
    std::vector<double> claimed_left(state.left().num_entities(), 0.0);
    std::vector<double> claimed_right(state.right().num_entities(), 0.0);
    for (const auto& m : state.mappings.of_kind(MappingKind::Entity)) {
        if (m.frozen && m.probability > 0.0) claimed_left[m.left] = claimed_right[m.right] = m.probability;
    }
    std::vector<ScoredPair> pairs;
    pairs.reserve(fresh.size());
    for (const auto& m : fresh) pairs.push_back({m.left, m.right, m.probability});
    const auto keep = greedy_assignment(pairs, std::move(claimed_left), std::move(claimed_right));
    std::size_t i = 0;
    std::erase_if(fresh, [&](const Mapping&) { return !keep[i++]; });
}

}  // namespace detail

// One simultaneous update of every candidate entity pair. Candidates are the
// pairs sharing at least one mapped neighbour or literal; all other pairs have
// an empty evidence product and stay at 0. Returns the new non-frozen entity
// probabilities keyed by (left, right), positive values only, reduced to
// the greedy one-to-one selection.
inline std::vector<Mapping> compute_entity_round(const PRState& state, const EquivalenceSnapshot& snap,
                                                 const PRConfig& config, const EmbeddingSet* embeddings) {
    const auto& L = state.left();
    const auto& R = state.right();
    std::vector<double> product(R.num_entities(), 1.0);
    std::vector<bool> seen(R.num_entities(), false);
    std::vector<EntityId> candidates;
    std::vector<Mapping> out;

    for (EntityId x = 0; x < L.num_entities(); ++x) {
        candidates.clear();
        for (const auto& a : L.out_edges(x)) {
            const bool attribute = L.is_attribute(a.predicate);
            const auto& cps = attribute ? snap.literal_counterparts(a.target) : snap.entity_counterparts(a.target);
            for (const auto& [v, p] : cps) {
                const auto incoming = attribute ? R.literal_in_edges(v) : R.in_edges(v);
                for (const auto& b : incoming) {
                    const EntityId y = b.target;
                    if (!seen[y]) {
                        seen[y] = true;
                        candidates.push_back(y);
                    }
                    product[y] *= detail::evidence_factor(state, snap, a.predicate, b.predicate, p);
                }
            }
        }
        std::sort(candidates.begin(), candidates.end());
        for (EntityId y : candidates) {
            double prob = std::clamp(1.0 - product[y], 0.0, 1.0);
            product[y] = 1.0;
            seen[y] = false;
            if (const auto* m = state.mappings.find(MappingKind::Entity, x, y); m && m->frozen) continue;
            if (embeddings) {
                const double sim = cosine_similarity(embeddings->vectors_left.row(x), embeddings->vectors_right.row(y));
                prob = blend_probability(prob, sim, config.alpha);
            }
            if (prob > 0.0) out.push_back({x, y, MappingKind::Entity, prob, false, MappingSource::PR});
        }
    }
    detail::keep_assignment(state, out);
    return out;
}

// Iterates entity equivalences and subsumptions to a fixpoint. Subsumptions
// are refreshed from the incoming entity mappings before the first round.
inline PRState& run_pr(PRState& state, const PRConfig& config, const EmbeddingSet* embeddings = nullptr) {
    config.validate();
    refresh_subsumptions(state);

    for (std::size_t round = 0; round < config.max_self_iterations; ++round) {
        const EquivalenceSnapshot snap(state);
        auto fresh = compute_entity_round(state, snap, config, embeddings);

        // max |new - old| over the union of non-frozen entity pairs
        double max_change = 0.0;
        std::vector<Mapping> previous;
        for (const auto& m : state.mappings.of_kind(MappingKind::Entity)) {
            if (!m.frozen) previous.push_back(m);
        }
        {
            std::size_t i = 0, j = 0;
            while (i < previous.size() || j < fresh.size()) {
                const bool take_old = j == fresh.size() ||
                                      (i < previous.size() && std::pair(previous[i].left, previous[i].right) <
                                                                  std::pair(fresh[j].left, fresh[j].right));
                const bool take_new = i == previous.size() ||
                                      (j < fresh.size() && std::pair(fresh[j].left, fresh[j].right) <
                                                               std::pair(previous[i].left, previous[i].right));
                if (take_old) {
                    max_change = std::max(max_change, previous[i].probability);
                    ++i;
                } else if (take_new) {
                    max_change = std::max(max_change, fresh[j].probability);
                    ++j;
                } else {
                    max_change = std::max(max_change, std::abs(previous[i].probability - fresh[j].probability));
                    ++i;
                    ++j;
                }
            }
        }

        state.mappings.clear_unfrozen(MappingKind::Entity);
        for (const auto& m : fresh) state.mappings.upsert(m);
        refresh_subsumptions(state);
        ++state.iteration;
        if (max_change < config.convergence_epsilon) break;
    }
    return state;
}

}  // namespace prase
