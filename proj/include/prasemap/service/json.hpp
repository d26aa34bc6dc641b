#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "prasemap/errors.hpp"
#include "prasemap/kg/stats.hpp"
#include "prasemap/pipeline/metrics.hpp"
#include "prasemap/pipeline/pipeline.hpp"

namespace prase::service {

using nlohmann::json;

inline std::string_view to_string(PipelineMode m) {
    return m == PipelineMode::Automatic ? "AUTOMATIC" : "SEMI_AUTOMATIC";
}

namespace detail {

inline void reject_unknown_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> known) {
    if (!obj.is_object()) throw InvalidConfig(std::string(where) + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || key == k;
        if (!ok) throw InvalidConfig(std::string(where) + ": unknown field '" + key + "'");
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out, std::string_view where) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        if constexpr (std::is_unsigned_v<T>) {
            if (!it->is_number_unsigned()) throw InvalidConfig("");
        }
        out = it->template get<T>();
    } catch (const std::exception&) {
        throw InvalidConfig(std::string(where) + ": field '" + key + "' has the wrong type");
    }
}

}  // namespace detail

// Missing fields keep their defaults; unknown fields and wrong types are
// rejected. The result is validated.
inline PipelineConfig config_from_json(const json& j) {
    PipelineConfig c;
    if (j.is_null()) return c;
    detail::reject_unknown_keys(j, "config", {"pr", "se", "se_pr_rounds", "mode", "uncertain_per_round"});
    if (const auto it = j.find("pr"); it != j.end()) {
        const auto& pr = *it;
        detail::reject_unknown_keys(pr, "config.pr",
                                    {"alpha", "max_self_iterations", "convergence_epsilon", "theta_lexical",
                                     "theta_output", "uncertain_band", "rng_seed"});
        detail::read(pr, "alpha", c.pr.alpha, "config.pr");
        detail::read(pr, "max_self_iterations", c.pr.max_self_iterations, "config.pr");
        detail::read(pr, "convergence_epsilon", c.pr.convergence_epsilon, "config.pr");
        detail::read(pr, "theta_lexical", c.pr.theta_lexical, "config.pr");
        detail::read(pr, "theta_output", c.pr.theta_output, "config.pr");
        detail::read(pr, "rng_seed", c.pr.rng_seed, "config.pr");
        if (const auto band = pr.find("uncertain_band"); band != pr.end()) {
            if (!band->is_array() || band->size() != 2 || !(*band)[0].is_number() || !(*band)[1].is_number()) {
                throw InvalidConfig("config.pr: uncertain_band must be [low, high]");
            }
            c.pr.uncertain_band = {(*band)[0].get<double>(), (*band)[1].get<double>()};
        }
    }
    if (const auto it = j.find("se"); it != j.end()) {
        const auto& se = *it;
        detail::reject_unknown_keys(se, "config.se",
                                    {"dimension", "epochs", "learning_rate", "negatives_per_positive", "margin",
                                     "theta_seed", "tau_se", "rng_seed"});
        detail::read(se, "dimension", c.se.dimension, "config.se");
        detail::read(se, "epochs", c.se.epochs, "config.se");
        detail::read(se, "learning_rate", c.se.learning_rate, "config.se");
        detail::read(se, "negatives_per_positive", c.se.negatives_per_positive, "config.se");
        detail::read(se, "margin", c.se.margin, "config.se");
        detail::read(se, "theta_seed", c.se.theta_seed, "config.se");
        detail::read(se, "tau_se", c.se.tau_se, "config.se");
        detail::read(se, "rng_seed", c.se.rng_seed, "config.se");
    }
    detail::read(j, "se_pr_rounds", c.se_pr_rounds, "config");
    detail::read(j, "uncertain_per_round", c.uncertain_per_round, "config");
    if (const auto it = j.find("mode"); it != j.end()) {
        if (*it == "AUTOMATIC") {
            c.mode = PipelineMode::Automatic;
        } else if (*it == "SEMI_AUTOMATIC") {
            c.mode = PipelineMode::SemiAutomatic;
        } else {
            throw InvalidConfig("config: mode must be AUTOMATIC or SEMI_AUTOMATIC");
        }
    }
    c.validate();
    return c;
}

inline json config_to_json(const PipelineConfig& c) {
    return {
        {"pr",
         {{"alpha", c.pr.alpha},
          {"max_self_iterations", c.pr.max_self_iterations},
          {"convergence_epsilon", c.pr.convergence_epsilon},
          {"theta_lexical", c.pr.theta_lexical},
          {"theta_output", c.pr.theta_output},
          {"uncertain_band", {c.pr.uncertain_band.low, c.pr.uncertain_band.high}},
          {"rng_seed", c.pr.rng_seed}}},
        {"se",
         {{"dimension", c.se.dimension},
          {"epochs", c.se.epochs},
          {"learning_rate", c.se.learning_rate},
          {"negatives_per_positive", c.se.negatives_per_positive},
          {"margin", c.se.margin},
          {"theta_seed", c.se.theta_seed},
          {"tau_se", c.se.tau_se},
          {"rng_seed", c.se.rng_seed}}},
        {"se_pr_rounds", c.se_pr_rounds},
        {"mode", to_string(c.mode)},
        {"uncertain_per_round", c.uncertain_per_round},
    };
}

inline json to_json(const ProgressEvent& e) {
    return {{"stage", e.stage},
            {"elapsed_ms", e.elapsed_ms},
            {"loss", e.loss ? json(*e.loss) : json(nullptr)},
            {"num_mappings", e.num_mappings}};
}

inline ProgressEvent progress_event_from_json(const json& j) {
    ProgressEvent e;
    e.stage = j.at("stage").get<std::string>();
    e.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
    if (!j.at("loss").is_null()) e.loss = j.at("loss").get<double>();
    e.num_mappings = j.at("num_mappings").get<std::size_t>();
    return e;
}

inline json to_json(const KGStats& s) {
    return {{"num_entities", s.num_entities},
            {"num_relations", s.num_relations},
            {"num_attributes", s.num_attributes},
            {"num_rel_triples", s.num_rel_triples},
            {"num_attr_triples", s.num_attr_triples}};
}

inline json to_json(const Subgraph& g) {
    json nodes = json::array();
    for (const auto& n : g.nodes) {
        json attrs = json::array();
        for (const auto& [a, v] : n.attributes) attrs.push_back({{"attribute", a}, {"literal", v}});
        nodes.push_back({{"entity", n.entity}, {"label", n.label}, {"attributes", std::move(attrs)}});
    }
    json edges = json::array();
    for (const auto& e : g.edges) edges.push_back({{"head", e.head}, {"relation", e.relation}, {"tail", e.tail}});
    return {{"center", g.center}, {"hop_limit", g.hop_limit}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline json to_json(const Metrics& m) {
    return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace prase::service
