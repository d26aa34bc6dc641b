#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prasemap/errors.hpp"
#include "prasemap/pr/config.hpp"
#include "prasemap/pr/export.hpp"
#include "prasemap/pr/feedback.hpp"
#include "prasemap/pr/reasoning.hpp"
#include "prasemap/pr/state.hpp"
#include "prasemap/se/adjacency.hpp"
#include "prasemap/se/proposal.hpp"
#include "prasemap/se/trainer.hpp"

namespace prase {

enum class PipelineMode : std::uint8_t { Automatic, SemiAutomatic };

enum class Stage : std::uint8_t { Init, PR, SE, Feedback };

inline std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::Init: return "INIT";
        case Stage::PR: return "PR";
        case Stage::SE: return "SE";
        case Stage::Feedback: return "FEEDBACK";
    }
    return "?";
}

struct PipelineConfig {
    PRConfig pr;
    SEConfig se;
    std::size_t se_pr_rounds = 1;  // 0 runs reasoning only
    PipelineMode mode = PipelineMode::Automatic;
    std::size_t uncertain_per_round = 50;

    void validate() const {
        pr.validate();
        se.validate();
        if (uncertain_per_round == 0) throw InvalidConfig("uncertain_per_round must be positive");
    }
};

struct ProgressEvent {
    std::string stage;
    std::int64_t elapsed_ms = 0;
    std::optional<double> loss;  // set during and after embedding training
    std::size_t num_mappings = 0;
};

using ProgressSink = std::function<void(const ProgressEvent&)>;

// Source of human labels. request_labels blocks until an answer is available;
// std::nullopt means the source declines, after which the pipeline no longer
// asks. Items of the request left unlabeled count as declined individually.
class FeedbackSource {
public:
    virtual ~FeedbackSource() = default;
    virtual std::optional<std::vector<FeedbackLabel>> request_labels(const PRState& state,
                                                                      const std::vector<Mapping>& uncertain) = 0;
};

class DecliningFeedbackSource final : public FeedbackSource {
public:
    std::optional<std::vector<FeedbackLabel>> request_labels(const PRState&, const std::vector<Mapping>&) override {
        return std::nullopt;
    }
};

struct PipelineResult {
    PRState state;
    std::vector<Stage> history;
    std::optional<EmbeddingSet> embeddings;  // from the last embedding round
};

namespace detail {

// SE proposals enter the store unless the pair is frozen or already held at
// a higher probability.
inline void adopt_proposals(PRState& state, const MappingStore& proposals) {
    for (const auto& [key, p] : proposals) {
        const auto* existing = state.mappings.find(MappingKind::Entity, p.left, p.right);
        if (existing && (existing->frozen || existing->probability >= p.probability)) continue;
        state.mappings.upsert(p);
    }
}

}  // namespace detail

inline PipelineResult run_pipeline(std::shared_ptr<const KnowledgeGraph> left,
                                   std::shared_ptr<const KnowledgeGraph> right, const PipelineConfig& config,
                                   const ProgressSink& sink = {}, FeedbackSource* feedback = nullptr) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();
    PipelineResult result;
    auto& state = result.state;

    auto emit = [&](Stage stage, std::optional<double> loss) {
        if (!sink) return;
        const auto elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
        sink({std::string(to_string(stage)), elapsed.count(), loss,
              exported_mappings(state, config.pr.theta_output).size()});
    };
    auto record = [&](Stage stage, std::optional<double> loss = std::nullopt) {
        result.history.push_back(stage);
        emit(stage, loss);
    };

    bool asking = config.mode == PipelineMode::SemiAutomatic && feedback != nullptr;
    std::size_t feedback_round = 0;
    auto maybe_feedback = [&] {
        if (!asking) return;
        const auto items = select_uncertain(state, config.uncertain_per_round, config.pr.uncertain_band,
                                            config.pr.rng_seed + feedback_round);
        ++feedback_round;
        if (items.empty()) return;
        auto labels = feedback->request_labels(state, items);
        if (!labels) {
            asking = false;
            return;
        }
        apply_feedback(state, *labels);
        run_pr(state, config.pr, result.embeddings ? &*result.embeddings : nullptr);
        record(Stage::Feedback);
    };

    state = initialize_state(std::move(left), std::move(right), config.pr);
    record(Stage::Init);
    run_pr(state, config.pr);
    record(Stage::PR);
    maybe_feedback();

    std::optional<std::pair<WeightedAdjacency, WeightedAdjacency>> adjacency;
    for (std::size_t round = 0; round < config.se_pr_rounds; ++round) {
        const auto seeds = select_seeds(state.mappings, config.se.theta_seed);
        if (seeds.empty()) {
            // nothing to learn from: keep the reasoning output as is
            record(Stage::SE);
        } else {
            if (!adjacency) {
                adjacency.emplace(build_weighted_adjacency(state.left(), state.funcs_left),
                                  build_weighted_adjacency(state.right(), state.funcs_right));
            }
            auto progress = [&](int epoch, double loss) {
                if (epoch % 10 == 0 && static_cast<std::size_t>(epoch) != config.se.epochs) emit(Stage::SE, loss);
            };
            result.embeddings = train_embeddings(state.left(), state.right(), adjacency->first, adjacency->second,
                                                 seeds, config.se, progress);
            detail::adopt_proposals(state, propose_mappings(*result.embeddings, config.se));
            record(Stage::SE, result.embeddings->loss_trace.back().second);
        }
        run_pr(state, config.pr, result.embeddings ? &*result.embeddings : nullptr);
        record(Stage::PR);
        maybe_feedback();
    }
    return result;
}

}  // namespace prase
