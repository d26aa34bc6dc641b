#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "prasemap/bench/synthetic.hpp"
#include "prasemap/errors.hpp"
#include "prasemap/kg/io.hpp"
#include "prasemap/kg/stats.hpp"
#include "prasemap/pipeline/metrics.hpp"
#include "prasemap/pipeline/pipeline.hpp"
#include "prasemap/pr/export.hpp"
#include "prasemap/service/json.hpp"

namespace prase::service {

enum class TaskStatus : std::uint8_t { Queued, Running, AwaitingFeedback, Done, Failed };

inline std::string_view to_string(TaskStatus s) {
    switch (s) {
        case TaskStatus::Queued: return "QUEUED";
        case TaskStatus::Running: return "RUNNING";
        case TaskStatus::AwaitingFeedback: return "AWAITING_FEEDBACK";
        case TaskStatus::Done: return "DONE";
        case TaskStatus::Failed: return "FAILED";
    }
    return "?";
}

inline TaskStatus task_status_from_string(std::string_view s) {
    for (auto t : {TaskStatus::Queued, TaskStatus::Running, TaskStatus::AwaitingFeedback, TaskStatus::Done,
                   TaskStatus::Failed}) {
        if (to_string(t) == s) return t;
    }
    throw Error("unknown task status: " + std::string(s));
}

// Allowed edges of the task state machine.
inline bool is_valid_transition(TaskStatus from, TaskStatus to) {
    using S = TaskStatus;
    switch (from) {
        case S::Queued: return to == S::Running || to == S::Failed;
        case S::Running: return to == S::AwaitingFeedback || to == S::Done || to == S::Failed;
        case S::AwaitingFeedback: return to == S::Running || to == S::Failed;
        case S::Done:
        case S::Failed: return false;
    }
    return false;
}

// The four KG files plus an optional reference alignment, as text.
struct DatasetContents {
    std::string left_rel;
    std::string left_attr;
    std::string right_rel;
    std::string right_attr;
    std::optional<std::string> reference;
};

struct DatasetRef {
    enum class Kind : std::uint8_t { Builtin, Uploaded };
    Kind kind = Kind::Builtin;
    std::string name;           // builtin only
    DatasetContents contents;   // uploaded only
};

inline DatasetRef dataset_from_json(const json& j) {
    if (!j.is_object()) throw InvalidDataset("dataset must be a JSON object");
    DatasetRef ref;
    const auto kind = j.value("kind", std::string{});
    if (kind == "builtin") {
        ref.kind = DatasetRef::Kind::Builtin;
        if (!j.contains("name") || !j["name"].is_string()) throw InvalidDataset("builtin dataset requires a name");
        ref.name = j["name"].get<std::string>();
    } else if (kind == "uploaded") {
        ref.kind = DatasetRef::Kind::Uploaded;
        const auto files = j.find("files");
        if (files == j.end() || !files->is_object()) throw InvalidDataset("uploaded dataset requires files");
        auto take = [&](const char* key, std::string& out) {
            const auto it = files->find(key);
            if (it == files->end() || !it->is_string()) {
                throw InvalidDataset(std::string("uploaded dataset is missing file '") + key + "'");
            }
            out = it->get<std::string>();
        };
        take("left_rel", ref.contents.left_rel);
        take("left_attr", ref.contents.left_attr);
        take("right_rel", ref.contents.right_rel);
        take("right_attr", ref.contents.right_attr);
        if (const auto it = files->find("reference"); it != files->end()) {
            if (!it->is_string()) throw InvalidDataset("reference must be text");
            ref.contents.reference = it->get<std::string>();
        }
    } else {
        throw InvalidDataset("dataset kind must be 'builtin' or 'uploaded'");
    }
    return ref;
}

struct PendingItem {
    std::string left;
    std::string right;
    std::string left_label;
    std::string right_label;
    double probability = 0.0;
};

struct NamedLabel {
    std::string left;
    std::string right;
    int label = 0;
};

// Read-only copy of a task record.
struct TaskView {
    std::string id;
    TaskStatus status = TaskStatus::Queued;
    PipelineConfig config;
    json dataset;
    std::vector<ProgressEvent> progress_log;
    std::vector<PendingItem> pending_feedback;
    std::int64_t created_at = 0;  // ms since the Unix epoch
    std::int64_t updated_at = 0;
    std::string error;
    std::optional<Metrics> metrics;
};

struct ServiceOptions {
    std::filesystem::path data_dir = "data";
    std::filesystem::path datasets_dir = "datasets";
    std::size_t workers = 1;
};

class TaskManager {
public:
    explicit TaskManager(ServiceOptions options) : options_(std::move(options)) {
        if (options_.workers == 0) throw InvalidConfig("worker limit must be positive");
        std::filesystem::create_directories(tasks_dir());
        reload();
        for (std::size_t i = 0; i < options_.workers; ++i) workers_.emplace_back([this] { work(); });
    }

    TaskManager(const TaskManager&) = delete;
    TaskManager& operator=(const TaskManager&) = delete;

    ~TaskManager() {
        {
            std::lock_guard lock(mu_);
            stopping_ = true;
        }
        queue_cv_.notify_all();
        feedback_cv_.notify_all();
        for (auto& t : workers_) t.join();
    }

    const ServiceOptions& options() const { return options_; }

    std::string create_task(const DatasetRef& dataset, const PipelineConfig& config) {
        config.validate();
        auto contents = resolve(dataset);
        validate_dataset(contents);

        auto task = std::make_shared<Task>();
        task->config = config;
        task->dataset = dataset.kind == DatasetRef::Kind::Builtin ? json{{"kind", "builtin"}, {"name", dataset.name}}
                                                                    : json{{"kind", "uploaded"}};
        task->created_at = task->updated_at = now_ms();
        task->has_reference = contents.reference.has_value();

        std::lock_guard lock(mu_);
        do {
            task->id = new_token();
        } while (tasks_.count(task->id) || std::filesystem::exists(task_dir(task->id)));
        write_dataset(task_dir(task->id) / "dataset", contents);
        persist(*task);
        tasks_.emplace(task->id, task);
        queue_.push_back(task->id);
        queue_cv_.notify_one();
        return task->id;
    }

    TaskView get_task(const std::string& id) const {
        std::lock_guard lock(mu_);
        return view_of(*find(id));
    }

    std::vector<std::string> task_ids() const {
        std::lock_guard lock(mu_);
        std::vector<std::string> ids;
        for (const auto& [id, t] : tasks_) ids.push_back(id);
        return ids;
    }

    std::vector<PendingItem> uncertain(const std::string& id) const {
        std::lock_guard lock(mu_);
        const auto& t = *find(id);
        if (t.status != TaskStatus::AwaitingFeedback) {
            throw WrongState("task " + id + " is " + std::string(to_string(t.status)) + ", not AWAITING_FEEDBACK");
        }
        return t.pending;
    }

    // Hands labels for (a subset of) the pending items to the waiting run.
    // decline = true stops all further feedback requests for this run.
    std::size_t submit_feedback(const std::string& id, const std::vector<NamedLabel>& labels, bool decline = false) {
        std::lock_guard lock(mu_);
        auto& t = *find(id);
        if (t.status != TaskStatus::AwaitingFeedback) {
            throw WrongState("task " + id + " is " + std::string(to_string(t.status)) + ", not AWAITING_FEEDBACK");
        }
        std::set<NamePair> pending;
        for (const auto& p : t.pending) pending.emplace(p.left, p.right);
        for (const auto& l : labels) {
            if (!pending.count({l.left, l.right})) throw UnknownPair(l.left, l.right);
            if (l.label != 0 && l.label != 1) throw InvalidConfig("feedback label must be 0 or 1");
        }
        t.answer = decline ? std::nullopt : std::optional(labels);
        t.answered = true;
        t.pending.clear();
        transition(t, TaskStatus::Running);
        persist(t);
        feedback_cv_.notify_all();
        return decline ? 0 : labels.size();
    }

    std::string export_mappings(const std::string& id) const {
        std::lock_guard lock(mu_);
        const auto& t = *find(id);
        if (t.status != TaskStatus::Done) {
            throw WrongState("task " + id + " is " + std::string(to_string(t.status)) + ", not DONE");
        }
        return t.export_tsv;
    }

    KGStats kg_stats_of(const std::string& id, Side side) { return kg_stats(*graph(id, side)); }

    Subgraph neighbourhood_of(const std::string& id, Side side, const std::string& entity, std::size_t hops) {
        if (hops == 0) throw InvalidConfig("hops must be positive");
        return neighbourhood(*graph(id, side), entity, hops);
    }

    struct MappingContext {
        Subgraph left;
        Subgraph right;
        std::vector<ExportedMapping> cross;
    };

    // One-hop neighbourhoods of both entities plus every current mapping
    // linking a node of one to a node of the other.
    MappingContext mapping_context(const std::string& id, const std::string& left, const std::string& right) {
        MappingContext ctx{neighbourhood(*graph(id, Side::Left), left, 1),
                           neighbourhood(*graph(id, Side::Right), right, 1),
                           {}};
        std::set<std::string> left_nodes, right_nodes;
        for (const auto& n : ctx.left.nodes) left_nodes.insert(n.entity);
        for (const auto& n : ctx.right.nodes) right_nodes.insert(n.entity);
        std::lock_guard lock(mu_);
        for (const auto& m : find(id)->current) {
            if (left_nodes.count(m.left) && right_nodes.count(m.right)) ctx.cross.push_back(m);
        }
        return ctx;
    }

    // Blocks until the task reaches DONE or FAILED, or the timeout expires.
    bool wait_finished(const std::string& id, std::chrono::milliseconds timeout) {
        std::unique_lock lock(mu_);
        return state_cv_.wait_for(lock, timeout, [&] {
            const auto s = find(id)->status;
            return s == TaskStatus::Done || s == TaskStatus::Failed;
        });
    }

    // Blocks until the task leaves status `from`, or the timeout expires.
    bool wait_status_change(const std::string& id, TaskStatus from, std::chrono::milliseconds timeout) {
        std::unique_lock lock(mu_);
        return state_cv_.wait_for(lock, timeout, [&] { return find(id)->status != from; });
    }

private:
    struct Task {
        std::string id;
        TaskStatus status = TaskStatus::Queued;
        PipelineConfig config;
        json dataset;
        bool has_reference = false;
        std::vector<ProgressEvent> log;
        std::vector<PendingItem> pending;
        std::int64_t created_at = 0;
        std::int64_t updated_at = 0;
        std::string error;
        std::optional<Metrics> metrics;

        // runtime only
        std::shared_ptr<const KnowledgeGraph> left, right;
        std::vector<ExportedMapping> current;
        std::string export_tsv;
        bool answered = false;
        std::optional<std::vector<NamedLabel>> answer;
    };

    struct Cancelled {};

    class BlockingFeedback final : public FeedbackSource {
    public:
        BlockingFeedback(TaskManager& manager, Task& task) : manager_(manager), task_(task) {}

        std::optional<std::vector<FeedbackLabel>> request_labels(const PRState& state,
                                                                  const std::vector<Mapping>& uncertain) override {
            const auto& L = state.left();
            const auto& R = state.right();
            std::vector<PendingItem> items;
            for (const auto& m : uncertain) {
                items.push_back({L.entity_name(m.left), R.entity_name(m.right), L.entity_label(m.left),
                                 R.entity_label(m.right), m.probability});
            }
            auto current = snapshot(state, manager_.threshold(task_));

            std::unique_lock lock(manager_.mu_);
            task_.pending = std::move(items);
            task_.current = std::move(current);
            task_.answered = false;
            manager_.transition(task_, TaskStatus::AwaitingFeedback);
            manager_.persist(task_);
            manager_.feedback_cv_.wait(lock, [&] { return task_.answered || manager_.stopping_; });
            if (!task_.answered) throw Cancelled{};
            auto answer = std::move(task_.answer);
            task_.answer.reset();
            if (!answer) return std::nullopt;
            std::vector<FeedbackLabel> labels;
            for (const auto& l : *answer) labels.push_back(resolve_label(state, l.left, l.right, l.label));
            return labels;
        }

    private:
        TaskManager& manager_;
        Task& task_;
    };

    static std::vector<ExportedMapping> snapshot(const PRState& state, double theta) {
        std::vector<ExportedMapping> out;
        for (const auto& m : exported_mappings(state, theta)) {
            out.push_back({state.left().entity_name(m.left), state.right().entity_name(m.right), m.probability});
        }
        return out;
    }

    double threshold(const Task& t) const { return t.config.pr.theta_output; }

    static std::int64_t now_ms() {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    }

    static std::string new_token() {
        static thread_local std::random_device rd;
        std::uniform_int_distribution<std::uint64_t> dist;
        char buf[33];
        std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(dist(rd)),
                      static_cast<unsigned long long>(dist(rd)));
        return buf;
    }

    std::filesystem::path tasks_dir() const { return options_.data_dir / "tasks"; }
    std::filesystem::path task_dir(const std::string& id) const { return tasks_dir() / id; }

    static bool is_safe_name(const std::string& name) {
        if (name.empty() || name.front() == '.') return false;
        return std::all_of(name.begin(), name.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        });
    }

    static std::string read_file(const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw Error("cannot read " + p.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static void write_atomically(const std::filesystem::path& p, const std::string& content) {
        auto tmp = p;
        tmp += ".tmp";
        bench::write_text_file(tmp, content);
        std::filesystem::rename(tmp, p);
    }

    DatasetContents resolve(const DatasetRef& ref) const {
        if (ref.kind == DatasetRef::Kind::Uploaded) return ref.contents;
        if (!is_safe_name(ref.name)) throw InvalidDataset("invalid builtin dataset name: " + ref.name);
        const auto dir = options_.datasets_dir / ref.name;
        if (!std::filesystem::is_directory(dir)) throw InvalidDataset("unknown builtin dataset: " + ref.name);
        DatasetContents c;
        try {
            c.left_rel = read_file(dir / bench::DatasetFiles::left_rel);
            c.left_attr = read_file(dir / bench::DatasetFiles::left_attr);
            c.right_rel = read_file(dir / bench::DatasetFiles::right_rel);
            c.right_attr = read_file(dir / bench::DatasetFiles::right_attr);
        } catch (const Error& e) {
            throw InvalidDataset(std::string("builtin dataset ") + ref.name + " is incomplete: " + e.what());
        }
        if (std::filesystem::exists(dir / bench::DatasetFiles::reference)) {
            c.reference = read_file(dir / bench::DatasetFiles::reference);
        }
        return c;
    }

    static void validate_dataset(const DatasetContents& c) {
        try {
            parse_kg_strings(c.left_rel, c.left_attr, Side::Left);
            parse_kg_strings(c.right_rel, c.right_attr, Side::Right);
            if (c.reference) parse_reference_string(*c.reference);
        } catch (const MalformedLine& e) {
            throw InvalidDataset(e);
        }
    }

    static void write_dataset(const std::filesystem::path& dir, const DatasetContents& c) {
        std::filesystem::create_directories(dir);
        bench::write_text_file(dir / bench::DatasetFiles::left_rel, c.left_rel);
        bench::write_text_file(dir / bench::DatasetFiles::left_attr, c.left_attr);
        bench::write_text_file(dir / bench::DatasetFiles::right_rel, c.right_rel);
        bench::write_text_file(dir / bench::DatasetFiles::right_attr, c.right_attr);
        if (c.reference) bench::write_text_file(dir / bench::DatasetFiles::reference, *c.reference);
    }

    Task* find(const std::string& id) const {
        const auto it = tasks_.find(id);
        if (it == tasks_.end()) throw UnknownTask(id);
        return it->second.get();
    }

    static TaskView view_of(const Task& t) {
        return {t.id, t.status, t.config, t.dataset, t.log, t.pending, t.created_at, t.updated_at, t.error, t.metrics};
    }

    // Caller holds mu_.
    void transition(Task& t, TaskStatus to) {
        if (!is_valid_transition(t.status, to)) {
            throw WrongState("illegal transition " + std::string(to_string(t.status)) + " -> " +
                             std::string(to_string(to)));
        }
        t.status = to;
        t.updated_at = now_ms();
        state_cv_.notify_all();
    }

    // Caller holds mu_.
    void persist(const Task& t) const {
        json log = json::array();
        for (const auto& e : t.log) log.push_back(to_json(e));
        json pending = json::array();
        for (const auto& p : t.pending) {
            pending.push_back({{"left", p.left},
                               {"right", p.right},
                               {"left_label", p.left_label},
                               {"right_label", p.right_label},
                               {"probability", p.probability}});
        }
        json j = {{"task_id", t.id},
                  {"status", to_string(t.status)},
                  {"config", config_to_json(t.config)},
                  {"dataset", t.dataset},
                  {"has_reference", t.has_reference},
                  {"progress_log", std::move(log)},
                  {"pending_feedback", std::move(pending)},
                  {"created_at", t.created_at},
                  {"updated_at", t.updated_at},
                  {"error", t.error}};
        if (t.metrics) j["metrics"] = to_json(*t.metrics);
        std::filesystem::create_directories(task_dir(t.id));
        write_atomically(task_dir(t.id) / "task.json", j.dump(2));
    }

    // Restores persisted tasks. Queued tasks go back on the queue in creation
    // order; runs interrupted mid-flight are marked FAILED.
    void reload() {
        std::vector<std::shared_ptr<Task>> queued;
        for (const auto& entry : std::filesystem::directory_iterator(tasks_dir())) {
            const auto file = entry.path() / "task.json";
            if (!entry.is_directory() || !std::filesystem::exists(file)) continue;
            const auto j = json::parse(read_file(file));
            auto t = std::make_shared<Task>();
            t->id = j.at("task_id").get<std::string>();
            t->status = task_status_from_string(j.at("status").get<std::string>());
            t->config = config_from_json(j.at("config"));
            t->dataset = j.at("dataset");
            t->has_reference = j.value("has_reference", false);
            for (const auto& e : j.at("progress_log")) t->log.push_back(progress_event_from_json(e));
            t->created_at = j.at("created_at").get<std::int64_t>();
            t->updated_at = j.at("updated_at").get<std::int64_t>();
            t->error = j.value("error", std::string{});
            if (j.contains("metrics")) {
                const auto& m = j["metrics"];
                t->metrics = Metrics{m.at("precision"), m.at("recall"), m.at("f1")};
            }
            switch (t->status) {
                case TaskStatus::Done:
                    t->export_tsv = read_file(task_dir(t->id) / "mappings.tsv");
                    t->current = parse_mappings_string(t->export_tsv);
                    break;
                case TaskStatus::Running:
                case TaskStatus::AwaitingFeedback:
                    t->status = TaskStatus::Failed;
                    t->error = "interrupted by a service restart";
                    t->updated_at = now_ms();
                    persist(*t);
                    break;
                case TaskStatus::Queued: queued.push_back(t); break;
                case TaskStatus::Failed: break;
            }
            tasks_.emplace(t->id, t);
        }
        std::sort(queued.begin(), queued.end(), [](const auto& a, const auto& b) {
            return std::tie(a->created_at, a->id) < std::tie(b->created_at, b->id);
        });
        for (const auto& t : queued) queue_.push_back(t->id);
    }

    std::shared_ptr<const KnowledgeGraph> graph(const std::string& id, Side side) {
        Task* t;
        {
            std::lock_guard lock(mu_);
            t = find(id);
            if (t->left && t->right) return side == Side::Left ? t->left : t->right;
        }
        auto [left, right] = load_graphs(id);
        std::lock_guard lock(mu_);
        if (!t->left) {
            t->left = std::move(left);
            t->right = std::move(right);
        }
        return side == Side::Left ? t->left : t->right;
    }

    std::pair<std::shared_ptr<const KnowledgeGraph>, std::shared_ptr<const KnowledgeGraph>> load_graphs(
        const std::string& id) const {
        const auto dir = task_dir(id) / "dataset";
        auto left = std::make_shared<const KnowledgeGraph>(
            load_kg((dir / bench::DatasetFiles::left_rel).string(), (dir / bench::DatasetFiles::left_attr).string(),
                    Side::Left));
        auto right = std::make_shared<const KnowledgeGraph>(
            load_kg((dir / bench::DatasetFiles::right_rel).string(), (dir / bench::DatasetFiles::right_attr).string(),
                    Side::Right));
        return {std::move(left), std::move(right)};
    }

    void work() {
        while (true) {
            std::shared_ptr<Task> task;
            {
                std::unique_lock lock(mu_);
                queue_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
                if (stopping_) return;
                task = tasks_.at(queue_.front());
                queue_.pop_front();
                transition(*task, TaskStatus::Running);
                persist(*task);
            }
            run(*task);
        }
    }

    void run(Task& t) {
        try {
            auto [left, right] = load_graphs(t.id);
            std::optional<std::set<NamePair>> reference;
            if (t.has_reference) reference = load_reference((task_dir(t.id) / "dataset" / "reference.tsv").string());
            {
                std::lock_guard lock(mu_);
                if (!t.left) {
                    t.left = left;
                    t.right = right;
                }
            }
            BlockingFeedback feedback(*this, t);
            auto sink = [&](const ProgressEvent& e) {
                std::lock_guard lock(mu_);
                if (stopping_) throw Cancelled{};
                t.log.push_back(e);
                t.updated_at = now_ms();
                persist(t);
            };
            auto result = run_pipeline(left, right, t.config, sink, &feedback);
            auto tsv = export_mappings_tsv(result.state, t.config.pr.theta_output);
            std::optional<Metrics> metrics;
            if (reference && !reference->empty()) {
                metrics = evaluate_metrics(result.state, t.config.pr.theta_output, *reference);
            }
            write_atomically(task_dir(t.id) / "mappings.tsv", tsv);

            std::lock_guard lock(mu_);
            t.current = snapshot(result.state, t.config.pr.theta_output);
            t.export_tsv = std::move(tsv);
            t.metrics = metrics;
            transition(t, TaskStatus::Done);
            persist(t);
        } catch (const Cancelled&) {
            // shutting down: the persisted record shows the run as interrupted
        } catch (const std::exception& e) {
            std::lock_guard lock(mu_);
            t.error = e.what();
            t.pending.clear();
            transition(t, TaskStatus::Failed);
            persist(t);
        }
    }

    ServiceOptions options_;
    mutable std::mutex mu_;
    std::condition_variable queue_cv_;
    std::condition_variable feedback_cv_;
    mutable std::condition_variable state_cv_;
    std::map<std::string, std::shared_ptr<Task>> tasks_;
    std::deque<std::string> queue_;
    bool stopping_ = false;
    std::vector<std::thread> workers_;
};

}  // namespace prase::service
