#pragma once

#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "prasemap/errors.hpp"
#include "prasemap/service/json.hpp"
#include "prasemap/service/task_manager.hpp"

namespace prase::service {

namespace detail {

inline void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, const char* kind, const std::string& message) {
    send_json(res, status, {{"error", kind}, {"message", message}});
}

inline Side parse_side(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    throw InvalidConfig("side must be 'left' or 'right'");
}

// Maps the error taxonomy onto HTTP status codes.
template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const UnknownTask& e) {
            send_error(res, 404, "UnknownTask", e.what());
        } catch (const UnknownEntity& e) {
            send_error(res, 404, "UnknownEntity", e.what());
        } catch (const WrongState& e) {
            send_error(res, 409, "WrongState", e.what());
        } catch (const UnknownPair& e) {
            send_error(res, 400, "UnknownPair", e.what());
        } catch (const InvalidDataset& e) {
            json body = {{"error", "InvalidDataset"}, {"message", e.what()}};
            if (e.line() > 0) {
                body["line"] = e.line();
                body["source"] = e.source();
            }
            send_json(res, 400, body);
        } catch (const InvalidConfig& e) {
            send_error(res, 400, "InvalidConfig", e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, "BadRequest", e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "InternalError", e.what());
        }
    };
}

inline json view_to_json(const TaskView& v) {
    json log = json::array();
    for (const auto& e : v.progress_log) log.push_back(to_json(e));
    json j = {{"task_id", v.id},
              {"status", to_string(v.status)},
              {"progress_log", std::move(log)},
              {"config", config_to_json(v.config)},
              {"dataset", v.dataset},
              {"created_at", v.created_at},
              {"updated_at", v.updated_at}};
    if (!v.error.empty()) j["error"] = v.error;
    if (v.metrics) j["metrics"] = to_json(*v.metrics);
    return j;
}

}  // namespace detail

// Registers the task API on `server`. The manager must outlive the server.
inline void register_routes(httplib::Server& server, TaskManager& manager) {
    using detail::guarded;
    using detail::send_json;

    server.Post("/tasks", guarded([&](const httplib::Request& req, httplib::Response& res) {
                    const auto body = json::parse(req.body);
                    if (!body.is_object() || !body.contains("dataset")) throw InvalidDataset("request needs a dataset");
                    const auto dataset = dataset_from_json(body["dataset"]);
                    const auto config = config_from_json(body.value("config", json(nullptr)));
                    send_json(res, 201, {{"task_id", manager.create_task(dataset, config)}});
                }));

    server.Get(R"(/tasks/([0-9a-f]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, detail::view_to_json(manager.get_task(req.matches[1])));
               }));

    server.Get(R"(/tasks/([0-9a-f]+)/uncertain)", guarded([&](const httplib::Request& req, httplib::Response& res) {
                   json items = json::array();
                   for (const auto& p : manager.uncertain(req.matches[1])) {
                       items.push_back({{"left", p.left},
                                        {"right", p.right},
                                        {"left_label", p.left_label},
                                        {"right_label", p.right_label},
                                        {"probability", p.probability}});
                   }
                   send_json(res, 200, {{"items", std::move(items)}});
               }));

    server.Post(R"(/tasks/([0-9a-f]+)/feedback)", guarded([&](const httplib::Request& req, httplib::Response& res) {
                    const auto body = json::parse(req.body);
                    std::vector<NamedLabel> labels;
                    for (const auto& l : body.value("labels", json::array())) {
                        labels.push_back({l.at("left").get<std::string>(), l.at("right").get<std::string>(),
                                          l.at("label").get<int>()});
                    }
                    const bool decline = body.value("decline", false);
                    send_json(res, 200, {{"accepted", manager.submit_feedback(req.matches[1], labels, decline)}});
                }));

    server.Get(R"(/tasks/([0-9a-f]+)/mappings)", guarded([&](const httplib::Request& req, httplib::Response& res) {
                   res.set_content(manager.export_mappings(req.matches[1]), "text/tab-separated-values");
                   res.set_header("Content-Disposition", "attachment; filename=\"mappings.tsv\"");
               }));

    server.Get(R"(/kg/([a-z]+)/([0-9a-f]+)/stats)", guarded([&](const httplib::Request& req, httplib::Response& res) {
                   const auto side = detail::parse_side(req.matches[1]);
                   send_json(res, 200, to_json(manager.kg_stats_of(req.matches[2], side)));
               }));

    // Entity identifiers contain '/', so the entity segment is greedy.
    server.Get(R"(/kg/([a-z]+)/([0-9a-f]+)/entity/(.+)/neighbourhood)",
               guarded([&](const httplib::Request& req, httplib::Response& res) {
                   const auto side = detail::parse_side(req.matches[1]);
                   std::size_t hops = 1;
                   if (req.has_param("hops")) {
                       const auto text = req.get_param_value("hops");
                       char* end = nullptr;
                       const long v = std::strtol(text.c_str(), &end, 10);
                       if (text.empty() || *end != '\0' || v <= 0) throw InvalidConfig("hops must be a positive integer");
                       hops = static_cast<std::size_t>(v);
                   }
                   send_json(res, 200, to_json(manager.neighbourhood_of(req.matches[2], side, req.matches[3], hops)));
               }));

    server.Get(R"(/tasks/([0-9a-f]+)/mapping-context)",
               guarded([&](const httplib::Request& req, httplib::Response& res) {
                   if (!req.has_param("left") || !req.has_param("right")) {
                       throw InvalidConfig("mapping-context needs left and right parameters");
                   }
                   const auto ctx = manager.mapping_context(req.matches[1], req.get_param_value("left"),
                                                            req.get_param_value("right"));
                   json cross = json::array();
                   for (const auto& m : ctx.cross) {
                       cross.push_back({{"left", m.left}, {"right", m.right}, {"probability", m.probability}});
                   }
                   send_json(res, 200,
                             {{"left_subgraph", to_json(ctx.left)},
                              {"right_subgraph", to_json(ctx.right)},
                              {"cross_mappings", std::move(cross)}});
               }));
}

}  // namespace prase::service
