// prasemap: command-line front end for the alignment engine and task service.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "prasemap/bench/synthetic.hpp"
#include "prasemap/prasemap.hpp"
#include "prasemap/service/http_server.hpp"
#include "prasemap/service/json.hpp"
#include "prasemap/service/task_manager.hpp"

namespace fs = std::filesystem;
using namespace prase;

namespace {

struct KgFiles {
    std::string dataset;
    std::string left_rel, left_attr, right_rel, right_attr, reference;

    void resolve() {
        if (dataset.empty()) return;
        const fs::path dir(dataset);
        auto fill = [&](std::string& field, const char* name) {
            if (field.empty()) field = (dir / name).string();
        };
        fill(left_rel, bench::DatasetFiles::left_rel);
        fill(left_attr, bench::DatasetFiles::left_attr);
        fill(right_rel, bench::DatasetFiles::right_rel);
        fill(right_attr, bench::DatasetFiles::right_attr);
        if (reference.empty() && fs::exists(dir / bench::DatasetFiles::reference)) {
            reference = (dir / bench::DatasetFiles::reference).string();
        }
    }
};

void add_kg_options(CLI::App* cmd, KgFiles& f) {
    cmd->add_option("--dataset", f.dataset, "directory with left_rel.tsv, left_attr.tsv, right_rel.tsv, right_attr.tsv");
    cmd->add_option("--left-rel", f.left_rel, "left relation triples");
    cmd->add_option("--left-attr", f.left_attr, "left attribute triples");
    cmd->add_option("--right-rel", f.right_rel, "right relation triples");
    cmd->add_option("--right-attr", f.right_attr, "right attribute triples");
    cmd->add_option("--reference", f.reference, "reference alignment (left<TAB>right)");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_metrics(const Metrics& m) {
    std::printf("precision %.5f\nrecall    %.5f\nf1        %.5f\n", m.precision, m.recall, m.f1);
}

int run_align(KgFiles files, const std::string& config_path, std::optional<std::size_t> rounds,
              const std::string& out_path, bool quiet) {
    files.resolve();
    if (files.left_rel.empty() || files.left_attr.empty() || files.right_rel.empty() || files.right_attr.empty()) {
        throw Error("align needs --dataset or all four KG files");
    }
    auto config = config_path.empty() ? PipelineConfig{} : service::config_from_json(nlohmann::json::parse(slurp(config_path)));
    if (rounds) config.se_pr_rounds = *rounds;
    config.mode = PipelineMode::Automatic;
    config.validate();

    auto left = std::make_shared<const KnowledgeGraph>(load_kg(files.left_rel, files.left_attr, Side::Left));
    auto right = std::make_shared<const KnowledgeGraph>(load_kg(files.right_rel, files.right_attr, Side::Right));
    ProgressSink sink;
    if (!quiet) sink = [](const ProgressEvent& e) { std::cerr << service::to_json(e).dump() << '\n'; };
    const auto result = run_pipeline(left, right, config, sink);
    const auto tsv = export_mappings_tsv(result.state, config.pr.theta_output);
    if (out_path.empty() || out_path == "-") {
        std::cout << tsv;
    } else {
        bench::write_text_file(out_path, tsv);
    }
    if (!files.reference.empty()) {
        const auto metrics = evaluate_metrics(result.state, config.pr.theta_output, load_reference(files.reference));
        if (out_path.empty() || out_path == "-") {
            std::fprintf(stderr, "precision %.5f recall %.5f f1 %.5f\n", metrics.precision, metrics.recall, metrics.f1);
        } else {
            print_metrics(metrics);
        }
    }
    return 0;
}

int run_stats(KgFiles files, const std::string& side_name) {
    files.resolve();
    const bool left = side_name == "left";
    const auto& rel = left ? files.left_rel : files.right_rel;
    const auto& attr = left ? files.left_attr : files.right_attr;
    if (rel.empty() || attr.empty()) throw Error("stats needs --dataset or the relation and attribute files of the side");
    ParseReport report;
    const auto kg = load_kg(rel, attr, left ? Side::Left : Side::Right, &report);
    auto j = service::to_json(kg_stats(kg));
    j["duplicates_dropped"] = report.duplicates;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_evaluate(const std::string& mappings_path, const std::string& reference_path, double threshold) {
    std::ifstream in(mappings_path);
    if (!in) throw Error("cannot open " + mappings_path);
    std::set<NamePair> predicted;
    for (const auto& m : parse_mappings_tsv(in, mappings_path)) {
        if (m.probability >= threshold) predicted.emplace(m.left, m.right);
    }
    print_metrics(evaluate_metrics(predicted, load_reference(reference_path)));
    return 0;
}

httplib::Server* active_server = nullptr;

extern "C" void stop_server(int) {
    if (active_server) active_server->stop();
}

int run_serve(const std::string& host, int port, service::ServiceOptions options) {
    service::TaskManager manager(options);
    httplib::Server server;
    service::register_routes(server, manager);
    active_server = &server;
    std::signal(SIGINT, stop_server);
    std::signal(SIGTERM, stop_server);
    std::cerr << "listening on " << host << ':' << port << " (data " << options.data_dir << ", datasets "
              << options.datasets_dir << ")\n";
    if (!server.listen(host, port)) {
        std::cerr << "cannot bind " << host << ':' << port << '\n';
        return 1;
    }
    active_server = nullptr;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Knowledge graph alignment by probabilistic reasoning and semantic embedding"};
    app.require_subcommand(1);

    KgFiles align_files;
    std::string config_path, out_path;
    std::optional<std::size_t> rounds;
    bool quiet = false;
    auto* align = app.add_subcommand("align", "align two KGs and export the entity mappings");
    add_kg_options(align, align_files);
    align->add_option("--config", config_path, "pipeline configuration (JSON)");
    align->add_option("--rounds", rounds, "number of SE/PR rounds after the first PR stage");
    align->add_option("-o,--out", out_path, "output TSV (default: stdout)");
    align->add_flag("-q,--quiet", quiet, "suppress progress events on stderr");

    KgFiles stats_files;
    std::string side = "left";
    auto* stats = app.add_subcommand("stats", "print statistics of one KG");
    add_kg_options(stats, stats_files);
    stats->add_option("--side", side, "left or right")->check(CLI::IsMember({"left", "right"}));

    bench::SyntheticOptions gen;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "write a synthetic benchmark dataset");
    generate->add_option("-o,--out", gen_out, "output directory")->required();
    generate->add_option("--seed", gen.seed, "generator seed");
    generate->add_option("--entities", gen.num_entities, "number of entities");
    generate->add_option("--rename", gen.rename_fraction, "share of right entities given opaque identifiers")
        ->check(CLI::Range(0.0, 1.0));
    generate->add_option("--drop", gen.drop_fraction, "share of triples dropped on the right side")
        ->check(CLI::Range(0.0, 1.0));

    std::string mappings_path, reference_path;
    double threshold = 0.0;
    auto* evaluate = app.add_subcommand("evaluate", "score an exported mapping file against a reference");
    evaluate->add_option("--mappings", mappings_path, "exported mappings TSV")->required();
    evaluate->add_option("--reference", reference_path, "reference alignment TSV")->required();
    evaluate->add_option("--threshold", threshold, "minimum probability to count a mapping");

    std::string host = "127.0.0.1";
    int port = 8080;
    service::ServiceOptions serve_opts;
    auto* serve = app.add_subcommand("serve", "run the HTTP task service");
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "port");
    serve->add_option("--data-dir", serve_opts.data_dir, "task storage directory");
    serve->add_option("--datasets-dir", serve_opts.datasets_dir, "directory of builtin datasets");
    serve->add_option("--workers", serve_opts.workers, "concurrent pipeline runs")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*align) return run_align(align_files, config_path, rounds, out_path, quiet);
        if (*stats) return run_stats(stats_files, side);
        if (*generate) {
            const auto b = bench::generate_synthetic_benchmark(gen);
            bench::write_benchmark(b, gen_out);
            std::cerr << "wrote " << gen_out << " (" << b.reference.size() << " reference pairs)\n";
            return 0;
        }
        if (*evaluate) return run_evaluate(mappings_path, reference_path, threshold);
        if (*serve) return run_serve(host, port, serve_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
