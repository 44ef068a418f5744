// kcgml command line: ingest | complete | embed | analyze | pipeline.
// The tool is a thin front-end over the shared library's stage API; flags are
// folded into the JSON config that libkcgml validates.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kcgml/kcgml.h"

using json = nlohmann::ordered_json;

namespace {

int exit_code(kcgml_status status) {
    switch (status) {
    case KCGML_OK: return 0;
    case KCGML_ERR_CONFIG: return 2;
    case KCGML_ERR_INPUT:
    case KCGML_ERR_NOT_FOUND:
    case KCGML_ERR_SELF_LOOP:
    case KCGML_ERR_FORMAT_VERSION:
    case KCGML_ERR_TRUNCATED: return 3;
    case KCGML_ERR_DEPENDENCY: return 4;
    default: return 5;
    }
}

struct Flags {
    std::string out;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string config_file;
    std::string from_manifest;

    // ingest
    std::string contacts, metadata;
    bool synthetic = false;
    std::uint64_t people = 0, departments = 0, timestamps = 0;
    double event_rate = 0;
    std::uint64_t group_min = 0, group_max = 0;

    // complete
    double beta = 0, tau = -1;
    std::string aggregator, decay;
    bool no_clamp = false;
    std::uint64_t max_hops = 0;
    std::uint64_t contagion_top_k = 0;
    std::string contagion_seeds;
    bool no_contagion = false;

    // embed
    std::string embedder;
    std::uint64_t dims = 0, walks = 0, length = 0, window = 0, negative = 0, epochs = 0;
    double p = 0, q = 0, lr = 0;
    std::string fanouts;
    std::uint64_t sage_epochs = 0;
    double sage_lr = 0;
    bool use_strength = false;
    bool dump_walks = false;

    // analyze / pipeline
    std::uint64_t top_k = 0;
    double pr_alpha = 0, pr_tolerance = 0;
    std::uint64_t pr_max_iterations = 0;
    std::string pr_normalization;
    bool no_kc = false;

    bool print_json = false;
};

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open config file " << path << "\n";
        std::exit(3);
    }
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        std::cerr << "error: " << path << " is not valid JSON\n";
        std::exit(2);
    }
    return j;
}

// Base config from --config / --from-manifest, then every flag the user set.
json build_config(const CLI::App& cmd, const Flags& f) {
    json cfg = json::object();
    if (!f.from_manifest.empty()) {
        const json manifest = load_json_file(f.from_manifest);
        if (!manifest.contains("config") || !manifest["config"].contains("pipeline")) {
            std::cerr << "error: " << f.from_manifest << " has no pipeline config snapshot\n";
            std::exit(2);
        }
        cfg = manifest["config"]["pipeline"];
    }
    if (!f.config_file.empty()) {
        const json file_cfg = load_json_file(f.config_file);
        for (const auto& [k, v] : file_cfg.items()) cfg[k] = v;
    }

    const auto set = [&](const char* flag) {
        const CLI::Option* opt = cmd.get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };

    if (set("--out")) cfg["out"] = f.out;
    if (set("--seed")) cfg["seed"] = f.seed;
    if (set("--threads")) cfg["threads"] = f.threads;

    if (set("--contacts")) cfg["input"]["contacts"] = f.contacts;
    if (set("--metadata")) cfg["input"]["metadata"] = f.metadata;
    if (f.synthetic && !cfg["input"].contains("synthetic"))
        cfg["input"]["synthetic"] = json::object();
    if (set("--people")) cfg["input"]["synthetic"]["n_people"] = f.people;
    if (set("--departments")) cfg["input"]["synthetic"]["n_departments"] = f.departments;
    if (set("--timestamps")) cfg["input"]["synthetic"]["n_timestamps"] = f.timestamps;
    if (set("--event-rate")) cfg["input"]["synthetic"]["event_rate"] = f.event_rate;
    if (set("--group-min")) cfg["input"]["synthetic"]["group_min"] = f.group_min;
    if (set("--group-max")) cfg["input"]["synthetic"]["group_max"] = f.group_max;

    if (set("--beta")) cfg["kc"]["beta"] = f.beta;
    if (set("--tau")) cfg["kc"]["tau"] = f.tau;
    if (set("--aggregator")) cfg["kc"]["aggregator"] = f.aggregator;
    if (set("--decay")) cfg["kc"]["decay_form"] = f.decay;
    if (f.no_clamp) cfg["kc"]["clamp"] = false;
    if (set("--max-hops")) cfg["kc"]["max_hops"] = f.max_hops;
    if (set("--contagion-top-k")) cfg["kc"]["contagion_top_k"] = f.contagion_top_k;
    if (set("--contagion-seeds")) cfg["kc"]["contagion_seeds"] = split_csv(f.contagion_seeds);
    if (f.no_contagion) {
        cfg["kc"]["contagion_top_k"] = 0;
        cfg["kc"]["contagion_seeds"] = json::array();
    }
    if (f.no_kc) cfg["kc"]["enable"] = false;

    if (set("--embedder")) cfg["embedder"] = f.embedder;
    if (f.use_strength) cfg["use_strength"] = true;
    if (f.dump_walks) cfg["dump_walks"] = true;
    if (set("--dims")) {
        cfg["node2vec"]["dimensions"] = f.dims;
        cfg["graphsage"]["dimensions"] = f.dims;
    }
    if (set("--walks")) cfg["node2vec"]["num_walks"] = f.walks;
    if (set("--length")) cfg["node2vec"]["walk_length"] = f.length;
    if (set("--window")) cfg["node2vec"]["window"] = f.window;
    if (set("--p")) cfg["node2vec"]["p"] = f.p;
    if (set("--q")) cfg["node2vec"]["q"] = f.q;
    if (set("--negative")) cfg["node2vec"]["negative_samples"] = f.negative;
    if (set("--epochs")) cfg["node2vec"]["epochs"] = f.epochs;
    if (set("--lr")) cfg["node2vec"]["learning_rate"] = f.lr;
    if (set("--fanouts")) {
        json arr = json::array();
        for (const auto& part : split_csv(f.fanouts)) arr.push_back(std::stoull(part));
        cfg["graphsage"]["fanouts"] = arr;
    }
    if (set("--sage-epochs")) cfg["graphsage"]["epochs"] = f.sage_epochs;
    if (set("--sage-lr")) cfg["graphsage"]["learning_rate"] = f.sage_lr;

    if (set("--top-k")) cfg["top_k"] = f.top_k;
    if (set("--pagerank-alpha")) cfg["pagerank"]["alpha"] = f.pr_alpha;
    if (set("--pagerank-tolerance")) cfg["pagerank"]["tolerance"] = f.pr_tolerance;
    if (set("--pagerank-max-iterations")) cfg["pagerank"]["max_iterations"] = f.pr_max_iterations;
    if (set("--pagerank-normalization")) cfg["pagerank"]["normalization"] = f.pr_normalization;
    return cfg;
}

void print_ingest_summary(const json& r) {
    const auto& g = r.at("graph");
    std::printf("ingest: %zu nodes (%zu persons, %zu departments)\n",
                g.at("nodes").get<std::size_t>(), g.at("persons").get<std::size_t>(),
                g.at("departments").get<std::size_t>());
    std::printf("  contact pairs: %zu  events: %zu  (office-study reference: 1694 pairs)\n",
                g.at("contact_pairs").get<std::size_t>(),
                g.at("contact_events").get<std::size_t>());
    const auto& c = r.at("contacts");
    std::printf("  rows: %zu valid, %zu malformed, %zu self-loops, %zu duplicates\n",
                c.at("valid").get<std::size_t>(), c.at("malformed").get<std::size_t>(),
                c.at("self_loops").get<std::size_t>(), c.at("duplicates").get<std::size_t>());
}

void print_complete_summary(const json& r) {
    const auto& pairs = r.at("pairs");
    const std::size_t raw = pairs.at("raw").get<std::size_t>();
    const std::size_t kc = pairs.at("kc").get<std::size_t>();
    const double growth = raw ? 100.0 * static_cast<double>(kc - raw) / static_cast<double>(raw) : 0.0;
    std::printf("complete: contact pairs %zu -> %zu (+%.1f%%)  [office-study reference: 1694 -> 1882]\n",
                raw, kc, growth);
    std::printf("  events %zu -> %zu\n", pairs.at("events_raw").get<std::size_t>(),
                pairs.at("events_kc").get<std::size_t>());
    if (r.contains("contagion") && r.at("contagion").is_object()) {
        const auto& cg = r.at("contagion");
        std::printf("  contagion: %zu seeds, %zu nodes at risk (beta=%g, tau=%g)\n",
                    cg.at("seeds").size(), cg.at("at_risk").size(),
                    cg.at("beta").get<double>(), cg.at("tau").get<double>());
    }
}

void print_embed_summary(const json& r) {
    for (const auto& f : r.at("files")) std::printf("embed: wrote %s\n", f.get<std::string>().c_str());
}

void print_rank_table(const json& pagerank) {
    if (!pagerank.contains("kc")) {
        std::printf("%-6s%-22s%s\n", "Rank", "Node", "PageRank");
        for (const auto& row : pagerank.at("raw"))
            std::printf("%-6zu%-22s%.4f\n", row.at("rank").get<std::size_t>(),
                        row.at("node").get<std::string>().c_str(), row.at("score").get<double>());
        return;
    }
    const auto& raw = pagerank.at("raw");
    const auto& kc = pagerank.at("kc");
    std::printf("%-6s%-18s%-12s%-18s%s\n", "Rank", "Without KC", "PageRank", "With KC",
                "PageRank");
    for (std::size_t i = 0; i < raw.size(); ++i)
        std::printf("%-6zu%-18s%-12.4f%-18s%.4f\n", i + 1,
                    raw[i].at("node").get<std::string>().c_str(), raw[i].at("score").get<double>(),
                    kc[i].at("node").get<std::string>().c_str(), kc[i].at("score").get<double>());
}

void print_analyze_summary(const json& r) {
    print_rank_table(r.at("pagerank"));
    if (r.at("pagerank").contains("jaccard_overlap"))
        std::printf("top-k overlap (Jaccard): %.3f\n",
                    r.at("pagerank").at("jaccard_overlap").get<double>());
    if (r.contains("drift") && r.at("drift").is_object())
        for (const auto& [gen, d] : r.at("drift").items())
            std::printf("drift %-10s mean %.6f  median %.6f  max %.6f\n", gen.c_str(),
                        d.at("mean").get<double>(), d.at("median").get<double>(),
                        d.at("max").get<double>());
    if (r.contains("notices"))
        for (const auto& n : r.at("notices"))
            std::printf("notice: %s\n", n.get<std::string>().c_str());
    if (r.contains("projections"))
        for (const auto& [gen, p] : r.at("projections").items())
            std::printf("projection %-10s -> %s\n", gen.c_str(),
                        p.at("file").get<std::string>().c_str());
}

int run_stage(kcgml_status (*stage)(const char*, char**), const json& cfg,
              void (*print)(const json&), bool print_json) {
    char* report = nullptr;
    const kcgml_status status = stage(cfg.dump().c_str(), &report);
    if (status != KCGML_OK) {
        std::cerr << "error (" << kcgml_status_name(status) << "): " << kcgml_last_error()
                  << "\n";
        return exit_code(status);
    }
    const json r = json::parse(report);
    kcgml_string_free(report);
    if (print_json)
        std::cout << r.dump(2) << "\n";
    else if (print)
        print(r);
    return 0;
}

int run_pipeline_cmd(const json& cfg, bool print_json) {
    char* report = nullptr;
    const kcgml_status status = kcgml_run_pipeline(cfg.dump().c_str(), &report);
    if (status != KCGML_OK) {
        std::cerr << "error (" << kcgml_status_name(status) << "): " << kcgml_last_error()
                  << "\n";
        return exit_code(status);
    }
    const json r = json::parse(report);
    kcgml_string_free(report);
    if (print_json) {
        std::cout << r.dump(2) << "\n";
        return 0;
    }
    print_ingest_summary(r.at("ingest"));
    if (r.contains("complete")) print_complete_summary(r.at("complete"));
    print_embed_summary(r.at("embed"));
    print_analyze_summary(r.at("analyze"));
    return 0;
}

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--out", f.out, "run directory for artifacts");
    cmd->add_option("--seed", f.seed, "global RNG seed");
    cmd->add_option("--threads", f.threads, "worker threads (0 = all cores, 1 = serial)");
    cmd->add_option("--config", f.config_file, "JSON config file; flags override it");
    cmd->add_flag("--json", f.print_json, "print the full stage report as JSON");
}

void add_ingest(CLI::App* cmd, Flags& f) {
    cmd->add_option("--contacts", f.contacts, "contact file with `t i j` lines");
    cmd->add_option("--metadata", f.metadata, "metadata file with `i department` lines");
    cmd->add_flag("--synthetic", f.synthetic, "generate a synthetic office dataset instead");
    cmd->add_option("--people", f.people, "synthetic: number of people");
    cmd->add_option("--departments", f.departments, "synthetic: number of departments");
    cmd->add_option("--timestamps", f.timestamps, "synthetic: number of 20s intervals");
    cmd->add_option("--event-rate", f.event_rate, "synthetic: expected events per interval");
    cmd->add_option("--group-min", f.group_min, "synthetic: smallest co-located group");
    cmd->add_option("--group-max", f.group_max, "synthetic: largest co-located group");
}

void add_complete(CLI::App* cmd, Flags& f) {
    cmd->add_option("--beta", f.beta, "transmissibility coefficient (default 0.01)");
    cmd->add_option("--tau", f.tau, "propagation threshold (default 0.2)");
    cmd->add_option("--aggregator", f.aggregator, "noisy_or | max | avg | sum");
    cmd->add_option("--decay", f.decay, "path strength form: subtractive | scaled");
    cmd->add_flag("--no-clamp", f.no_clamp, "do not clamp path strengths into [0,1]");
    cmd->add_option("--max-hops", f.max_hops, "contagion propagation depth (default 1)");
    cmd->add_option("--contagion-top-k", f.contagion_top_k,
                    "seed the k highest-PageRank people (default 5)");
    cmd->add_option("--contagion-seeds", f.contagion_seeds, "comma-separated seed ids");
    cmd->add_flag("--no-contagion", f.no_contagion, "skip the contagion step");
}

void add_embed(CLI::App* cmd, Flags& f) {
    cmd->add_option("--embedder", f.embedder, "node2vec | graphsage | both");
    cmd->add_option("--dims", f.dims, "embedding dimensions (default 16)");
    cmd->add_option("--walks", f.walks, "node2vec walks per node (default 10)");
    cmd->add_option("--length", f.length, "node2vec walk length (default 80)");
    cmd->add_option("--window", f.window, "skip-gram context window (default 10)");
    cmd->add_option("--p", f.p, "node2vec return parameter (default 1)");
    cmd->add_option("--q", f.q, "node2vec in-out parameter (default 1)");
    cmd->add_option("--negative", f.negative, "skip-gram negative samples (default 5)");
    cmd->add_option("--epochs", f.epochs, "skip-gram epochs (default 5)");
    cmd->add_option("--lr", f.lr, "skip-gram learning rate (default 0.025)");
    cmd->add_option("--fanouts", f.fanouts, "graphsage per-layer budgets, e.g. 25,10");
    cmd->add_option("--sage-epochs", f.sage_epochs, "graphsage training epochs");
    cmd->add_option("--sage-lr", f.sage_lr, "graphsage learning rate");
    cmd->add_flag("--use-strength", f.use_strength, "strength-weighted embedding variants");
    cmd->add_flag("--dump-walks", f.dump_walks, "write the walk corpus as text");
}

void add_analyze(CLI::App* cmd, Flags& f) {
    cmd->add_option("--top-k", f.top_k, "ranking table size (default 10)");
    cmd->add_option("--pagerank-alpha", f.pr_alpha, "damping factor (default 0.85)");
    cmd->add_option("--pagerank-tolerance", f.pr_tolerance, "L1 stop threshold (default 1e-9)");
    cmd->add_option("--pagerank-max-iterations", f.pr_max_iterations, "iteration cap (default 100)");
    cmd->add_option("--pagerank-normalization", f.pr_normalization, "probability | per_node");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge-completion-enhanced graph embedding pipeline"};
    app.set_version_flag("--version", []() { return std::string(kcgml_version()); });
    app.require_subcommand(1);
    Flags f;

    CLI::App* ingest = app.add_subcommand("ingest", "parse contacts into a knowledge graph");
    add_common(ingest, f);
    add_ingest(ingest, f);

    CLI::App* complete =
        app.add_subcommand("complete", "infer transitive contacts and contagion strengths");
    add_common(complete, f);
    add_complete(complete, f);

    CLI::App* embed = app.add_subcommand("embed", "compute node embeddings");
    add_common(embed, f);
    add_embed(embed, f);

    CLI::App* analyze = app.add_subcommand("analyze", "pagerank shift, drift, and projections");
    add_common(analyze, f);
    add_analyze(analyze, f);

    CLI::App* pipeline = app.add_subcommand("pipeline", "run every stage in order");
    add_common(pipeline, f);
    add_ingest(pipeline, f);
    add_complete(pipeline, f);
    add_embed(pipeline, f);
    add_analyze(pipeline, f);
    pipeline->add_flag("--no-kc", f.no_kc, "baseline mode: skip knowledge completion");
    pipeline->add_option("--from-manifest", f.from_manifest,
                         "reuse the config snapshot of a previous run's manifest.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2; // usage problems are config errors
    }

    if (ingest->parsed())
        return run_stage(kcgml_run_ingest, build_config(*ingest, f), print_ingest_summary,
                         f.print_json);
    if (complete->parsed())
        return run_stage(kcgml_run_complete, build_config(*complete, f), print_complete_summary,
                         f.print_json);
    if (embed->parsed())
        return run_stage(kcgml_run_embed, build_config(*embed, f), print_embed_summary,
                         f.print_json);
    if (analyze->parsed())
        return run_stage(kcgml_run_analyze, build_config(*analyze, f), print_analyze_summary,
                         f.print_json);
    return run_pipeline_cmd(build_config(*pipeline, f), f.print_json);
}
