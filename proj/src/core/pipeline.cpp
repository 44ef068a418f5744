#include "core/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <sstream>

#include "core/parallel.hpp"
#include "core/text_io.hpp"

namespace fs = std::filesystem;

namespace kcgml {

namespace artifact {

std::string embeddings_csv(const std::string& generator, const std::string& variant) {
    return "embeddings_" + generator + "_" + variant + ".csv";
}

std::string walks_txt(const std::string& variant) { return "walks_node2vec_" + variant + ".txt"; }

std::string projection_csv(const std::string& generator) {
    return "projection_" + generator + ".csv";
}

} // namespace artifact

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

unsigned resolve_threads(unsigned configured) {
    return configured == 0 ? default_threads() : configured;
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

class StageTimer {
public:
    StageTimer() : start_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        const auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// manifest.json: config snapshots, per-stage wall times, artifact hashes
class Manifest {
public:
    static Manifest load_or_new(const std::string& dir) {
        Manifest m;
        const std::string path = join(dir, artifact::kManifest);
        if (fs::exists(path)) {
            try {
                m.j_ = ordered_json::parse(read_text_file(path));
            } catch (...) {
                m.j_ = ordered_json();
            }
        }
        if (!m.j_.is_object()) m.j_ = ordered_json::object();
        m.j_["tool"] = kToolName;
        m.j_["version"] = kToolVersion;
        if (!m.j_.contains("config") || !m.j_["config"].is_object())
            m.j_["config"] = ordered_json::object();
        if (!m.j_.contains("stages") || !m.j_["stages"].is_array())
            m.j_["stages"] = ordered_json::array();
        if (!m.j_.contains("artifacts") || !m.j_["artifacts"].is_object())
            m.j_["artifacts"] = ordered_json::object();
        return m;
    }

    void set_config(const std::string& section, ordered_json echo) {
        j_["config"][section] = std::move(echo);
    }

    void set_stage(const std::string& name, double wall_ms) {
        for (auto& entry : j_["stages"]) {
            if (entry.value("name", "") == name) {
                entry["wall_ms"] = wall_ms;
                return;
            }
        }
        j_["stages"].push_back({{"name", name}, {"wall_ms", wall_ms}});
    }

    void record(const std::string& dir, const std::string& rel) {
        char hex[17];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(read_text_file(join(dir, rel)))));
        j_["artifacts"][rel] = std::string("fnv1a64:") + hex;
    }

    void save(const std::string& dir) {
        write_text_file(join(dir, artifact::kManifest), j_.dump(2) + "\n");
    }

private:
    ordered_json j_;
};

void write_report(const std::string& dir, const std::string& rel, const ordered_json& j) {
    write_text_file(join(dir, rel), j.dump(2) + "\n");
}

void require_artifact(const std::string& dir, const std::string& rel, const std::string& stage) {
    if (!fs::exists(join(dir, rel)))
        throw Error(Status::DependencyError,
                    rel + " not found in " + dir + "; run `kcgml " + stage + "` first");
}

// ---- strict config parsing ----------------------------------------------

void check_keys(const ordered_json& j, std::initializer_list<std::string_view> allowed,
                const std::string& section) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (std::string_view a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok)
            throw Error(Status::ConfigError, "unknown key `" + key + "` in " + section);
    }
}

double get_number(const ordered_json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw Error(Status::ConfigError, std::string(key) + " must be a number");
    return j.at(key).get<double>();
}

std::size_t get_count(const ordered_json& j, const char* key, std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 0)
        throw Error(Status::ConfigError, std::string(key) + " must be a non-negative integer");
    return j.at(key).get<std::size_t>();
}

bool get_bool(const ordered_json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean())
        throw Error(Status::ConfigError, std::string(key) + " must be a boolean");
    return j.at(key).get<bool>();
}

std::string get_string(const ordered_json& j, const char* key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string())
        throw Error(Status::ConfigError, std::string(key) + " must be a string");
    return j.at(key).get<std::string>();
}

} // namespace

void PipelineConfig::validate() const {
    strength.validate();
    walks.validate();
    skipgram.validate();
    sage.validate();
    pagerank.validate();
    if (synthetic) synthetic->validate();
    if (embedder != "node2vec" && embedder != "graphsage" && embedder != "both")
        throw Error(Status::ConfigError,
                    "unknown embedder `" + embedder + "` (node2vec | graphsage | both)");
    if (top_k < 1) throw Error(Status::ConfigError, "top_k must be >= 1");
    if (synthetic && contacts_path)
        throw Error(Status::ConfigError, "choose either contact files or --synthetic, not both");
}

bool PipelineConfig::wants(const std::string& generator) const {
    return embedder == "both" || embedder == generator;
}

PipelineConfig PipelineConfig::from_json(const ordered_json& j) {
    PipelineConfig cfg;
    check_keys(j,
               {"out", "seed", "threads", "input", "kc", "embedder", "use_strength",
                "dump_walks", "node2vec", "graphsage", "pagerank", "top_k"},
               "config");
    cfg.out_dir = get_string(j, "out", cfg.out_dir);
    cfg.seed = get_count(j, "seed", 42);
    cfg.threads = static_cast<unsigned>(get_count(j, "threads", 0));

    if (j.contains("input")) {
        const auto& in = j.at("input");
        check_keys(in, {"contacts", "metadata", "synthetic"}, "input");
        if (in.contains("contacts")) cfg.contacts_path = get_string(in, "contacts", "");
        if (in.contains("metadata")) cfg.metadata_path = get_string(in, "metadata", "");
        if (in.contains("synthetic")) {
            const auto& syn = in.at("synthetic");
            check_keys(syn,
                       {"n_people", "n_departments", "n_timestamps", "event_rate", "group_min",
                        "group_max", "seed"},
                       "input.synthetic");
            SyntheticConfig sc;
            sc.n_people = get_count(syn, "n_people", sc.n_people);
            sc.n_departments = get_count(syn, "n_departments", sc.n_departments);
            sc.n_timestamps = get_count(syn, "n_timestamps", sc.n_timestamps);
            sc.event_rate = get_number(syn, "event_rate", sc.event_rate);
            sc.group_min = get_count(syn, "group_min", sc.group_min);
            sc.group_max = get_count(syn, "group_max", sc.group_max);
            sc.seed = get_count(syn, "seed", cfg.seed);
            cfg.synthetic = sc;
        }
    }

    if (j.contains("kc")) {
        const auto& kc = j.at("kc");
        check_keys(kc,
                   {"enable", "beta", "tau", "aggregator", "decay_form", "clamp", "max_hops",
                    "contagion_top_k", "contagion_seeds"},
                   "kc");
        cfg.kc_enable = get_bool(kc, "enable", true);
        cfg.strength.beta = get_number(kc, "beta", cfg.strength.beta);
        cfg.strength.tau = get_number(kc, "tau", cfg.strength.tau);
        cfg.strength.aggregator = parse_aggregator(get_string(kc, "aggregator", "noisy_or"));
        cfg.strength.decay_form = parse_decay_form(get_string(kc, "decay_form", "subtractive"));
        cfg.strength.clamp = get_bool(kc, "clamp", true);
        cfg.strength.max_hops = get_count(kc, "max_hops", cfg.strength.max_hops);
        cfg.contagion_top_k = get_count(kc, "contagion_top_k", cfg.contagion_top_k);
        if (kc.contains("contagion_seeds")) {
            if (!kc.at("contagion_seeds").is_array())
                throw Error(Status::ConfigError, "contagion_seeds must be an array of ids");
            for (const auto& s : kc.at("contagion_seeds")) {
                if (!s.is_string())
                    throw Error(Status::ConfigError, "contagion_seeds entries must be strings");
                cfg.contagion_seeds.push_back(s.get<std::string>());
            }
        }
    }

    cfg.embedder = get_string(j, "embedder", cfg.embedder);
    cfg.use_strength = get_bool(j, "use_strength", cfg.use_strength);
    cfg.dump_walks = get_bool(j, "dump_walks", cfg.dump_walks);

    if (j.contains("node2vec")) {
        const auto& nv = j.at("node2vec");
        check_keys(nv,
                   {"num_walks", "walk_length", "p", "q", "dimensions", "window",
                    "negative_samples", "epochs", "learning_rate"},
                   "node2vec");
        cfg.walks.num_walks_per_node = get_count(nv, "num_walks", cfg.walks.num_walks_per_node);
        cfg.walks.walk_length = get_count(nv, "walk_length", cfg.walks.walk_length);
        cfg.walks.p = get_number(nv, "p", cfg.walks.p);
        cfg.walks.q = get_number(nv, "q", cfg.walks.q);
        cfg.skipgram.dimensions = get_count(nv, "dimensions", cfg.skipgram.dimensions);
        cfg.skipgram.window = get_count(nv, "window", cfg.skipgram.window);
        cfg.skipgram.negative_samples =
            get_count(nv, "negative_samples", cfg.skipgram.negative_samples);
        cfg.skipgram.epochs = get_count(nv, "epochs", cfg.skipgram.epochs);
        cfg.skipgram.learning_rate = get_number(nv, "learning_rate", cfg.skipgram.learning_rate);
    }

    if (j.contains("graphsage")) {
        const auto& gs = j.at("graphsage");
        check_keys(gs,
                   {"fanouts", "dimensions", "epochs", "learning_rate", "negative_samples",
                    "walks_per_node", "walk_length", "weighted_average"},
                   "graphsage");
        if (gs.contains("fanouts")) {
            if (!gs.at("fanouts").is_array() || gs.at("fanouts").empty())
                throw Error(Status::ConfigError, "fanouts must be a non-empty array");
            cfg.sage.fanouts.clear();
            for (const auto& f : gs.at("fanouts")) {
                if (!f.is_number_integer() || f.get<long long>() < 1)
                    throw Error(Status::ConfigError, "fanouts entries must be positive integers");
                cfg.sage.fanouts.push_back(f.get<std::size_t>());
            }
        }
        cfg.sage.dimensions = get_count(gs, "dimensions", cfg.sage.dimensions);
        cfg.sage.epochs = get_count(gs, "epochs", cfg.sage.epochs);
        cfg.sage.learning_rate = get_number(gs, "learning_rate", cfg.sage.learning_rate);
        cfg.sage.negative_samples = get_count(gs, "negative_samples", cfg.sage.negative_samples);
        cfg.sage.walks_per_node = get_count(gs, "walks_per_node", cfg.sage.walks_per_node);
        cfg.sage.walk_length = get_count(gs, "walk_length", cfg.sage.walk_length);
        cfg.sage.weighted_average = get_bool(gs, "weighted_average", cfg.sage.weighted_average);
    }

    if (j.contains("pagerank")) {
        const auto& pr = j.at("pagerank");
        check_keys(pr, {"alpha", "tolerance", "max_iterations", "normalization"}, "pagerank");
        cfg.pagerank.alpha = get_number(pr, "alpha", cfg.pagerank.alpha);
        cfg.pagerank.tolerance = get_number(pr, "tolerance", cfg.pagerank.tolerance);
        cfg.pagerank.max_iterations = get_count(pr, "max_iterations", cfg.pagerank.max_iterations);
        cfg.pagerank.normalization =
            parse_pagerank_norm(get_string(pr, "normalization", "per_node"));
    }

    cfg.top_k = get_count(j, "top_k", cfg.top_k);
    cfg.walks.seed = cfg.seed;
    cfg.skipgram.seed = cfg.seed;
    cfg.sage.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

ordered_json PipelineConfig::to_json() const {
    ordered_json j;
    j["out"] = out_dir;
    j["seed"] = seed;
    j["threads"] = threads;
    ordered_json input = ordered_json::object();
    if (contacts_path) input["contacts"] = *contacts_path;
    if (metadata_path) input["metadata"] = *metadata_path;
    if (synthetic)
        input["synthetic"] = {{"n_people", synthetic->n_people},
                              {"n_departments", synthetic->n_departments},
                              {"n_timestamps", synthetic->n_timestamps},
                              {"event_rate", synthetic->event_rate},
                              {"group_min", synthetic->group_min},
                              {"group_max", synthetic->group_max},
                              {"seed", synthetic->seed}};
    j["input"] = std::move(input);
    ordered_json seeds = ordered_json::array();
    for (const auto& s : contagion_seeds) seeds.push_back(s);
    j["kc"] = {{"enable", kc_enable},
               {"beta", strength.beta},
               {"tau", strength.tau},
               {"aggregator", aggregator_name(strength.aggregator)},
               {"decay_form", decay_form_name(strength.decay_form)},
               {"clamp", strength.clamp},
               {"max_hops", strength.max_hops},
               {"contagion_top_k", contagion_top_k},
               {"contagion_seeds", std::move(seeds)}};
    j["embedder"] = embedder;
    j["use_strength"] = use_strength;
    j["dump_walks"] = dump_walks;
    j["node2vec"] = {{"num_walks", walks.num_walks_per_node},
                     {"walk_length", walks.walk_length},
                     {"p", walks.p},
                     {"q", walks.q},
                     {"dimensions", skipgram.dimensions},
                     {"window", skipgram.window},
                     {"negative_samples", skipgram.negative_samples},
                     {"epochs", skipgram.epochs},
                     {"learning_rate", skipgram.learning_rate}};
    ordered_json fanouts = ordered_json::array();
    for (std::size_t f : sage.fanouts) fanouts.push_back(f);
    j["graphsage"] = {{"fanouts", std::move(fanouts)},
                      {"dimensions", sage.dimensions},
                      {"epochs", sage.epochs},
                      {"learning_rate", sage.learning_rate},
                      {"negative_samples", sage.negative_samples},
                      {"walks_per_node", sage.walks_per_node},
                      {"walk_length", sage.walk_length},
                      {"weighted_average", sage.weighted_average}};
    j["pagerank"] = {{"alpha", pagerank.alpha},
                     {"tolerance", pagerank.tolerance},
                     {"max_iterations", pagerank.max_iterations},
                     {"normalization", pagerank_norm_name(pagerank.normalization)}};
    j["top_k"] = top_k;
    return j;
}

// ---- stages ---------------------------------------------------------------

ordered_json run_ingest(const PipelineConfig& cfg) {
    cfg.validate();
    if (!cfg.synthetic && !cfg.contacts_path)
        throw Error(Status::ConfigError, "ingest needs contact files or a synthetic config");
    StageTimer timer;

    std::string contacts_text;
    std::string metadata_text;
    if (cfg.synthetic) {
        SyntheticData data = generate_synthetic(*cfg.synthetic);
        contacts_text = std::move(data.contacts_text);
        metadata_text = std::move(data.metadata_text);
    } else {
        contacts_text = read_text_file(*cfg.contacts_path);
        if (cfg.metadata_path) metadata_text = read_text_file(*cfg.metadata_path);
    }

    IngestReport report;
    {
        std::istringstream cs(contacts_text);
        report.contacts = parse_contacts(cs);
    }
    if (!metadata_text.empty()) {
        std::istringstream ms(metadata_text);
        report.metadata = parse_metadata(ms);
    }
    const KnowledgeGraph g = build_kg(report.contacts.rows, report.metadata.rows, &report);

    fs::create_directories(cfg.out_dir);
    std::vector<std::string> files;
    if (cfg.synthetic) {
        write_text_file(join(cfg.out_dir, artifact::kContacts), contacts_text);
        write_text_file(join(cfg.out_dir, artifact::kMetadata), metadata_text);
        files.push_back(artifact::kContacts);
        files.push_back(artifact::kMetadata);
    }
    write_graph(g, join(cfg.out_dir, artifact::kGraphRaw));
    files.push_back(artifact::kGraphRaw);
    ordered_json rj = report.to_json();
    write_report(cfg.out_dir, artifact::kIngestReport, rj);
    files.push_back(artifact::kIngestReport);

    Manifest m = Manifest::load_or_new(cfg.out_dir);
    m.set_config("ingest", cfg.to_json());
    m.set_stage("ingest", timer.elapsed_ms());
    for (const auto& f : files) m.record(cfg.out_dir, f);
    m.save(cfg.out_dir);

    rj["files"] = files;
    return rj;
}

ordered_json run_complete(const PipelineConfig& cfg) {
    cfg.validate(); // bad beta/tau fail here, before any file is touched
    StageTimer timer;
    require_artifact(cfg.out_dir, artifact::kGraphRaw, "ingest");
    const KnowledgeGraph raw = load_graph(join(cfg.out_dir, artifact::kGraphRaw));

    auto [kc, stats] = transitive_closure_step(raw, resolve_threads(cfg.threads));
    kc.compute_node_properties();
    edge_strengths(kc, cfg.strength);

    std::optional<ContagionReport> contagion;
    if (!cfg.contagion_seeds.empty()) {
        std::vector<NodeId> seeds;
        for (const std::string& raw_id : cfg.contagion_seeds) seeds.push_back(kc.id_of(raw_id));
        contagion = propagate_contagion(kc, seeds, cfg.strength);
    } else if (cfg.contagion_top_k > 0) {
        // seeds are individuals, never departments
        const PageRankResult pr = pagerank(kc, cfg.pagerank);
        std::vector<NodeId> persons;
        for (const NodeRecord& n : kc.nodes())
            if (n.has_label(label::kPerson)) persons.push_back(n.id);
        std::sort(persons.begin(), persons.end(), [&](NodeId a, NodeId b) {
            return pr.scores[a] != pr.scores[b] ? pr.scores[a] > pr.scores[b] : a < b;
        });
        persons.resize(std::min(persons.size(), cfg.contagion_top_k));
        if (!persons.empty()) contagion = propagate_contagion(kc, persons, cfg.strength);
    }

    write_graph(kc, join(cfg.out_dir, artifact::kGraphKc));

    ordered_json rj;
    rj["closure"] = stats.to_json();
    rj["pairs"] = {{"raw", raw.contact_pair_count()},
                   {"kc", kc.contact_pair_count()},
                   {"events_raw", raw.contact_event_count()},
                   {"events_kc", kc.contact_event_count()}};
    rj["strengths"] = {{"beta", cfg.strength.beta},
                       {"edges", kc.edge_count(Relation::HasContactWith)}};
    rj["contagion"] = contagion ? contagion->to_json(cfg.strength) : ordered_json();
    rj["reference"] = {{"office_raw_pairs", 1694}, {"office_kc_pairs", 1882}};
    write_report(cfg.out_dir, artifact::kKcReport, rj);

    Manifest m = Manifest::load_or_new(cfg.out_dir);
    m.set_config("complete", cfg.to_json());
    m.set_stage("complete", timer.elapsed_ms());
    m.record(cfg.out_dir, artifact::kGraphKc);
    m.record(cfg.out_dir, artifact::kKcReport);
    m.save(cfg.out_dir);

    rj["files"] = {artifact::kGraphKc, artifact::kKcReport};
    return rj;
}

ordered_json run_embed(const PipelineConfig& cfg) {
    cfg.validate();
    StageTimer timer;
    require_artifact(cfg.out_dir, artifact::kGraphRaw, "ingest");

    std::vector<std::pair<std::string, std::string>> variants{{"raw", artifact::kGraphRaw}};
    if (fs::exists(join(cfg.out_dir, artifact::kGraphKc)))
        variants.emplace_back("kc", artifact::kGraphKc);

    const unsigned threads = resolve_threads(cfg.threads);
    ordered_json rj;
    std::vector<std::string> files;
    for (const auto& [variant, graph_file] : variants) {
        const KnowledgeGraph g = load_graph(join(cfg.out_dir, graph_file));
        ordered_json vj;
        if (cfg.wants("node2vec")) {
            WalkConfig wc = cfg.walks;
            wc.seed = cfg.seed;
            wc.use_strength = cfg.use_strength;
            const WalkCorpus corpus = generate_walks(g, wc, threads);
            if (cfg.dump_walks) {
                const std::string name = artifact::walks_txt(variant);
                write_text_file(join(cfg.out_dir, name), corpus.to_text(g));
                files.push_back(name);
            }
            SkipGramConfig sgc = cfg.skipgram;
            sgc.seed = cfg.seed;
            const SkipGramResult result = train_skipgram(corpus, g, sgc);
            const std::string name = artifact::embeddings_csv("node2vec", variant);
            result.embedding.save_csv(join(cfg.out_dir, name));
            files.push_back(name);
            vj["node2vec"] = {{"file", name},
                              {"walks", corpus.walks.size()},
                              {"epoch_loss", result.epoch_loss}};
        }
        if (cfg.wants("graphsage")) {
            SageConfig sc = cfg.sage;
            sc.seed = cfg.seed;
            sc.use_strength = cfg.use_strength;
            const FeatureMatrix features = build_features(g);
            const SageTrainResult result = train_unsupervised(g, features, sc);
            const EmbeddingMatrix emb =
                sage_forward(features, result.neighborhoods, result.weights, sc, g);
            const std::string name = artifact::embeddings_csv("graphsage", variant);
            emb.save_csv(join(cfg.out_dir, name));
            files.push_back(name);
            vj["graphsage"] = {{"file", name}, {"epoch_loss", result.epoch_loss}};
        }
        rj[variant] = std::move(vj);
    }

    Manifest m = Manifest::load_or_new(cfg.out_dir);
    m.set_config("embed", cfg.to_json());
    m.set_stage("embed", timer.elapsed_ms());
    for (const auto& f : files) m.record(cfg.out_dir, f);
    m.save(cfg.out_dir);

    rj["files"] = files;
    return rj;
}

namespace {

std::string projection_rows(const EmbeddingMatrix& emb, const Matrix& coords, std::size_t offset,
                            const std::string& variant) {
    std::string out;
    for (std::size_t r = 0; r < emb.rows(); ++r) {
        out += emb.ids[r];
        out += ',';
        out += format_double(coords.at(offset + r, 0));
        out += ',';
        out += format_double(coords.at(offset + r, 1));
        out += ',';
        out += variant;
        out += '\n';
    }
    return out;
}

} // namespace

ordered_json run_analyze(const PipelineConfig& cfg) {
    cfg.validate();
    StageTimer timer;
    require_artifact(cfg.out_dir, artifact::kGraphRaw, "ingest");
    const KnowledgeGraph raw = load_graph(join(cfg.out_dir, artifact::kGraphRaw));
    const bool kc_mode = fs::exists(join(cfg.out_dir, artifact::kGraphKc));

    std::vector<std::string> names;
    for (const NodeRecord& n : raw.nodes()) names.push_back(n.raw_id);

    // PageRank: side-by-side raw/KC top-k tables, or raw-only in baseline mode
    ordered_json ranking;
    const PageRankResult pr_raw = pagerank(raw, cfg.pagerank);
    if (kc_mode) {
        const KnowledgeGraph kc = load_graph(join(cfg.out_dir, artifact::kGraphKc));
        if (kc.node_count() != raw.node_count())
            throw Error(Status::InputError, "raw and kc graphs cover different node sets");
        const PageRankResult pr_kc = pagerank(kc, cfg.pagerank);
        const RankingComparison cmp = top_k_comparison(pr_raw.scores, pr_kc.scores, cfg.top_k);
        ranking = cmp.to_json(names);
        ranking["converged"] = {{"raw", pr_raw.converged}, {"kc", pr_kc.converged}};
    } else {
        const RankingComparison cmp = top_k_comparison(pr_raw.scores, pr_raw.scores, cfg.top_k);
        ranking["k"] = cmp.k;
        ranking["raw"] = cmp.to_json(names)["raw"];
        ranking["converged"] = {{"raw", pr_raw.converged}};
    }

    std::vector<std::string> generators;
    if (cfg.wants("node2vec")) generators.push_back("node2vec");
    if (cfg.wants("graphsage")) generators.push_back("graphsage");

    std::vector<ordered_json> drifts;
    std::vector<std::string> projection_files;
    std::vector<std::string> files;
    ordered_json projections = ordered_json::object();
    for (const std::string& gen : generators) {
        const std::string raw_csv = artifact::embeddings_csv(gen, "raw");
        require_artifact(cfg.out_dir, raw_csv, "embed");
        EmbeddingMatrix emb_raw = EmbeddingMatrix::load_csv(join(cfg.out_dir, raw_csv));
        emb_raw.generator = gen;

        Matrix stacked;
        std::optional<EmbeddingMatrix> emb_kc;
        if (kc_mode) {
            const std::string kc_csv = artifact::embeddings_csv(gen, "kc");
            require_artifact(cfg.out_dir, kc_csv, "embed");
            emb_kc = EmbeddingMatrix::load_csv(join(cfg.out_dir, kc_csv));
            emb_kc->generator = gen;
            const DriftReport drift = embedding_drift(emb_raw, *emb_kc);
            drifts.push_back(drift.to_json(emb_raw.ids));

            stacked = Matrix(emb_raw.rows() + emb_kc->rows(), emb_raw.dims());
            std::copy(emb_raw.values.data.begin(), emb_raw.values.data.end(),
                      stacked.data.begin());
            std::copy(emb_kc->values.data.begin(), emb_kc->values.data.end(),
                      stacked.data.begin() + static_cast<std::ptrdiff_t>(emb_raw.values.data.size()));
        } else {
            stacked = emb_raw.values;
        }

        // one joint projection so raw and kc clouds share axes
        const Projection2D proj = pca_project(stacked);
        std::string csv = "node_id,pc1,pc2,variant\n";
        csv += projection_rows(emb_raw, proj.coords, 0, "raw");
        if (emb_kc) csv += projection_rows(*emb_kc, proj.coords, emb_raw.rows(), "kc");
        const std::string name = artifact::projection_csv(gen);
        write_text_file(join(cfg.out_dir, name), csv);
        projection_files.push_back(name);
        files.push_back(name);
        projections[gen] = {{"file", name},
                            {"explained_variance",
                             {proj.explained_variance[0], proj.explained_variance[1]}},
                            {"degenerate", proj.degenerate}};
    }

    std::optional<ordered_json> closure;
    if (fs::exists(join(cfg.out_dir, artifact::kKcReport))) {
        ordered_json kc_report = ordered_json::parse(
            read_text_file(join(cfg.out_dir, artifact::kKcReport)));
        kc_report.erase("files");
        closure = std::move(kc_report);
    }

    ordered_json config_echo = cfg.to_json();
    config_echo.erase("out"); // reports carry no machine-local paths
    ordered_json rj = assemble_report(closure, ranking, drifts, projection_files, config_echo);
    rj["kc_enabled"] = kc_mode;
    rj["projections"] = std::move(projections);
    if (!kc_mode)
        rj["notices"] = {"kg_kc.kg not present: drift and raw/kc comparison skipped "
                         "(baseline mode)"};
    write_report(cfg.out_dir, artifact::kAnalyticsReport, rj);
    files.push_back(artifact::kAnalyticsReport);

    Manifest m = Manifest::load_or_new(cfg.out_dir);
    m.set_config("analyze", cfg.to_json());
    m.set_stage("analyze", timer.elapsed_ms());
    for (const auto& f : files) m.record(cfg.out_dir, f);
    m.save(cfg.out_dir);

    rj["files"] = files;
    return rj;
}

ordered_json run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    ordered_json out;
    out["ingest"] = run_ingest(cfg);
    if (cfg.kc_enable) out["complete"] = run_complete(cfg);
    out["embed"] = run_embed(cfg);
    out["analyze"] = run_analyze(cfg);

    Manifest m = Manifest::load_or_new(cfg.out_dir);
    m.set_config("pipeline", cfg.to_json());
    m.save(cfg.out_dir);
    return out;
}

} // namespace kcgml
