#include "kcgml/kcgml.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "core/analytics.hpp"
#include "core/embedding.hpp"
#include "core/graph.hpp"
#include "core/graphsage.hpp"
#include "core/ingest.hpp"
#include "core/kc.hpp"
#include "core/node2vec.hpp"
#include "core/parallel.hpp"
#include "core/pipeline.hpp"

using kcgml::ordered_json;

struct kcgml_graph {
    kcgml::KnowledgeGraph impl;
};

struct kcgml_embedding {
    kcgml::EmbeddingMatrix impl;
};

namespace {

// Status values are shared verbatim between the C++ core and the C enum.
static_assert(static_cast<int>(kcgml::Status::ConfigError) == KCGML_ERR_CONFIG);
static_assert(static_cast<int>(kcgml::Status::InputError) == KCGML_ERR_INPUT);
static_assert(static_cast<int>(kcgml::Status::NotFound) == KCGML_ERR_NOT_FOUND);
static_assert(static_cast<int>(kcgml::Status::SelfLoop) == KCGML_ERR_SELF_LOOP);
static_assert(static_cast<int>(kcgml::Status::FormatVersion) == KCGML_ERR_FORMAT_VERSION);
static_assert(static_cast<int>(kcgml::Status::Truncated) == KCGML_ERR_TRUNCATED);
static_assert(static_cast<int>(kcgml::Status::DependencyError) == KCGML_ERR_DEPENDENCY);
static_assert(static_cast<int>(kcgml::Status::InternalError) == KCGML_ERR_INTERNAL);

thread_local std::string t_last_error;

template <typename Fn>
kcgml_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        t_last_error.clear();
        return KCGML_OK;
    } catch (const kcgml::Error& e) {
        t_last_error = e.what();
        return static_cast<kcgml_status>(e.status());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return KCGML_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return KCGML_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool cond, const char* message) {
    if (!cond) throw kcgml::Error(kcgml::Status::ConfigError, message);
}

ordered_json parse_json_config(const char* config_json) {
    if (config_json == nullptr || *config_json == '\0') return ordered_json::object();
    ordered_json j = ordered_json::parse(std::string(config_json), nullptr, false);
    if (j.is_discarded())
        throw kcgml::Error(kcgml::Status::ConfigError, "config is not valid JSON");
    if (!j.is_object())
        throw kcgml::Error(kcgml::Status::ConfigError, "config must be a JSON object");
    return j;
}

kcgml::PipelineConfig parse_pipeline_config(const char* config_json) {
    return kcgml::PipelineConfig::from_json(parse_json_config(config_json));
}

kcgml::StrengthModel parse_model(const char* model_json) {
    const ordered_json j = parse_json_config(model_json);
    kcgml::StrengthModel m;
    for (const auto& [key, value] : j.items()) {
        if (key == "beta")
            m.beta = value.get<double>();
        else if (key == "tau")
            m.tau = value.get<double>();
        else if (key == "aggregator")
            m.aggregator = kcgml::parse_aggregator(value.get<std::string>());
        else if (key == "decay_form")
            m.decay_form = kcgml::parse_decay_form(value.get<std::string>());
        else if (key == "clamp")
            m.clamp = value.get<bool>();
        else if (key == "max_hops")
            m.max_hops = value.get<std::size_t>();
        else
            throw kcgml::Error(kcgml::Status::ConfigError, "unknown key `" + key + "` in model");
    }
    m.validate();
    return m;
}

kcgml_status run_stage(ordered_json (*stage)(const kcgml::PipelineConfig&),
                       const char* config_json, char** report_json) noexcept {
    return guarded([&] {
        const kcgml::PipelineConfig cfg = parse_pipeline_config(config_json);
        const ordered_json report = stage(cfg);
        if (report_json) *report_json = dup_string(report.dump(2));
    });
}

} // namespace

extern "C" {

const char* kcgml_version(void) { return kcgml::kToolVersion; }

const char* kcgml_status_name(kcgml_status status) {
    return kcgml::status_name(static_cast<kcgml::Status>(status));
}

const char* kcgml_last_error(void) { return t_last_error.c_str(); }

void kcgml_string_free(char* s) { std::free(s); }

kcgml_status kcgml_graph_create(kcgml_graph** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be null");
        *out = new kcgml_graph();
    });
}

void kcgml_graph_free(kcgml_graph* g) { delete g; }

kcgml_status kcgml_graph_load(const char* path, kcgml_graph** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "path and out must not be null");
        auto g = std::make_unique<kcgml_graph>();
        g->impl = kcgml::load_graph(path);
        *out = g.release();
    });
}

kcgml_status kcgml_graph_save(const kcgml_graph* g, const char* path) {
    return guarded([&] {
        require(g != nullptr && path != nullptr, "graph and path must not be null");
        kcgml::write_graph(g->impl, path);
    });
}

kcgml_status kcgml_graph_add_contact(kcgml_graph* g, const char* person_i, const char* person_j,
                                     double t, int inferred) {
    return guarded([&] {
        require(g && person_i && person_j, "graph and person ids must not be null");
        const kcgml::NodeId i = g->impl.intern(person_i, kcgml::label::kPerson);
        const kcgml::NodeId j = g->impl.intern(person_j, kcgml::label::kPerson);
        g->impl.add_contact(i, j, t,
                            inferred ? kcgml::Provenance::Inferred : kcgml::Provenance::Direct);
    });
}

kcgml_status kcgml_graph_set_department(kcgml_graph* g, const char* person,
                                        const char* department) {
    return guarded([&] {
        require(g && person && department, "graph, person, department must not be null");
        const kcgml::NodeId p = g->impl.intern(person, kcgml::label::kPerson);
        const kcgml::NodeId d = g->impl.intern(department, kcgml::label::kDepartment);
        g->impl.add_part_of(p, d);
    });
}

kcgml_status kcgml_graph_compute_properties(kcgml_graph* g) {
    return guarded([&] {
        require(g != nullptr, "graph must not be null");
        g->impl.compute_node_properties();
    });
}

size_t kcgml_graph_node_count(const kcgml_graph* g) { return g ? g->impl.node_count() : 0; }

size_t kcgml_graph_contact_pair_count(const kcgml_graph* g) {
    return g ? g->impl.contact_pair_count() : 0;
}

size_t kcgml_graph_contact_event_count(const kcgml_graph* g) {
    return g ? g->impl.contact_event_count() : 0;
}

kcgml_status kcgml_graph_node_property(const kcgml_graph* g, const char* raw_id,
                                       const char* property, double* out) {
    return guarded([&] {
        require(g && raw_id && property && out, "arguments must not be null");
        const kcgml::NodeRecord& node = g->impl.node(g->impl.id_of(raw_id));
        const auto it = node.properties.find(property);
        if (it == node.properties.end())
            throw kcgml::Error(kcgml::Status::NotFound,
                               std::string("node has no property `") + property + "`");
        *out = it->second;
    });
}

kcgml_status kcgml_graph_neighbor_count(const kcgml_graph* g, const char* raw_id, size_t* out) {
    return guarded([&] {
        require(g && raw_id && out, "arguments must not be null");
        *out = g->impl.contact_degree(g->impl.id_of(raw_id));
    });
}

kcgml_status kcgml_close_transitive(const kcgml_graph* in, kcgml_graph** out, char** stats_json) {
    return guarded([&] {
        require(in && out, "graph and out must not be null");
        auto [closed, stats] = kcgml::transitive_closure_step(in->impl, kcgml::default_threads());
        auto g = std::make_unique<kcgml_graph>();
        g->impl = std::move(closed);
        g->impl.compute_node_properties();
        *out = g.release();
        if (stats_json) *stats_json = dup_string(stats.to_json().dump(2));
    });
}

double kcgml_path_strength(double contact_seconds, double source_probability, double beta,
                           int clamp) {
    kcgml::StrengthModel m;
    m.beta = beta;
    m.clamp = clamp != 0;
    return kcgml::path_strength(contact_seconds, source_probability, m);
}

double kcgml_noisy_or(const double* strengths, size_t count) {
    kcgml::StrengthModel m;
    return kcgml::aggregate_strength({strengths, count}, m);
}

kcgml_status kcgml_apply_edge_strengths(kcgml_graph* g, double beta) {
    return guarded([&] {
        require(g != nullptr, "graph must not be null");
        kcgml::StrengthModel m;
        m.beta = beta;
        kcgml::edge_strengths(g->impl, m);
    });
}

kcgml_status kcgml_propagate(kcgml_graph* g, const char* const* seed_ids, size_t n_seeds,
                             const char* model_json, char** report_json) {
    return guarded([&] {
        require(g != nullptr, "graph must not be null");
        require(seed_ids != nullptr || n_seeds == 0, "seed_ids must not be null");
        const kcgml::StrengthModel m = parse_model(model_json);
        std::vector<kcgml::NodeId> seeds;
        for (size_t i = 0; i < n_seeds; ++i) seeds.push_back(g->impl.id_of(seed_ids[i]));
        const kcgml::ContagionReport report = kcgml::propagate_contagion(g->impl, seeds, m);
        if (report_json) *report_json = dup_string(report.to_json(m).dump(2));
    });
}

kcgml_status kcgml_embed_node2vec(const kcgml_graph* g, const char* config_json,
                                  kcgml_embedding** out) {
    return guarded([&] {
        require(g && out, "graph and out must not be null");
        const kcgml::PipelineConfig cfg = parse_pipeline_config(config_json);
        kcgml::WalkConfig wc = cfg.walks;
        wc.use_strength = cfg.use_strength;
        const kcgml::WalkCorpus corpus =
            kcgml::generate_walks(g->impl, wc, cfg.threads == 0 ? kcgml::default_threads()
                                                                : cfg.threads);
        auto e = std::make_unique<kcgml_embedding>();
        e->impl = kcgml::train_skipgram(corpus, g->impl, cfg.skipgram).embedding;
        *out = e.release();
    });
}

kcgml_status kcgml_embed_graphsage(const kcgml_graph* g, const char* config_json,
                                   kcgml_embedding** out) {
    return guarded([&] {
        require(g && out, "graph and out must not be null");
        const kcgml::PipelineConfig cfg = parse_pipeline_config(config_json);
        kcgml::SageConfig sc = cfg.sage;
        sc.use_strength = cfg.use_strength;
        const kcgml::FeatureMatrix features = kcgml::build_features(g->impl);
        const kcgml::SageTrainResult result =
            kcgml::train_unsupervised(g->impl, features, sc);
        auto e = std::make_unique<kcgml_embedding>();
        e->impl =
            kcgml::sage_forward(features, result.neighborhoods, result.weights, sc, g->impl);
        *out = e.release();
    });
}

void kcgml_embedding_free(kcgml_embedding* e) { delete e; }

size_t kcgml_embedding_rows(const kcgml_embedding* e) { return e ? e->impl.rows() : 0; }

size_t kcgml_embedding_dims(const kcgml_embedding* e) { return e ? e->impl.dims() : 0; }

const char* kcgml_embedding_node_id(const kcgml_embedding* e, size_t row) {
    if (!e || row >= e->impl.rows()) return nullptr;
    return e->impl.ids[row].c_str();
}

kcgml_status kcgml_embedding_row(const kcgml_embedding* e, size_t row, double* out,
                                 size_t capacity) {
    return guarded([&] {
        require(e && out, "embedding and out must not be null");
        if (row >= e->impl.rows())
            throw kcgml::Error(kcgml::Status::NotFound, "embedding row out of range");
        if (capacity < e->impl.dims())
            throw kcgml::Error(kcgml::Status::ConfigError, "output buffer too small");
        const auto r = e->impl.values.row(row);
        std::memcpy(out, r.data(), r.size() * sizeof(double));
    });
}

kcgml_status kcgml_embedding_save_csv(const kcgml_embedding* e, const char* path) {
    return guarded([&] {
        require(e && path, "embedding and path must not be null");
        e->impl.save_csv(path);
    });
}

kcgml_status kcgml_embedding_load_csv(const char* path, kcgml_embedding** out) {
    return guarded([&] {
        require(path && out, "path and out must not be null");
        auto e = std::make_unique<kcgml_embedding>();
        e->impl = kcgml::EmbeddingMatrix::load_csv(path);
        *out = e.release();
    });
}

kcgml_status kcgml_pagerank(const kcgml_graph* g, const char* config_json, char** scores_json) {
    return guarded([&] {
        require(g && scores_json, "graph and scores_json must not be null");
        const ordered_json j = parse_json_config(config_json);
        kcgml::PageRankConfig cfg;
        for (const auto& [key, value] : j.items()) {
            if (key == "alpha")
                cfg.alpha = value.get<double>();
            else if (key == "tolerance")
                cfg.tolerance = value.get<double>();
            else if (key == "max_iterations")
                cfg.max_iterations = value.get<std::size_t>();
            else if (key == "normalization")
                cfg.normalization = kcgml::parse_pagerank_norm(value.get<std::string>());
            else
                throw kcgml::Error(kcgml::Status::ConfigError,
                                   "unknown key `" + key + "` in pagerank config");
        }
        const kcgml::PageRankResult result = kcgml::pagerank(g->impl, cfg);
        ordered_json out;
        ordered_json scores = ordered_json::object();
        for (const kcgml::NodeRecord& n : g->impl.nodes())
            scores[n.raw_id] = result.scores[n.id];
        out["scores"] = std::move(scores);
        out["converged"] = result.converged;
        out["iterations"] = result.iterations;
        *scores_json = dup_string(out.dump(2));
    });
}

kcgml_status kcgml_run_ingest(const char* config_json, char** report_json) {
    return run_stage(kcgml::run_ingest, config_json, report_json);
}

kcgml_status kcgml_run_complete(const char* config_json, char** report_json) {
    return run_stage(kcgml::run_complete, config_json, report_json);
}

kcgml_status kcgml_run_embed(const char* config_json, char** report_json) {
    return run_stage(kcgml::run_embed, config_json, report_json);
}

kcgml_status kcgml_run_analyze(const char* config_json, char** report_json) {
    return run_stage(kcgml::run_analyze, config_json, report_json);
}

kcgml_status kcgml_run_pipeline(const char* config_json, char** report_json) {
    return run_stage(kcgml::run_pipeline, config_json, report_json);
}

} // extern "C"
