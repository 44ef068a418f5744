/*
 * kcgml — knowledge-completion-enhanced graph embeddings over temporal
 * contact networks.
 *
 * C API of the shared library. Handles are opaque; every fallible call
 * returns a kcgml_status and leaves a human-readable message in
 * kcgml_last_error() (thread-local). Strings returned through char** are
 * heap-allocated and must be released with kcgml_string_free().
 */

#ifndef KCGML_H
#define KCGML_H

#include <stddef.h>

#if defined(_WIN32)
#define KCGML_API __declspec(dllexport)
#elif defined(__GNUC__)
#define KCGML_API __attribute__((visibility("default")))
#else
#define KCGML_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kcgml_status {
    KCGML_OK = 0,
    KCGML_ERR_CONFIG = 1,         /* invalid configuration value or argument */
    KCGML_ERR_INPUT = 2,          /* unreadable or malformed input data */
    KCGML_ERR_NOT_FOUND = 3,      /* unknown node, key, or file */
    KCGML_ERR_SELF_LOOP = 4,      /* contact between a node and itself */
    KCGML_ERR_FORMAT_VERSION = 5, /* archive written by an incompatible version */
    KCGML_ERR_TRUNCATED = 6,      /* archive ends before the declared content */
    KCGML_ERR_DEPENDENCY = 7,     /* a required upstream artifact is missing */
    KCGML_ERR_INTERNAL = 8
} kcgml_status;

KCGML_API const char* kcgml_version(void);
KCGML_API const char* kcgml_status_name(kcgml_status status);
KCGML_API const char* kcgml_last_error(void);
KCGML_API void kcgml_string_free(char* s);

typedef struct kcgml_graph kcgml_graph;
typedef struct kcgml_embedding kcgml_embedding;

/* ---- knowledge graph ---------------------------------------------------- */

KCGML_API kcgml_status kcgml_graph_create(kcgml_graph** out);
KCGML_API void kcgml_graph_free(kcgml_graph* g);

/* versioned text archive */
KCGML_API kcgml_status kcgml_graph_load(const char* path, kcgml_graph** out);
KCGML_API kcgml_status kcgml_graph_save(const kcgml_graph* g, const char* path);

/* Records a 20-second contact between two people ending at time t (seconds).
 * Nodes are created on first sight; repeated (i, j, t) events are no-ops. */
KCGML_API kcgml_status kcgml_graph_add_contact(kcgml_graph* g, const char* person_i,
                                               const char* person_j, double t, int inferred);
KCGML_API kcgml_status kcgml_graph_set_department(kcgml_graph* g, const char* person,
                                                  const char* department);

/* deg, T, T_avg per person; cp defaults to 0 */
KCGML_API kcgml_status kcgml_graph_compute_properties(kcgml_graph* g);

KCGML_API size_t kcgml_graph_node_count(const kcgml_graph* g);
KCGML_API size_t kcgml_graph_contact_pair_count(const kcgml_graph* g);
KCGML_API size_t kcgml_graph_contact_event_count(const kcgml_graph* g);
KCGML_API kcgml_status kcgml_graph_node_property(const kcgml_graph* g, const char* raw_id,
                                                 const char* property, double* out);
KCGML_API kcgml_status kcgml_graph_neighbor_count(const kcgml_graph* g, const char* raw_id,
                                                  size_t* out);

/* ---- knowledge completion ------------------------------------------------ */

/* Per-timestamp transitive closure; *out is a new graph that additionally
 * holds an inferred contact for every co-present pair. stats_json (optional)
 * receives the growth statistics. */
KCGML_API kcgml_status kcgml_close_transitive(const kcgml_graph* in, kcgml_graph** out,
                                              char** stats_json);

/* source_probability - e^(-beta * contact_seconds), clamped to [0,1] unless
 * clamp is 0 */
KCGML_API double kcgml_path_strength(double contact_seconds, double source_probability,
                                     double beta, int clamp);

/* 1 - prod(1 - s_i); returns 0 for an empty list */
KCGML_API double kcgml_noisy_or(const double* strengths, size_t count);

/* sets every contact edge's strength to 1 - e^(-beta * total_contact_time) */
KCGML_API kcgml_status kcgml_apply_edge_strengths(kcgml_graph* g, double beta);

/* One contagion process from the given seed people (cp = 1). model_json may
 * set beta, tau, aggregator, decay_form, clamp, max_hops; pass NULL for
 * defaults (beta 0.01, tau 0.2, noisy_or). report_json (optional) receives
 * the at-risk list. */
KCGML_API kcgml_status kcgml_propagate(kcgml_graph* g, const char* const* seed_ids,
                                       size_t n_seeds, const char* model_json,
                                       char** report_json);

/* ---- embeddings ----------------------------------------------------------- */

/* config_json uses the pipeline configuration schema (README); only the
 * relevant sections are read. */
KCGML_API kcgml_status kcgml_embed_node2vec(const kcgml_graph* g, const char* config_json,
                                            kcgml_embedding** out);
KCGML_API kcgml_status kcgml_embed_graphsage(const kcgml_graph* g, const char* config_json,
                                             kcgml_embedding** out);

KCGML_API void kcgml_embedding_free(kcgml_embedding* e);
KCGML_API size_t kcgml_embedding_rows(const kcgml_embedding* e);
KCGML_API size_t kcgml_embedding_dims(const kcgml_embedding* e);
KCGML_API const char* kcgml_embedding_node_id(const kcgml_embedding* e, size_t row);
KCGML_API kcgml_status kcgml_embedding_row(const kcgml_embedding* e, size_t row, double* out,
                                           size_t capacity);
KCGML_API kcgml_status kcgml_embedding_save_csv(const kcgml_embedding* e, const char* path);
KCGML_API kcgml_status kcgml_embedding_load_csv(const char* path, kcgml_embedding** out);

/* ---- analytics ------------------------------------------------------------ */

/* scores_json: {"scores": {id: value, ...}, "converged": bool,
 * "iterations": n}. config_json may set alpha, tolerance, max_iterations,
 * normalization ("probability" | "per_node"); NULL for defaults. */
KCGML_API kcgml_status kcgml_pagerank(const kcgml_graph* g, const char* config_json,
                                      char** scores_json);

/* ---- pipeline stages ------------------------------------------------------ */

/* Stages compose through the run directory named by config_json ("out").
 * Each writes its artifacts plus manifest.json and returns its report.
 * report_json may be NULL. */
KCGML_API kcgml_status kcgml_run_ingest(const char* config_json, char** report_json);
KCGML_API kcgml_status kcgml_run_complete(const char* config_json, char** report_json);
KCGML_API kcgml_status kcgml_run_embed(const char* config_json, char** report_json);
KCGML_API kcgml_status kcgml_run_analyze(const char* config_json, char** report_json);
KCGML_API kcgml_status kcgml_run_pipeline(const char* config_json, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* KCGML_H */
