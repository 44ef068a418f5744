#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/analytics.hpp"
#include "core/graphsage.hpp"
#include "core/ingest.hpp"
#include "core/kc.hpp"
#include "core/node2vec.hpp"

namespace kcgml {

inline constexpr const char* kToolName = "kcgml";
inline constexpr const char* kToolVersion = "0.1.0";

// Fixed artifact names inside a run directory.
namespace artifact {
inline constexpr const char* kContacts = "contacts.txt";
inline constexpr const char* kMetadata = "metadata.txt";
inline constexpr const char* kGraphRaw = "kg_raw.kg";
inline constexpr const char* kGraphKc = "kg_kc.kg";
inline constexpr const char* kIngestReport = "ingest_report.json";
inline constexpr const char* kKcReport = "kc_report.json";
inline constexpr const char* kAnalyticsReport = "analytics_report.json";
inline constexpr const char* kManifest = "manifest.json";

std::string embeddings_csv(const std::string& generator, const std::string& variant);
std::string walks_txt(const std::string& variant);
std::string projection_csv(const std::string& generator);
} // namespace artifact

struct PipelineConfig {
    std::string out_dir = "run";
    std::uint64_t seed = 42;
    unsigned threads = 0; // 0 = all available cores

    // exactly one input source
    std::optional<std::string> contacts_path;
    std::optional<std::string> metadata_path;
    std::optional<SyntheticConfig> synthetic;

    bool kc_enable = true;
    StrengthModel strength;
    std::size_t contagion_top_k = 5;          // 0 disables contagion
    std::vector<std::string> contagion_seeds; // explicit raw ids win over top-k

    std::string embedder = "both"; // node2vec | graphsage | both
    bool use_strength = false;
    bool dump_walks = false;
    WalkConfig walks;
    SkipGramConfig skipgram;
    SageConfig sage;

    PageRankConfig pagerank;
    std::size_t top_k = 10;

    void validate() const; // throws ConfigError
    bool wants(const std::string& generator) const;

    // Strict parse: unknown keys or malformed values raise ConfigError.
    static PipelineConfig from_json(const ordered_json& j);
    ordered_json to_json() const;
};

// Pipeline stages compose through the run directory; every stage records its
// wall time and the hashes of the files it wrote in manifest.json. Each
// returns the report it persisted (plus a `files` index).
ordered_json run_ingest(const PipelineConfig& cfg);
ordered_json run_complete(const PipelineConfig& cfg);
ordered_json run_embed(const PipelineConfig& cfg);
ordered_json run_analyze(const PipelineConfig& cfg);
ordered_json run_pipeline(const PipelineConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes);

} // namespace kcgml
