#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/embedding.hpp"
#include "core/graph.hpp"
#include "core/matrix.hpp"

#include "json.hpp"

namespace kcgml {

enum class PageRankNorm {
    Probability, // scores sum to 1
    PerNode      // scaled by |V|; a uniform graph scores 1.0 per node
};

const char* pagerank_norm_name(PageRankNorm n) noexcept;
PageRankNorm parse_pagerank_norm(std::string_view name);

struct PageRankConfig {
    double alpha = 0.85;
    double tolerance = 1e-9; // L1 change between iterations
    std::size_t max_iterations = 100;
    PageRankNorm normalization = PageRankNorm::PerNode;

    void validate() const; // throws ConfigError
};

struct PageRankResult {
    std::vector<double> scores; // indexed by NodeId
    bool converged = false;
    std::size_t iterations = 0;
};

// Power iteration with uniform teleport; contact edges count in both
// directions, IS_PART_OF edges as stored, dangling mass spreads uniformly.
PageRankResult pagerank(const KnowledgeGraph& g, const PageRankConfig& cfg);

struct RankingComparison {
    std::size_t k = 0;
    std::vector<std::pair<NodeId, double>> top_raw;
    std::vector<std::pair<NodeId, double>> top_kc;
    // per node: rank in raw minus rank in kc (0-based dense ranks)
    std::vector<long long> displacement;
    long long max_abs_displacement = 0;
    double jaccard = 0.0;

    nlohmann::ordered_json to_json(const std::vector<std::string>& names) const;
};

// Scores are full maps over the same node set; ties break by ascending id;
// k is clamped to |V|.
RankingComparison top_k_comparison(std::span<const double> scores_raw,
                                   std::span<const double> scores_kc, std::size_t k);

struct DriftReport {
    std::string generator;
    std::vector<double> per_node; // Euclidean distance per node
    double mean = 0.0;
    double median = 0.0;
    double max = 0.0;

    nlohmann::ordered_json to_json(const std::vector<std::string>& names) const;
};

// Per-node Euclidean distance between two embeddings of the same graph
// lineage; node ordering, dimensionality, and generator must match.
DriftReport embedding_drift(const EmbeddingMatrix& raw, const EmbeddingMatrix& kc);

struct Projection2D {
    Matrix coords; // |V| x 2
    double explained_variance[2] = {0.0, 0.0};
    bool degenerate = false; // rank-0 input
};

// PCA onto the top-2 principal components; columns centered, components
// ordered by eigenvalue, sign fixed so the largest-magnitude loading is
// positive.
Projection2D pca_project(const Matrix& embeddings);

// Single structured report; throws unless at least one analytic is present.
nlohmann::ordered_json assemble_report(const std::optional<nlohmann::ordered_json>& closure,
                                       const std::optional<nlohmann::ordered_json>& ranking,
                                       const std::vector<nlohmann::ordered_json>& drifts,
                                       const std::vector<std::string>& projection_files,
                                       const nlohmann::ordered_json& config_echo);

} // namespace kcgml
