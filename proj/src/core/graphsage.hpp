#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/embedding.hpp"
#include "core/graph.hpp"
#include "core/matrix.hpp"

namespace kcgml {

struct SageConfig {
    std::vector<std::size_t> fanouts = {25, 10}; // per-layer sample budgets
    std::size_t dimensions = 16;
    bool use_strength = false;
    // divide the aggregate by the strength sum instead of the neighbor count
    bool weighted_average = false;
    std::size_t epochs = 10;
    double learning_rate = 0.05;
    std::size_t negative_samples = 5;
    std::size_t walks_per_node = 5; // positive-pair walks
    std::size_t walk_length = 5;
    std::uint64_t seed = 42;

    void validate() const; // throws ConfigError
};

// Initial node features [cp, deg, T, T_avg], z-score normalized per column
// (constant columns become 0).
struct FeatureMatrix {
    std::vector<std::string> names;
    Matrix values;

    std::string serialize() const;
    static FeatureMatrix deserialize(const std::string& text);
};

FeatureMatrix build_features(const KnowledgeGraph& g);

// Per layer, per node: sampled contact neighbors (ascending id) with their
// edge strengths.
struct SampledNeighborhoods {
    struct Sample {
        std::vector<NodeId> ids;
        std::vector<double> strengths;
    };
    std::vector<std::vector<Sample>> layers; // [K][|V|]

    std::size_t layer_count() const { return layers.size(); }
};

// Uniform sampling without replacement up to fanout_k; nodes with degree at
// most the fanout keep their whole neighborhood, so exhaustive budgets are
// deterministic regardless of seed.
SampledNeighborhoods sample_neighborhoods(const KnowledgeGraph& g, const SageConfig& cfg,
                                          std::uint64_t seed);

struct LayerWeights {
    std::vector<Matrix> layers; // W^(k): out_dim x (2 * in_dim)

    std::string serialize() const;
    static LayerWeights deserialize(const std::string& text);

    bool operator==(const LayerWeights&) const = default;
};

LayerWeights init_sage_weights(std::size_t feature_dim, const SageConfig& cfg);

// Mean-aggregation forward pass: per layer, h_v = ReLU(W * [h_v | mean of
// (strength-weighted) neighbor features]); empty neighborhoods aggregate to
// zero; final rows are L2-normalized (all-zero rows stay zero).
EmbeddingMatrix sage_forward(const FeatureMatrix& features, const SampledNeighborhoods& hoods,
                             const LayerWeights& weights, const SageConfig& cfg,
                             const KnowledgeGraph& g);

// Unsupervised graph loss over the given positive pairs and negatives
// (negative_samples entries per pair, flattened). Fills per-layer weight
// gradients when grads is non-null; returns the mean pair loss.
double sage_loss_and_grad(const FeatureMatrix& features, const SampledNeighborhoods& hoods,
                          const LayerWeights& weights, const SageConfig& cfg,
                          std::span<const std::pair<NodeId, NodeId>> positives,
                          std::span<const NodeId> negatives, LayerWeights* grads);

struct SageTrainResult {
    LayerWeights weights;
    SampledNeighborhoods neighborhoods;
    std::vector<double> epoch_loss; // recorded before each update
};

// Full-batch gradient descent on the unsupervised loss; positives come from
// short uniform random walks, negatives from a degree^0.75 table. All
// randomness is drawn once up front, so the objective is fixed across epochs.
SageTrainResult train_unsupervised(const KnowledgeGraph& g, const FeatureMatrix& features,
                                   const SageConfig& cfg);

// I(u) = fraction of (node, layer) sampling slots containing u.
std::vector<double> aggregation_influence(const SampledNeighborhoods& hoods,
                                          std::size_t node_count);

} // namespace kcgml
