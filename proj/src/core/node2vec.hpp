#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/embedding.hpp"
#include "core/graph.hpp"

namespace kcgml {

struct WalkConfig {
    std::size_t num_walks_per_node = 10;
    std::size_t walk_length = 80;
    double p = 1.0; // return parameter
    double q = 1.0; // in-out parameter
    bool use_strength = false;
    std::uint64_t seed = 42;

    void validate() const; // throws ConfigError
};

struct SkipGramConfig {
    std::size_t dimensions = 16;
    std::size_t window = 10;
    std::size_t negative_samples = 5;
    std::size_t epochs = 5;
    double learning_rate = 0.025; // linearly decayed over all pairs
    std::uint64_t seed = 42;

    void validate() const;
};

struct WalkCorpus {
    std::vector<std::vector<NodeId>> walks;
    WalkConfig config;

    // one walk per line, space-separated raw node ids
    std::string to_text(const KnowledgeGraph& g) const;
};

// Second-order transition probabilities over neighbors(current) in ascending
// neighbor order. Scores are alpha_pq(prev, x) * w(current, x), times the
// edge strength when use_strength is set; w is the total contact time. The
// first step of a walk has no predecessor and uses alpha = 1. An empty vector
// means the walk terminates here.
std::vector<double> transition_distribution(const KnowledgeGraph& g, std::optional<NodeId> prev,
                                            NodeId current, const WalkConfig& cfg);

// num_walks_per_node walks from every node in ascending id order. Each walk
// draws from its own (seed, node, walk-index) stream, so any thread count
// produces the identical corpus.
WalkCorpus generate_walks(const KnowledgeGraph& g, const WalkConfig& cfg, unsigned threads = 1);

// Pr(u) = visits(u) / (k * T) with k the number of walks and T the configured
// walk length; early-terminated walks keep the configured denominator.
std::vector<double> visit_probability(const WalkCorpus& corpus, std::size_t node_count);

// Negative-sampling loss for one (center, context) pair with the given
// negative rows, and its gradients. negatives holds n_neg row pointers of the
// same dimension; grad_negatives is contiguous (n_neg x d); any gradient
// output may be null.
double skipgram_pair_loss_grad(std::span<const double> center, std::span<const double> context,
                               const double* const* negatives, std::size_t n_neg,
                               double* grad_center, double* grad_context, double* grad_negatives);

struct SkipGramResult {
    EmbeddingMatrix embedding;
    std::vector<double> epoch_loss; // average pair loss, recorded before updates
};

// SGD skip-gram with negative sampling over the walk corpus. Nodes that never
// appear keep their seeded initialization row.
SkipGramResult train_skipgram(const WalkCorpus& corpus, const KnowledgeGraph& g,
                              const SkipGramConfig& cfg);

} // namespace kcgml
