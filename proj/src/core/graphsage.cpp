#include "core/graphsage.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/random.hpp"
#include "core/text_io.hpp"

namespace kcgml {

void SageConfig::validate() const {
    if (fanouts.empty()) throw Error(Status::ConfigError, "fanouts must not be empty");
    for (std::size_t f : fanouts)
        if (f < 1) throw Error(Status::ConfigError, "every fanout must be >= 1");
    if (dimensions < 1) throw Error(Status::ConfigError, "dimensions must be >= 1");
    if (!(learning_rate > 0)) throw Error(Status::ConfigError, "learning_rate must be > 0");
}

FeatureMatrix build_features(const KnowledgeGraph& g) {
    FeatureMatrix out;
    out.names = {std::string(prop::kContagion), std::string(prop::kDegree),
                 std::string(prop::kTotalContact), std::string(prop::kAvgContact)};
    const std::size_t n = g.node_count();
    out.values = Matrix(n, out.names.size());
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t c = 0; c < out.names.size(); ++c)
            out.values.at(v, c) = g.node(static_cast<NodeId>(v)).property_or(out.names[c], 0.0);

    // column z-score with population sigma; constant columns become all zero
    for (std::size_t c = 0; c < out.values.cols; ++c) {
        double mean = 0.0;
        for (std::size_t v = 0; v < n; ++v) mean += out.values.at(v, c);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const double d = out.values.at(v, c) - mean;
            var += d * d;
        }
        const double sigma = std::sqrt(var / static_cast<double>(n));
        for (std::size_t v = 0; v < n; ++v)
            out.values.at(v, c) = sigma > 0 ? (out.values.at(v, c) - mean) / sigma : 0.0;
    }
    return out;
}

SampledNeighborhoods sample_neighborhoods(const KnowledgeGraph& g, const SageConfig& cfg,
                                          std::uint64_t seed) {
    cfg.validate();
    const std::size_t n = g.node_count();
    SampledNeighborhoods out;
    out.layers.resize(cfg.fanouts.size());
    for (std::size_t k = 0; k < cfg.fanouts.size(); ++k) {
        const std::size_t budget = cfg.fanouts[k];
        out.layers[k].resize(n);
        for (std::size_t v = 0; v < n; ++v) {
            const auto neighbors = g.neighbors(static_cast<NodeId>(v), Relation::HasContactWith);
            SampledNeighborhoods::Sample& sample = out.layers[k][v];
            if (neighbors.size() <= budget) {
                for (const auto& nb : neighbors) {
                    sample.ids.push_back(nb.id);
                    sample.strengths.push_back(nb.edge->strength);
                }
                continue;
            }
            // partial Fisher-Yates, then ascending order for a fixed summation order
            std::vector<std::size_t> idx(neighbors.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            Rng rng = derive_rng(seed, "sage-sample", k, v);
            for (std::size_t i = 0; i < budget; ++i) {
                const std::size_t r = i + rng.next_below(idx.size() - i);
                std::swap(idx[i], idx[r]);
            }
            idx.resize(budget);
            std::sort(idx.begin(), idx.end());
            for (std::size_t i : idx) {
                sample.ids.push_back(neighbors[i].id);
                sample.strengths.push_back(neighbors[i].edge->strength);
            }
        }
    }
    return out;
}

LayerWeights init_sage_weights(std::size_t feature_dim, const SageConfig& cfg) {
    cfg.validate();
    LayerWeights w;
    std::size_t in_dim = feature_dim;
    for (std::size_t k = 0; k < cfg.fanouts.size(); ++k) {
        const std::size_t fan_in = 2 * in_dim;
        Matrix m(cfg.dimensions, fan_in);
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Rng rng = derive_rng(cfg.seed, "sage-init", k);
        for (double& x : m.data) x = rng.next_double(-bound, bound);
        w.layers.push_back(std::move(m));
        in_dim = cfg.dimensions;
    }
    return w;
}

namespace {

void check_shapes(const FeatureMatrix& features, const SampledNeighborhoods& hoods,
                  const LayerWeights& weights) {
    if (weights.layers.size() != hoods.layers.size())
        throw Error(Status::ConfigError,
                    "layer count mismatch: " + std::to_string(weights.layers.size()) +
                        " weight layers vs " + std::to_string(hoods.layers.size()) +
                        " sampled layers");
    std::size_t in_dim = features.values.cols;
    for (std::size_t k = 0; k < weights.layers.size(); ++k) {
        const Matrix& w = weights.layers[k];
        if (w.cols != 2 * in_dim)
            throw Error(Status::ConfigError,
                        "layer " + std::to_string(k) + " expects input dim " +
                            std::to_string(w.cols) + " but gets " + std::to_string(2 * in_dim));
        in_dim = w.rows;
    }
}

// mean of (optionally strength-weighted) neighbor rows; empty -> zero row
Matrix aggregate(const Matrix& h, const std::vector<SampledNeighborhoods::Sample>& samples,
                 const SageConfig& cfg) {
    Matrix m(h.rows, h.cols);
    for (std::size_t v = 0; v < h.rows; ++v) {
        const auto& sample = samples[v];
        if (sample.ids.empty()) continue;
        double denom = static_cast<double>(sample.ids.size());
        if (cfg.use_strength && cfg.weighted_average) {
            denom = 0.0;
            for (double s : sample.strengths) denom += s;
            if (denom <= 0.0) continue;
        }
        for (std::size_t i = 0; i < sample.ids.size(); ++i) {
            const double w = cfg.use_strength ? sample.strengths[i] : 1.0;
            const auto row = h.row(sample.ids[i]);
            for (std::size_t c = 0; c < h.cols; ++c) m.at(v, c) += w * row[c];
        }
        for (std::size_t c = 0; c < h.cols; ++c) m.at(v, c) /= denom;
    }
    return m;
}

// transpose of the aggregation operator, for backprop
void aggregate_backward(Matrix& dh_prev, const Matrix& dm,
                        const std::vector<SampledNeighborhoods::Sample>& samples,
                        const SageConfig& cfg) {
    for (std::size_t v = 0; v < dm.rows; ++v) {
        const auto& sample = samples[v];
        if (sample.ids.empty()) continue;
        double denom = static_cast<double>(sample.ids.size());
        if (cfg.use_strength && cfg.weighted_average) {
            denom = 0.0;
            for (double s : sample.strengths) denom += s;
            if (denom <= 0.0) continue;
        }
        for (std::size_t i = 0; i < sample.ids.size(); ++i) {
            const double w = (cfg.use_strength ? sample.strengths[i] : 1.0) / denom;
            const auto src = dm.row(v);
            auto dst = dh_prev.row(sample.ids[i]);
            for (std::size_t c = 0; c < dm.cols; ++c) dst[c] += w * src[c];
        }
    }
}

struct ForwardCache {
    std::vector<Matrix> h;      // h[0] = features; h[k] = ReLU output of layer k
    std::vector<Matrix> concat; // concat[k] = [h[k] | m[k+1]]
    Matrix embedding;           // L2-normalized final layer
    std::vector<double> norms;
};

ForwardCache run_forward(const FeatureMatrix& features, const SampledNeighborhoods& hoods,
                         const LayerWeights& weights, const SageConfig& cfg) {
    check_shapes(features, hoods, weights);
    ForwardCache cache;
    cache.h.push_back(features.values);
    for (std::size_t k = 0; k < weights.layers.size(); ++k) {
        const Matrix& prev = cache.h.back();
        const Matrix m = aggregate(prev, hoods.layers[k], cfg);
        Matrix concat(prev.rows, 2 * prev.cols);
        for (std::size_t v = 0; v < prev.rows; ++v) {
            std::copy_n(prev.row(v).data(), prev.cols, concat.row(v).data());
            std::copy_n(m.row(v).data(), m.cols, concat.row(v).data() + prev.cols);
        }
        Matrix z = matmul(concat, transpose(weights.layers[k]));
        for (double& x : z.data) x = x > 0 ? x : 0.0; // ReLU
        cache.concat.push_back(std::move(concat));
        cache.h.push_back(std::move(z));
    }

    const Matrix& last = cache.h.back();
    cache.embedding = last;
    cache.norms.resize(last.rows, 0.0);
    for (std::size_t v = 0; v < last.rows; ++v) {
        const double norm = std::sqrt(dot(last.row(v), last.row(v)));
        cache.norms[v] = norm;
        if (norm > 0)
            for (double& x : cache.embedding.row(v)) x /= norm;
    }
    return cache;
}

} // namespace

EmbeddingMatrix sage_forward(const FeatureMatrix& features, const SampledNeighborhoods& hoods,
                             const LayerWeights& weights, const SageConfig& cfg,
                             const KnowledgeGraph& g) {
    ForwardCache cache = run_forward(features, hoods, weights, cfg);
    EmbeddingMatrix out;
    out.generator = "graphsage";
    out.seed = cfg.seed;
    for (const NodeRecord& rec : g.nodes()) out.ids.push_back(rec.raw_id);
    out.values = std::move(cache.embedding);
    return out;
}

namespace {

double softplus(double x) {
    if (x > 0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

} // namespace

double sage_loss_and_grad(const FeatureMatrix& features, const SampledNeighborhoods& hoods,
                          const LayerWeights& weights, const SageConfig& cfg,
                          std::span<const std::pair<NodeId, NodeId>> positives,
                          std::span<const NodeId> negatives, LayerWeights* grads) {
    if (positives.empty()) throw Error(Status::InputError, "no positive pairs");
    if (negatives.size() != positives.size() * cfg.negative_samples)
        throw Error(Status::InputError, "negatives must hold negative_samples entries per pair");

    ForwardCache cache = run_forward(features, hoods, weights, cfg);
    const Matrix& emb = cache.embedding;
    const double scale = 1.0 / static_cast<double>(positives.size());

    double loss = 0.0;
    Matrix d_emb(emb.rows, emb.cols);
    for (std::size_t pi = 0; pi < positives.size(); ++pi) {
        const auto [u, v] = positives[pi];
        const double z = dot(emb.row(u), emb.row(v));
        loss += softplus(-z);
        const double g_pos = (sigmoid(z) - 1.0) * scale;
        for (std::size_t c = 0; c < emb.cols; ++c) {
            d_emb.at(u, c) += g_pos * emb.at(v, c);
            d_emb.at(v, c) += g_pos * emb.at(u, c);
        }
        for (std::size_t s = 0; s < cfg.negative_samples; ++s) {
            const NodeId neg = negatives[pi * cfg.negative_samples + s];
            const double zn = dot(emb.row(u), emb.row(neg));
            loss += softplus(zn);
            const double g_neg = sigmoid(zn) * scale;
            for (std::size_t c = 0; c < emb.cols; ++c) {
                d_emb.at(u, c) += g_neg * emb.at(neg, c);
                d_emb.at(neg, c) += g_neg * emb.at(u, c);
            }
        }
    }
    loss *= scale;
    if (!grads) return loss;

    // back through the row normalization: dh = (de - e (e . de)) / norm
    const Matrix& last = cache.h.back();
    Matrix dh(last.rows, last.cols);
    for (std::size_t v = 0; v < last.rows; ++v) {
        const double norm = cache.norms[v];
        if (norm <= 0) continue;
        const double proj = dot(emb.row(v), d_emb.row(v));
        for (std::size_t c = 0; c < last.cols; ++c)
            dh.at(v, c) = (d_emb.at(v, c) - emb.at(v, c) * proj) / norm;
    }

    grads->layers.assign(weights.layers.size(), Matrix());
    for (std::size_t k = weights.layers.size(); k-- > 0;) {
        const Matrix& h_out = cache.h[k + 1];
        Matrix dz = std::move(dh);
        for (std::size_t i = 0; i < dz.data.size(); ++i)
            if (h_out.data[i] <= 0) dz.data[i] = 0.0; // ReLU mask

        grads->layers[k] = matmul(transpose(dz), cache.concat[k]);
        const Matrix d_concat = matmul(dz, weights.layers[k]);

        const std::size_t in_dim = d_concat.cols / 2;
        Matrix d_prev(d_concat.rows, in_dim);
        Matrix d_m(d_concat.rows, in_dim);
        for (std::size_t v = 0; v < d_concat.rows; ++v)
            for (std::size_t c = 0; c < in_dim; ++c) {
                d_prev.at(v, c) = d_concat.at(v, c);
                d_m.at(v, c) = d_concat.at(v, in_dim + c);
            }
        aggregate_backward(d_prev, d_m, hoods.layers[k], cfg);
        dh = std::move(d_prev);
    }
    return loss;
}

SageTrainResult train_unsupervised(const KnowledgeGraph& g, const FeatureMatrix& features,
                                   const SageConfig& cfg) {
    cfg.validate();
    if (g.node_count() < 2) throw Error(Status::InputError, "need at least 2 nodes to train");

    SageTrainResult result;
    result.neighborhoods = sample_neighborhoods(g, cfg, cfg.seed);
    result.weights = init_sage_weights(features.values.cols, cfg);

    // positive pairs: co-occurrences on short uniform walks
    std::vector<std::pair<NodeId, NodeId>> positives;
    const std::size_t n = g.node_count();
    for (std::size_t v = 0; v < n; ++v) {
        const auto neighbors = g.neighbors(static_cast<NodeId>(v), Relation::HasContactWith);
        if (neighbors.empty()) continue;
        for (std::size_t r = 0; r < cfg.walks_per_node; ++r) {
            Rng rng = derive_rng(cfg.seed, "sage-pos", v, r);
            NodeId current = static_cast<NodeId>(v);
            for (std::size_t step = 0; step < cfg.walk_length; ++step) {
                const auto hood = g.neighbors(current, Relation::HasContactWith);
                if (hood.empty()) break;
                current = hood[rng.next_below(hood.size())].id;
                if (current != static_cast<NodeId>(v))
                    positives.emplace_back(static_cast<NodeId>(v), current);
            }
        }
    }
    if (positives.empty()) return result;

    // degree^0.75 negative table
    std::vector<NodeId> table_nodes;
    std::vector<double> cumulative;
    double total = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        const double deg = static_cast<double>(g.contact_degree(static_cast<NodeId>(v)));
        if (deg <= 0) continue;
        total += std::pow(deg, 0.75);
        table_nodes.push_back(static_cast<NodeId>(v));
        cumulative.push_back(total);
    }
    Rng neg_rng = derive_rng(cfg.seed, "sage-neg");
    std::vector<NodeId> negatives(positives.size() * cfg.negative_samples);
    for (NodeId& neg : negatives) {
        const double r = neg_rng.next_double() * total;
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), r);
        neg = table_nodes[std::min<std::size_t>(it - cumulative.begin(), table_nodes.size() - 1)];
    }

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        LayerWeights grads;
        const double loss = sage_loss_and_grad(features, result.neighborhoods, result.weights,
                                               cfg, positives, negatives, &grads);
        result.epoch_loss.push_back(loss);
        for (std::size_t k = 0; k < result.weights.layers.size(); ++k)
            for (std::size_t i = 0; i < result.weights.layers[k].data.size(); ++i)
                result.weights.layers[k].data[i] -= cfg.learning_rate * grads.layers[k].data[i];
    }
    return result;
}

std::vector<double> aggregation_influence(const SampledNeighborhoods& hoods,
                                          std::size_t node_count) {
    std::vector<double> influence(node_count, 0.0);
    const std::size_t k_layers = hoods.layer_count();
    if (k_layers == 0) return influence;
    for (const auto& layer : hoods.layers)
        for (const auto& sample : layer)
            for (NodeId u : sample.ids) influence[u] += 1.0;
    const double denom = static_cast<double>(node_count) * static_cast<double>(k_layers);
    for (double& x : influence) x /= denom;
    return influence;
}

std::string FeatureMatrix::serialize() const {
    std::string out = "kcgml-features v1\n";
    out += "names";
    for (const auto& name : names) out += ' ' + name;
    out += '\n';
    out += "rows " + std::to_string(values.rows) + " cols " + std::to_string(values.cols) + '\n';
    for (std::size_t r = 0; r < values.rows; ++r) {
        for (std::size_t c = 0; c < values.cols; ++c) {
            if (c) out += ' ';
            out += format_double(values.at(r, c));
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t cols, std::string_view what) {
    const auto fields = split_ws(line);
    if (fields.size() != cols)
        throw Error(Status::InputError, "bad " + std::string(what) + " row width");
    std::vector<double> out;
    out.reserve(cols);
    for (const auto& f : fields) {
        const auto v = parse_double(f);
        if (!v) throw Error(Status::InputError, "bad " + std::string(what) + " value");
        out.push_back(*v);
    }
    return out;
}

void expect_header(std::istream& in, std::string_view magic, std::string& line) {
    if (!std::getline(in, line)) throw Error(Status::Truncated, "empty archive");
    const auto f = split_ws(line);
    if (f.size() < 2 || f[0] != magic)
        throw Error(Status::FormatVersion, "not a " + std::string(magic) + " archive");
    if (f[1] != "v1")
        throw Error(Status::FormatVersion, "unsupported archive version: " + std::string(f[1]));
}

} // namespace

FeatureMatrix FeatureMatrix::deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    expect_header(in, "kcgml-features", line);
    FeatureMatrix out;
    if (!std::getline(in, line)) throw Error(Status::Truncated, "missing feature names");
    {
        const auto f = split_ws(line);
        if (f.empty() || f[0] != "names") throw Error(Status::InputError, "expected names line");
        for (std::size_t i = 1; i < f.size(); ++i) out.names.emplace_back(f[i]);
    }
    if (!std::getline(in, line)) throw Error(Status::Truncated, "missing feature shape");
    const auto f = split_ws(line);
    if (f.size() != 4 || f[0] != "rows" || f[2] != "cols")
        throw Error(Status::InputError, "expected `rows <n> cols <d>`");
    const auto rows = parse_u64(f[1]);
    const auto cols = parse_u64(f[3]);
    if (!rows || !cols) throw Error(Status::InputError, "bad feature shape");
    out.values = Matrix(*rows, *cols);
    for (std::size_t r = 0; r < *rows; ++r) {
        if (!std::getline(in, line)) throw Error(Status::Truncated, "feature rows missing");
        const auto row = parse_row(line, *cols, "feature");
        std::copy(row.begin(), row.end(), out.values.row(r).data());
    }
    return out;
}

std::string LayerWeights::serialize() const {
    std::string out = "kcgml-weights v1\n";
    out += "layers " + std::to_string(layers.size()) + '\n';
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const Matrix& m = layers[k];
        out += "layer " + std::to_string(k) + ' ' + std::to_string(m.rows) + ' ' +
               std::to_string(m.cols) + '\n';
        for (std::size_t r = 0; r < m.rows; ++r) {
            for (std::size_t c = 0; c < m.cols; ++c) {
                if (c) out += ' ';
                out += format_double(m.at(r, c));
            }
            out += '\n';
        }
    }
    return out;
}

LayerWeights LayerWeights::deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    expect_header(in, "kcgml-weights", line);
    if (!std::getline(in, line)) throw Error(Status::Truncated, "missing layer count");
    const auto f = split_ws(line);
    if (f.size() != 2 || f[0] != "layers") throw Error(Status::InputError, "expected layer count");
    const auto count = parse_u64(f[1]);
    if (!count) throw Error(Status::InputError, "bad layer count");
    LayerWeights out;
    for (std::size_t k = 0; k < *count; ++k) {
        if (!std::getline(in, line)) throw Error(Status::Truncated, "layer header missing");
        const auto h = split_ws(line);
        if (h.size() != 4 || h[0] != "layer")
            throw Error(Status::InputError, "expected `layer <k> <rows> <cols>`");
        const auto rows = parse_u64(h[2]);
        const auto cols = parse_u64(h[3]);
        if (!rows || !cols) throw Error(Status::InputError, "bad layer shape");
        Matrix m(*rows, *cols);
        for (std::size_t r = 0; r < *rows; ++r) {
            if (!std::getline(in, line)) throw Error(Status::Truncated, "layer rows missing");
            const auto row = parse_row(line, *cols, "weight");
            std::copy(row.begin(), row.end(), m.row(r).data());
        }
        out.layers.push_back(std::move(m));
    }
    return out;
}

} // namespace kcgml
