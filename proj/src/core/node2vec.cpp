#include "core/node2vec.hpp"

#include <algorithm>
#include <cmath>

#include "core/parallel.hpp"
#include "core/random.hpp"

namespace kcgml {

void WalkConfig::validate() const {
    if (num_walks_per_node < 1) throw Error(Status::ConfigError, "num_walks_per_node must be >= 1");
    if (walk_length < 1) throw Error(Status::ConfigError, "walk_length must be >= 1");
    if (!(p > 0) || !(q > 0)) throw Error(Status::ConfigError, "p and q must be > 0");
}

void SkipGramConfig::validate() const {
    if (dimensions < 1) throw Error(Status::ConfigError, "dimensions must be >= 1");
    if (window < 1) throw Error(Status::ConfigError, "window must be >= 1");
    if (epochs < 1) throw Error(Status::ConfigError, "epochs must be >= 1");
    if (!(learning_rate > 0)) throw Error(Status::ConfigError, "learning_rate must be > 0");
}

std::string WalkCorpus::to_text(const KnowledgeGraph& g) const {
    std::string out;
    for (const auto& walk : walks) {
        for (std::size_t i = 0; i < walk.size(); ++i) {
            if (i) out += ' ';
            out += g.node(walk[i]).raw_id;
        }
        out += '\n';
    }
    return out;
}

std::vector<double> transition_distribution(const KnowledgeGraph& g, std::optional<NodeId> prev,
                                            NodeId current, const WalkConfig& cfg) {
    const auto neighbors = g.neighbors(current, Relation::HasContactWith);
    std::vector<double> probs(neighbors.size());
    double total = 0.0;
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        const auto& [x, edge] = neighbors[i];
        double alpha = 1.0;
        if (prev) {
            if (x == *prev)
                alpha = 1.0 / cfg.p;
            else if (g.adjacent(*prev, x, Relation::HasContactWith))
                alpha = 1.0;
            else
                alpha = 1.0 / cfg.q;
        }
        double score = alpha * edge->total_contact_time;
        if (cfg.use_strength) score *= edge->strength;
        probs[i] = score;
        total += score;
    }
    if (total <= 0.0) return {};
    for (double& v : probs) v /= total;
    return probs;
}

namespace {

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
    const double r = rng.next_double();
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (r < cum) return i;
    }
    return probs.size() - 1;
}

} // namespace

WalkCorpus generate_walks(const KnowledgeGraph& g, const WalkConfig& cfg, unsigned threads) {
    cfg.validate();
    if (g.node_count() == 0) throw Error(Status::InputError, "cannot walk an empty graph");

    WalkCorpus corpus;
    corpus.config = cfg;
    const std::size_t n = g.node_count();
    corpus.walks.assign(n * cfg.num_walks_per_node, {});

    parallel_for(corpus.walks.size(), threads, [&](std::size_t slot) {
        const NodeId start = static_cast<NodeId>(slot / cfg.num_walks_per_node);
        const std::uint64_t walk_idx = slot % cfg.num_walks_per_node;
        Rng rng = derive_rng(cfg.seed, "n2v-walk", start, walk_idx);

        std::vector<NodeId>& walk = corpus.walks[slot];
        walk.reserve(cfg.walk_length);
        walk.push_back(start);
        std::optional<NodeId> prev;
        NodeId current = start;
        while (walk.size() < cfg.walk_length) {
            const auto probs = transition_distribution(g, prev, current, cfg);
            if (probs.empty()) break; // dangling: terminate early
            const auto neighbors = g.neighbors(current, Relation::HasContactWith);
            const NodeId next = neighbors[sample_index(probs, rng)].id;
            walk.push_back(next);
            prev = current;
            current = next;
        }
    });
    return corpus;
}

std::vector<double> visit_probability(const WalkCorpus& corpus, std::size_t node_count) {
    if (corpus.walks.empty()) throw Error(Status::InputError, "empty walk corpus");
    std::vector<double> counts(node_count, 0.0);
    for (const auto& walk : corpus.walks)
        for (NodeId v : walk) {
            if (v >= node_count) throw Error(Status::InputError, "walk references unknown node");
            counts[v] += 1.0;
        }
    const double denom = static_cast<double>(corpus.walks.size()) *
                         static_cast<double>(corpus.config.walk_length);
    for (double& c : counts) c /= denom;
    return counts;
}

namespace {

// sigmoid(z) and both softplus branches from a single exp
struct Logistic {
    double sig;          // 1 / (1 + e^-z)
    double softplus_pos; // log(1 + e^z)
    double softplus_neg; // log(1 + e^-z)
};

Logistic logistic(double z) {
    const double e = std::exp(-std::abs(z));
    const double l = std::log1p(e);
    Logistic out;
    out.sig = z >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
    out.softplus_pos = (z >= 0 ? z : 0.0) + l;
    out.softplus_neg = (z >= 0 ? 0.0 : -z) + l;
    return out;
}

} // namespace

// Gradient buffers must not alias the input rows; negative rows may repeat.
double skipgram_pair_loss_grad(std::span<const double> center, std::span<const double> context,
                               const double* const* negatives, std::size_t n_neg,
                               double* grad_center, double* grad_context, double* grad_negatives) {
    const std::size_t d = center.size();
    const double* __restrict__ cen = center.data();
    const double* __restrict__ ctx = context.data();

    double z_pos = 0.0;
    for (std::size_t i = 0; i < d; ++i) z_pos += cen[i] * ctx[i];
    const Logistic pos = logistic(z_pos);
    double loss = pos.softplus_neg; // -log sigmoid(z_pos)

    const double g_pos = pos.sig - 1.0; // d loss / d z_pos
    if (grad_center) {
        double* __restrict__ gc = grad_center;
        for (std::size_t i = 0; i < d; ++i) gc[i] = g_pos * ctx[i];
    }
    if (grad_context) {
        double* __restrict__ go = grad_context;
        for (std::size_t i = 0; i < d; ++i) go[i] = g_pos * cen[i];
    }

    for (std::size_t k = 0; k < n_neg; ++k) {
        const double* __restrict__ neg = negatives[k];
        double z_neg = 0.0;
        for (std::size_t i = 0; i < d; ++i) z_neg += cen[i] * neg[i];
        const Logistic zn = logistic(z_neg);
        loss += zn.softplus_pos; // -log sigmoid(-z_neg)
        const double g_neg = zn.sig;
        if (grad_center) {
            double* __restrict__ gc = grad_center;
            for (std::size_t i = 0; i < d; ++i) gc[i] += g_neg * neg[i];
        }
        if (grad_negatives) {
            double* __restrict__ gn = grad_negatives + k * d;
            for (std::size_t i = 0; i < d; ++i) gn[i] = g_neg * cen[i];
        }
    }
    return loss;
}

namespace {

// Walker alias table over frequency^0.75: exact distribution, O(1) draws.
struct UnigramTable {
    std::vector<NodeId> nodes;
    std::vector<double> accept;
    std::vector<std::uint32_t> alias;

    void build(std::span<const double> counts) {
        std::vector<double> weights;
        for (std::size_t v = 0; v < counts.size(); ++v) {
            if (counts[v] <= 0) continue;
            nodes.push_back(static_cast<NodeId>(v));
            weights.push_back(std::pow(counts[v], 0.75));
        }
        const std::size_t n = nodes.size();
        accept.assign(n, 1.0);
        alias.assign(n, 0);
        if (n == 0) return;
        double total = 0.0;
        for (double w : weights) total += w;
        for (double& w : weights) w *= static_cast<double>(n) / total;

        std::vector<std::uint32_t> small, large;
        for (std::uint32_t i = 0; i < n; ++i) (weights[i] < 1.0 ? small : large).push_back(i);
        while (!small.empty() && !large.empty()) {
            const std::uint32_t s = small.back();
            const std::uint32_t l = large.back();
            small.pop_back();
            accept[s] = weights[s];
            alias[s] = l;
            weights[l] -= 1.0 - weights[s];
            if (weights[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
    }

    NodeId sample(Rng& rng) const {
        const std::size_t i = static_cast<std::size_t>(rng.next_below(nodes.size()));
        return rng.next_double() < accept[i] ? nodes[i] : nodes[alias[i]];
    }
};

} // namespace

SkipGramResult train_skipgram(const WalkCorpus& corpus, const KnowledgeGraph& g,
                              const SkipGramConfig& cfg) {
    cfg.validate();
    if (corpus.walks.empty()) throw Error(Status::InputError, "empty walk corpus");

    const std::size_t n = g.node_count();
    const std::size_t d = cfg.dimensions;

    SkipGramResult result;
    result.embedding.generator = "node2vec";
    result.embedding.seed = cfg.seed;
    result.embedding.ids.reserve(n);
    for (const NodeRecord& rec : g.nodes()) result.embedding.ids.push_back(rec.raw_id);

    Matrix& input = result.embedding.values;
    input = Matrix(n, d);
    for (NodeId v = 0; v < n; ++v) {
        Rng rng = derive_rng(cfg.seed, "n2v-init", v);
        for (std::size_t i = 0; i < d; ++i)
            input.at(v, i) = (rng.next_double() - 0.5) / static_cast<double>(d);
    }
    Matrix output(n, d); // context vectors, zero-initialized

    std::vector<double> counts(n, 0.0);
    std::size_t pairs_per_epoch = 0;
    for (const auto& walk : corpus.walks) {
        for (NodeId v : walk) counts[v] += 1.0;
        const std::size_t len = walk.size();
        for (std::size_t pos = 0; pos < len; ++pos) {
            const std::size_t lo = pos >= cfg.window ? pos - cfg.window : 0;
            const std::size_t hi = std::min(len - 1, pos + cfg.window);
            pairs_per_epoch += hi - lo; // window positions minus the center itself
        }
    }
    if (pairs_per_epoch == 0) return result; // e.g. single-node walks only

    UnigramTable table;
    table.build(counts);

    Rng train_rng = derive_rng(cfg.seed, "n2v-train");
    const double total_pairs = static_cast<double>(cfg.epochs * pairs_per_epoch);
    std::size_t done = 0;

    std::vector<double> grad_center(d), grad_context(d);
    std::vector<const double*> neg_rows(cfg.negative_samples);
    std::vector<double> grad_negs(cfg.negative_samples * d);
    std::vector<NodeId> neg_ids(cfg.negative_samples);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (const auto& walk : corpus.walks) {
            const std::size_t len = walk.size();
            for (std::size_t pos = 0; pos < len; ++pos) {
                const NodeId center = walk[pos];
                const std::size_t lo = pos >= cfg.window ? pos - cfg.window : 0;
                const std::size_t hi = std::min(len - 1, pos + cfg.window);
                for (std::size_t c = lo; c <= hi; ++c) {
                    if (c == pos) continue;
                    const NodeId context = walk[c];
                    const double lr =
                        cfg.learning_rate *
                        std::max(1e-4, 1.0 - static_cast<double>(done) / total_pairs);
                    ++done;

                    std::size_t n_neg = 0;
                    for (std::size_t k = 0; k < cfg.negative_samples; ++k) {
                        const NodeId neg = table.sample(train_rng);
                        if (neg == context) continue; // skip the positive target
                        neg_ids[n_neg] = neg;
                        neg_rows[n_neg] = output.row(neg).data();
                        ++n_neg;
                    }

                    epoch_loss += skipgram_pair_loss_grad(
                        input.row(center), output.row(context), neg_rows.data(), n_neg,
                        grad_center.data(), grad_context.data(), grad_negs.data());

                    double* __restrict__ center_row = input.row(center).data();
                    const double* __restrict__ gc = grad_center.data();
                    for (std::size_t i = 0; i < d; ++i) center_row[i] -= lr * gc[i];
                    double* __restrict__ context_row = output.row(context).data();
                    const double* __restrict__ go = grad_context.data();
                    for (std::size_t i = 0; i < d; ++i) context_row[i] -= lr * go[i];
                    for (std::size_t k = 0; k < n_neg; ++k) {
                        double* __restrict__ neg_row = output.row(neg_ids[k]).data();
                        const double* __restrict__ gn = grad_negs.data() + k * d;
                        for (std::size_t i = 0; i < d; ++i) neg_row[i] -= lr * gn[i];
                    }
                }
            }
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(pairs_per_epoch));
    }
    return result;
}

} // namespace kcgml
