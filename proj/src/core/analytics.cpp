#include "core/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace kcgml {

const char* pagerank_norm_name(PageRankNorm n) noexcept {
    return n == PageRankNorm::Probability ? "probability" : "per_node";
}

PageRankNorm parse_pagerank_norm(std::string_view name) {
    if (name == "probability") return PageRankNorm::Probability;
    if (name == "per_node") return PageRankNorm::PerNode;
    throw Error(Status::ConfigError, "unknown pagerank normalization: " + std::string(name));
}

void PageRankConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(Status::ConfigError, "pagerank alpha must be in (0, 1)");
    if (!(tolerance > 0)) throw Error(Status::ConfigError, "pagerank tolerance must be > 0");
    if (max_iterations < 1) throw Error(Status::ConfigError, "pagerank max_iterations must be >= 1");
}

PageRankResult pagerank(const KnowledgeGraph& g, const PageRankConfig& cfg) {
    cfg.validate();
    const std::size_t n = g.node_count();
    if (n == 0) throw Error(Status::InputError, "pagerank on an empty graph");

    // directed view: contact edges both ways, membership edges as stored
    std::vector<double> out_degree(n, 0.0);
    std::vector<std::vector<NodeId>> in_edges(n);
    for (const EdgeRecord& e : g.edges()) {
        if (e.relation == Relation::HasContactWith) {
            out_degree[e.head] += 1.0;
            out_degree[e.tail] += 1.0;
            in_edges[e.head].push_back(e.tail);
            in_edges[e.tail].push_back(e.head);
        } else {
            out_degree[e.head] += 1.0;
            in_edges[e.tail].push_back(e.head);
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> x(n, inv_n);
    std::vector<double> next(n, 0.0);

    PageRankResult result;
    for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
        double dangling = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            if (out_degree[v] == 0.0) dangling += x[v];

        double diff = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            double inflow = 0.0;
            for (NodeId u : in_edges[v]) inflow += x[u] / out_degree[u];
            next[v] = (1.0 - cfg.alpha) * inv_n + cfg.alpha * (inflow + dangling * inv_n);
            diff += std::abs(next[v] - x[v]);
        }
        std::swap(x, next);
        result.iterations = iter + 1;
        if (diff < cfg.tolerance) {
            result.converged = true;
            break;
        }
    }

    if (cfg.normalization == PageRankNorm::PerNode)
        for (double& s : x) s *= static_cast<double>(n);
    result.scores = std::move(x);
    return result;
}

namespace {

// dense ranks: descending score, ties by ascending id
std::vector<std::size_t> rank_order(std::span<const double> scores) {
    std::vector<NodeId> order(scores.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
    });
    std::vector<std::size_t> rank(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    return rank;
}

} // namespace

RankingComparison top_k_comparison(std::span<const double> scores_raw,
                                   std::span<const double> scores_kc, std::size_t k) {
    if (scores_raw.size() != scores_kc.size())
        throw Error(Status::InputError, "pagerank score maps cover different node sets");
    if (scores_raw.empty()) throw Error(Status::InputError, "empty score maps");
    if (k == 0) throw Error(Status::ConfigError, "top-k must be >= 1");

    const std::size_t n = scores_raw.size();
    RankingComparison out;
    out.k = std::min(k, n);

    const auto rank_raw = rank_order(scores_raw);
    const auto rank_kc = rank_order(scores_kc);

    std::vector<NodeId> by_raw(n), by_kc(n);
    for (NodeId v = 0; v < n; ++v) {
        by_raw[rank_raw[v]] = v;
        by_kc[rank_kc[v]] = v;
    }
    for (std::size_t i = 0; i < out.k; ++i) {
        out.top_raw.emplace_back(by_raw[i], scores_raw[by_raw[i]]);
        out.top_kc.emplace_back(by_kc[i], scores_kc[by_kc[i]]);
    }

    out.displacement.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        out.displacement[v] =
            static_cast<long long>(rank_raw[v]) - static_cast<long long>(rank_kc[v]);
        out.max_abs_displacement =
            std::max(out.max_abs_displacement, std::llabs(out.displacement[v]));
    }

    std::vector<NodeId> set_raw(by_raw.begin(), by_raw.begin() + out.k);
    std::vector<NodeId> set_kc(by_kc.begin(), by_kc.begin() + out.k);
    std::sort(set_raw.begin(), set_raw.end());
    std::sort(set_kc.begin(), set_kc.end());
    std::vector<NodeId> inter;
    std::set_intersection(set_raw.begin(), set_raw.end(), set_kc.begin(), set_kc.end(),
                          std::back_inserter(inter));
    out.jaccard = static_cast<double>(inter.size()) /
                  static_cast<double>(2 * out.k - inter.size());
    return out;
}

nlohmann::ordered_json RankingComparison::to_json(const std::vector<std::string>& names) const {
    nlohmann::ordered_json j;
    j["k"] = k;
    auto table = [&](const std::vector<std::pair<NodeId, double>>& top) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < top.size(); ++i)
            rows.push_back({{"rank", i + 1}, {"node", names[top[i].first]}, {"score", top[i].second}});
        return rows;
    };
    j["raw"] = table(top_raw);
    j["kc"] = table(top_kc);
    j["jaccard_overlap"] = jaccard;
    j["max_abs_displacement"] = max_abs_displacement;
    nlohmann::ordered_json disp = nlohmann::ordered_json::object();
    for (const auto& [node, score] : top_raw) disp[names[node]] = displacement[node];
    for (const auto& [node, score] : top_kc)
        if (!disp.contains(names[node])) disp[names[node]] = displacement[node];
    j["top_k_displacement"] = std::move(disp);
    return j;
}

DriftReport embedding_drift(const EmbeddingMatrix& raw, const EmbeddingMatrix& kc) {
    if (raw.dims() != kc.dims())
        throw Error(Status::InputError, "embedding dimensionality mismatch");
    if (raw.ids != kc.ids)
        throw Error(Status::InputError, "embeddings cover different node orderings");
    if (!raw.generator.empty() && !kc.generator.empty() && raw.generator != kc.generator)
        throw Error(Status::InputError, "embeddings come from different generators");
    if (raw.seed != 0 && kc.seed != 0 && raw.seed != kc.seed)
        throw Error(Status::InputError,
                    "embeddings come from different seeds; drift needs matched lineage");

    DriftReport out;
    out.generator = raw.generator.empty() ? kc.generator : raw.generator;
    out.per_node.reserve(raw.rows());
    for (std::size_t v = 0; v < raw.rows(); ++v) {
        double sq = 0.0;
        for (std::size_t c = 0; c < raw.dims(); ++c) {
            const double d = raw.values.at(v, c) - kc.values.at(v, c);
            sq += d * d;
        }
        out.per_node.push_back(std::sqrt(sq));
    }
    if (!out.per_node.empty()) {
        out.mean = std::accumulate(out.per_node.begin(), out.per_node.end(), 0.0) /
                   static_cast<double>(out.per_node.size());
        out.max = *std::max_element(out.per_node.begin(), out.per_node.end());
        std::vector<double> sorted = out.per_node;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t mid = sorted.size() / 2;
        out.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    }
    return out;
}

nlohmann::ordered_json DriftReport::to_json(const std::vector<std::string>& names) const {
    nlohmann::ordered_json j;
    j["generator"] = generator;
    j["mean"] = mean;
    j["median"] = median;
    j["max"] = max;
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < per_node.size(); ++v) per[names[v]] = per_node[v];
    j["per_node"] = std::move(per);
    return j;
}

namespace {

// cyclic Jacobi for small symmetric matrices
void jacobi_eigen(Matrix a, std::vector<double>& values, Matrix& vectors) {
    const std::size_t n = a.rows;
    vectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) vectors.at(i, i) = 1.0;

    double scale = 0.0;
    for (double v : a.data) scale += v * v;

    for (std::size_t sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a.at(i, j) * a.at(i, j);
        if (off <= scale * 1e-28) break;

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a.at(i, p);
                    const double aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a.at(p, i);
                    const double aqi = a.at(q, i);
                    a.at(p, i) = c * api - s * aqi;
                    a.at(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = vectors.at(i, p);
                    const double viq = vectors.at(i, q);
                    vectors.at(i, p) = c * vip - s * viq;
                    vectors.at(i, q) = s * vip + c * viq;
                }
            }
    }
    values.resize(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a.at(i, i);
}

} // namespace

Projection2D pca_project(const Matrix& embeddings) {
    const std::size_t n = embeddings.rows;
    const std::size_t d = embeddings.cols;
    if (n < 2) throw Error(Status::InputError, "pca needs at least 2 rows");
    for (double v : embeddings.data)
        if (!std::isfinite(v)) throw Error(Status::InputError, "pca input has non-finite values");

    Matrix centered = embeddings;
    for (std::size_t c = 0; c < d; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += centered.at(r, c);
        mean /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r) centered.at(r, c) -= mean;
    }

    Projection2D out;
    out.coords = Matrix(n, 2);

    double total_var = 0.0;
    Matrix cov(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += centered.at(r, i) * centered.at(r, j);
            s /= static_cast<double>(n - 1);
            cov.at(i, j) = s;
            cov.at(j, i) = s;
            if (i == j) total_var += s;
        }
    if (total_var <= 0.0) { // all rows identical
        out.degenerate = true;
        return out;
    }

    std::vector<double> eigenvalues;
    Matrix eigenvectors;
    jacobi_eigen(cov, eigenvalues, eigenvectors);

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return eigenvalues[a] != eigenvalues[b] ? eigenvalues[a] > eigenvalues[b] : a < b;
    });

    const std::size_t components = std::min<std::size_t>(2, d);
    for (std::size_t c = 0; c < components; ++c) {
        const std::size_t e = order[c];
        // sign convention: largest-magnitude loading is positive
        std::size_t arg = 0;
        for (std::size_t i = 1; i < d; ++i)
            if (std::abs(eigenvectors.at(i, e)) > std::abs(eigenvectors.at(arg, e))) arg = i;
        const double sign = eigenvectors.at(arg, e) < 0 ? -1.0 : 1.0;
        for (std::size_t r = 0; r < n; ++r) {
            double proj = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                proj += centered.at(r, i) * eigenvectors.at(i, e);
            out.coords.at(r, c) = sign * proj;
        }
        out.explained_variance[c] = std::max(0.0, eigenvalues[e]) / total_var;
    }
    return out;
}

nlohmann::ordered_json assemble_report(const std::optional<nlohmann::ordered_json>& closure,
                                       const std::optional<nlohmann::ordered_json>& ranking,
                                       const std::vector<nlohmann::ordered_json>& drifts,
                                       const std::vector<std::string>& projection_files,
                                       const nlohmann::ordered_json& config_echo) {
    if (!closure && !ranking && drifts.empty())
        throw Error(Status::ConfigError, "no analytics to report");
    nlohmann::ordered_json j;
    j["config"] = config_echo;
    j["closure"] = closure ? *closure : nlohmann::ordered_json();
    j["pagerank"] = ranking ? *ranking : nlohmann::ordered_json();
    nlohmann::ordered_json drift = nlohmann::ordered_json::object();
    for (const auto& d : drifts) drift[d.at("generator").get<std::string>()] = d;
    j["drift"] = std::move(drift);
    j["projections"] = projection_files;
    return j;
}

} // namespace kcgml
