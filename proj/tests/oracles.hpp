// Independent reference implementations used only by tests. They deliberately
// take the dumbest correct route (all-pairs reachability, dense matrices,
// finite differences) so they share no code with the library paths they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "core/graph.hpp"

namespace oracle {

using kcgml::KnowledgeGraph;
using kcgml::NodeId;

using PairSet = std::set<std::pair<NodeId, NodeId>>;
using EventMap = std::map<double, PairSet>; // timestamp -> unordered pairs

inline EventMap events_by_time(const KnowledgeGraph& g) {
    EventMap out;
    for (const auto& e : g.edges()) {
        if (e.relation != kcgml::Relation::HasContactWith) continue;
        for (double t : e.timestamps)
            out[t].insert({std::min(e.head, e.tail), std::max(e.head, e.tail)});
    }
    return out;
}

// Expected closure: for every timestamp, the complete graph on each connected
// component, discovered by naive all-pairs reachability.
inline EventMap brute_force_closure(const KnowledgeGraph& g) {
    EventMap out;
    for (const auto& [t, pairs] : events_by_time(g)) {
        std::set<NodeId> nodes;
        for (const auto& [a, b] : pairs) {
            nodes.insert(a);
            nodes.insert(b);
        }
        PairSet closed;
        for (NodeId a : nodes)
            for (NodeId b : nodes) {
                if (a >= b) continue;
                // reachability via repeated expansion (no shared BFS code)
                std::set<NodeId> frontier{a};
                bool reached = false;
                for (std::size_t step = 0; step <= nodes.size() && !reached; ++step) {
                    std::set<NodeId> next = frontier;
                    for (const auto& [x, y] : pairs) {
                        if (frontier.count(x)) next.insert(y);
                        if (frontier.count(y)) next.insert(x);
                    }
                    if (next == frontier) break;
                    frontier = next;
                    reached = frontier.count(b) != 0;
                }
                if (reached || pairs.count({a, b})) closed.insert({a, b});
            }
        out[t] = closed;
    }
    return out;
}

// Dense PageRank on explicit vectors; mirrors the definition directly.
inline std::vector<double> dense_pagerank(const KnowledgeGraph& g, double alpha,
                                          std::size_t iterations) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0)); // m[v][u] = share u -> v
    std::vector<double> out_deg(n, 0.0);
    for (const auto& e : g.edges()) {
        if (e.relation == kcgml::Relation::HasContactWith) {
            out_deg[e.head] += 1;
            out_deg[e.tail] += 1;
        } else {
            out_deg[e.head] += 1;
        }
    }
    for (const auto& e : g.edges()) {
        if (e.relation == kcgml::Relation::HasContactWith) {
            m[e.head][e.tail] = 1.0 / out_deg[e.tail];
            m[e.tail][e.head] = 1.0 / out_deg[e.head];
        } else {
            m[e.tail][e.head] = 1.0 / out_deg[e.head];
        }
    }
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    for (std::size_t it = 0; it < iterations; ++it) {
        std::vector<double> next(n, 0.0);
        double dangling = 0.0;
        for (std::size_t u = 0; u < n; ++u)
            if (out_deg[u] == 0.0) dangling += x[u];
        for (std::size_t v = 0; v < n; ++v) {
            double inflow = 0.0;
            for (std::size_t u = 0; u < n; ++u) inflow += m[v][u] * x[u];
            next[v] = (1.0 - alpha) / static_cast<double>(n) +
                      alpha * (inflow + dangling / static_cast<double>(n));
        }
        x = next;
    }
    return x;
}

// Relative error suited to gradient checks.
inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

// Central finite difference of a scalar function along one coordinate.
template <typename Fn>
double central_diff(Fn&& fn, double* slot, double eps = 1e-5) {
    const double saved = *slot;
    *slot = saved + eps;
    const double hi = fn();
    *slot = saved - eps;
    const double lo = fn();
    *slot = saved;
    return (hi - lo) / (2.0 * eps);
}

} // namespace oracle
