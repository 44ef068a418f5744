#include "core/kc.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "core/parallel.hpp"

namespace kcgml {

const char* aggregator_name(Aggregator a) noexcept {
    switch (a) {
    case Aggregator::NoisyOr: return "noisy_or";
    case Aggregator::Max: return "max";
    case Aggregator::Avg: return "avg";
    case Aggregator::Sum: return "sum";
    }
    return "unknown";
}

Aggregator parse_aggregator(std::string_view name) {
    if (name == "noisy_or") return Aggregator::NoisyOr;
    if (name == "max") return Aggregator::Max;
    if (name == "avg") return Aggregator::Avg;
    if (name == "sum") return Aggregator::Sum;
    throw Error(Status::ConfigError, "unknown aggregator: " + std::string(name));
}

const char* decay_form_name(DecayForm d) noexcept {
    return d == DecayForm::Subtractive ? "subtractive" : "scaled";
}

DecayForm parse_decay_form(std::string_view name) {
    if (name == "subtractive") return DecayForm::Subtractive;
    if (name == "scaled") return DecayForm::Scaled;
    throw Error(Status::ConfigError, "unknown decay form: " + std::string(name));
}

void StrengthModel::validate() const {
    if (!(beta > 0)) throw Error(Status::ConfigError, "beta must be > 0");
    if (!(tau >= 0.0 && tau <= 1.0)) throw Error(Status::ConfigError, "tau must be in [0, 1]");
    if (max_hops < 1) throw Error(Status::ConfigError, "max_hops must be >= 1");
}

nlohmann::ordered_json ClosureStats::to_json() const {
    nlohmann::ordered_json j;
    j["direct_pairs"] = direct_pairs;
    j["direct_events"] = direct_events;
    j["inferred_pairs_added"] = inferred_pairs_added;
    j["inferred_events_added"] = inferred_events_added;
    j["pair_growth_ratio"] = pair_growth_ratio;
    j["event_growth_ratio"] = event_growth_ratio;
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [size, count] : component_size_histogram)
        hist[std::to_string(size)] = count;
    j["component_size_histogram"] = std::move(hist);
    return j;
}

namespace {

struct Snapshot {
    double t = 0;
    std::vector<std::pair<NodeId, NodeId>> events; // canonical (min, max) pairs
};

// Inferred additions for one timestamp: every co-present pair without an
// event at t. Components come from a BFS over the snapshot's edges.
void close_snapshot(const Snapshot& snap, std::vector<std::pair<NodeId, NodeId>>& additions,
                    std::map<std::size_t, std::size_t>& histogram) {
    std::map<NodeId, std::vector<NodeId>> adj;
    std::set<std::pair<NodeId, NodeId>> present;
    for (const auto& [a, b] : snap.events) {
        adj[a].push_back(b);
        adj[b].push_back(a);
        present.emplace(a, b);
    }

    std::set<NodeId> visited;
    for (const auto& [start, _] : adj) {
        if (visited.count(start)) continue;
        std::vector<NodeId> component;
        std::deque<NodeId> queue{start};
        visited.insert(start);
        while (!queue.empty()) {
            const NodeId v = queue.front();
            queue.pop_front();
            component.push_back(v);
            for (NodeId u : adj[v]) {
                if (visited.insert(u).second) queue.push_back(u);
            }
        }
        std::sort(component.begin(), component.end());
        ++histogram[component.size()];
        for (std::size_t i = 0; i < component.size(); ++i)
            for (std::size_t k = i + 1; k < component.size(); ++k) {
                const std::pair<NodeId, NodeId> pair{component[i], component[k]};
                if (!present.count(pair)) additions.push_back(pair);
            }
    }
}

} // namespace

std::pair<KnowledgeGraph, ClosureStats> transitive_closure_step(const KnowledgeGraph& g,
                                                                unsigned threads) {
    std::map<double, std::vector<std::pair<NodeId, NodeId>>> by_time;
    for (const EdgeRecord& e : g.edges()) {
        if (e.relation != Relation::HasContactWith) continue;
        for (double t : e.timestamps) by_time[t].push_back({e.head, e.tail});
    }
    std::vector<Snapshot> snapshots;
    snapshots.reserve(by_time.size());
    for (auto& [t, events] : by_time) snapshots.push_back({t, std::move(events)});

    std::vector<std::vector<std::pair<NodeId, NodeId>>> additions(snapshots.size());
    std::vector<std::map<std::size_t, std::size_t>> histograms(snapshots.size());
    parallel_for(snapshots.size(), threads,
                 [&](std::size_t i) { close_snapshot(snapshots[i], additions[i], histograms[i]); });

    ClosureStats stats;
    stats.direct_pairs = g.contact_pair_count();
    stats.direct_events = g.contact_event_count();
    for (const auto& hist : histograms)
        for (const auto& [size, count] : hist) stats.component_size_histogram[size] += count;

    KnowledgeGraph out = g;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        for (const auto& [a, b] : additions[i]) {
            if (!out.adjacent(a, b, Relation::HasContactWith)) ++stats.inferred_pairs_added;
            out.add_contact(a, b, snapshots[i].t, Provenance::Inferred);
            ++stats.inferred_events_added;
        }
    }
    if (stats.direct_pairs > 0)
        stats.pair_growth_ratio = static_cast<double>(stats.inferred_pairs_added) /
                                  static_cast<double>(stats.direct_pairs);
    if (stats.direct_events > 0)
        stats.event_growth_ratio = static_cast<double>(stats.inferred_events_added) /
                                   static_cast<double>(stats.direct_events);
    return {std::move(out), std::move(stats)};
}

double path_strength(double contact_time, double source_probability, const StrengthModel& m) {
    const double decay = std::exp(-m.beta * contact_time);
    double s = m.decay_form == DecayForm::Subtractive ? source_probability - decay
                                                      : source_probability * (1.0 - decay);
    if (m.clamp) s = std::clamp(s, 0.0, 1.0);
    return s;
}

double aggregate_strength(std::span<const double> per_path, const StrengthModel& m) {
    if (per_path.empty()) return 0.0;
    switch (m.aggregator) {
    case Aggregator::NoisyOr: {
        double miss = 1.0;
        for (double s : per_path) miss *= 1.0 - s;
        return 1.0 - miss;
    }
    case Aggregator::Max: {
        double best = per_path[0];
        for (double s : per_path) best = std::max(best, s);
        return best;
    }
    case Aggregator::Avg: {
        double sum = 0.0;
        for (double s : per_path) sum += s;
        return sum / static_cast<double>(per_path.size());
    }
    case Aggregator::Sum: {
        double sum = 0.0;
        for (double s : per_path) sum += s;
        return std::min(1.0, sum);
    }
    }
    return 0.0;
}

ContagionReport propagate_contagion(KnowledgeGraph& g, std::span<const NodeId> seeds,
                                    const StrengthModel& m) {
    m.validate();
    for (NodeId s : seeds) g.node(s); // throws NotFound before any mutation

    ContagionReport report;
    std::map<NodeId, double> cp;
    for (NodeId s : seeds) {
        cp[s] = 1.0;
        report.seeds.push_back(g.node(s).raw_id);
    }

    std::vector<NodeId> frontier(seeds.begin(), seeds.end());
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());

    for (std::size_t hop = 0; hop < m.max_hops && !frontier.empty(); ++hop) {
        // candidate targets: unassigned neighbors of the current frontier
        std::map<NodeId, std::vector<double>> exposures;
        for (NodeId u : frontier) {
            const double source = cp.at(u);
            for (const Neighbor& nb : g.neighbors(u, Relation::HasContactWith)) {
                if (cp.count(nb.id)) continue;
                exposures[nb.id].push_back(
                    path_strength(nb.edge->total_contact_time, source, m));
            }
        }
        std::vector<NodeId> next;
        for (const auto& [v, strengths] : exposures) {
            const double p = aggregate_strength(strengths, m);
            cp[v] = p;
            if (p > m.tau) next.push_back(v);
        }
        frontier = std::move(next);
    }

    const std::set<NodeId> seed_set(seeds.begin(), seeds.end());
    for (const auto& [v, p] : cp) {
        g.node_mut(v).properties[std::string(prop::kContagion)] = p;
        if (seed_set.count(v)) continue;
        ++report.reached;
        if (p > m.tau) report.at_risk.emplace_back(g.node(v).raw_id, p);
    }
    std::sort(report.at_risk.begin(), report.at_risk.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    return report;
}

nlohmann::ordered_json ContagionReport::to_json(const StrengthModel& m) const {
    nlohmann::ordered_json j;
    j["beta"] = m.beta;
    j["tau"] = m.tau;
    j["aggregator"] = aggregator_name(m.aggregator);
    j["decay_form"] = decay_form_name(m.decay_form);
    j["max_hops"] = m.max_hops;
    j["seeds"] = seeds;
    j["reached"] = reached;
    nlohmann::ordered_json risk = nlohmann::ordered_json::array();
    for (const auto& [node, p] : at_risk) risk.push_back({{"node", node}, {"cp", p}});
    j["at_risk"] = std::move(risk);
    return j;
}

void edge_strengths(KnowledgeGraph& g, const StrengthModel& m) {
    m.validate();
    for (EdgeRecord& e : g.edges_mut()) {
        if (e.relation != Relation::HasContactWith) continue;
        const double s = 1.0 - std::exp(-m.beta * e.total_contact_time);
        e.strength = std::clamp(s, 0.0, 1.0);
    }
}

} // namespace kcgml
