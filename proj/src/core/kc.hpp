#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/graph.hpp"

#include "json.hpp"

namespace kcgml {

enum class Aggregator { NoisyOr, Max, Avg, Sum };
enum class DecayForm {
    Subtractive, // P_A - e^(-beta*t)
    Scaled       // P_A * (1 - e^(-beta*t))
};

const char* aggregator_name(Aggregator a) noexcept;
Aggregator parse_aggregator(std::string_view name); // throws ConfigError
const char* decay_form_name(DecayForm d) noexcept;
DecayForm parse_decay_form(std::string_view name);

struct StrengthModel {
    double beta = 0.01; // transmissibility, per second of contact
    double tau = 0.2;   // propagation threshold
    Aggregator aggregator = Aggregator::NoisyOr;
    DecayForm decay_form = DecayForm::Subtractive;
    bool clamp = true; // force path strengths into [0, 1]
    std::size_t max_hops = 1;

    void validate() const; // throws ConfigError
};

struct ClosureStats {
    std::size_t direct_pairs = 0;
    std::size_t direct_events = 0;
    std::size_t inferred_pairs_added = 0;
    std::size_t inferred_events_added = 0;
    double pair_growth_ratio = 0.0;  // inferred_pairs_added / direct_pairs
    double event_growth_ratio = 0.0;
    std::map<std::size_t, std::size_t> component_size_histogram;

    nlohmann::ordered_json to_json() const;
};

// First KC step: per-timestamp transitive closure. Groups contact events by
// interval end t, finds the connected components of each snapshot by BFS, and
// records an inferred contact at t for every co-present pair that lacks one.
// Direct edges are never removed or modified.
std::pair<KnowledgeGraph, ClosureStats>
transitive_closure_step(const KnowledgeGraph& g, unsigned threads = 1);

// Single-exposure strength after contact_time seconds from a source with the
// given infection probability.
double path_strength(double contact_time, double source_probability, const StrengthModel& m);

// Combines independent per-path strengths; empty input yields 0.
double aggregate_strength(std::span<const double> per_path, const StrengthModel& m);

struct ContagionReport {
    std::vector<std::string> seeds; // raw ids
    std::size_t reached = 0;
    std::vector<std::pair<std::string, double>> at_risk; // cp > tau, descending cp

    nlohmann::ordered_json to_json(const StrengthModel& m) const;
};

// Second KC step: seeds get cp = 1 and their influence spreads over contact
// edges, one frontier per hop up to max_hops; only nodes above tau propagate
// further. Unknown seeds fail before any mutation.
ContagionReport propagate_contagion(KnowledgeGraph& g, std::span<const NodeId> seeds,
                                    const StrengthModel& m);

// Sets every contact edge's strength to clamp(1 - e^(-beta*t)), the bounded
// weight used by the strength-aware embedding variants.
void edge_strengths(KnowledgeGraph& g, const StrengthModel& m);

} // namespace kcgml
