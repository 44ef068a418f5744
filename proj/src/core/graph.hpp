#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core/status.hpp"

namespace kcgml {

using NodeId = std::uint32_t;
using EdgeIdx = std::uint32_t;

enum class Relation : std::uint8_t { HasContactWith = 0, IsPartOf = 1 };
enum class Provenance : std::uint8_t { Direct = 0, Inferred = 1 };

const char* relation_name(Relation r) noexcept;
const char* provenance_name(Provenance p) noexcept;

namespace label {
inline constexpr std::string_view kPerson = "Person";
inline constexpr std::string_view kDepartment = "Department";
} // namespace label

namespace prop {
inline constexpr std::string_view kContagion = "cp";
inline constexpr std::string_view kDegree = "deg";
inline constexpr std::string_view kTotalContact = "T";
inline constexpr std::string_view kAvgContact = "T_avg";
} // namespace prop

struct NodeRecord {
    NodeId id = 0;
    std::string raw_id;                      // external identifier from the source data
    std::vector<std::string> labels;         // sorted, unique
    std::map<std::string, double> properties;

    bool has_label(std::string_view l) const;
    double property_or(std::string_view name, double fallback) const;

    bool operator==(const NodeRecord&) const = default;
};

// One record per unordered contact pair (head < tail) or per IS_PART_OF pair.
// Repeated contacts extend the timestamp list instead of adding new edges.
struct EdgeRecord {
    NodeId head = 0;
    NodeId tail = 0;
    Relation relation = Relation::HasContactWith;
    Provenance provenance = Provenance::Direct;
    double strength = 1.0;
    double total_contact_time = 0.0;         // seconds; always 20 * timestamps.size()
    std::vector<double> timestamps;          // interval-end times, strictly increasing

    bool operator==(const EdgeRecord&) const = default;
};

struct Neighbor {
    NodeId id;
    const EdgeRecord* edge;
};

class KnowledgeGraph {
public:
    // Returns the node for raw_id, creating it (with the given label) on first
    // sight. Dense ids follow first-seen order.
    NodeId intern(const std::string& raw_id, std::string_view lbl);

    bool contains(const std::string& raw_id) const;
    NodeId id_of(const std::string& raw_id) const; // throws NotFound
    const NodeRecord& node(NodeId v) const;        // throws NotFound
    NodeRecord& node_mut(NodeId v);

    // Records a 20-second contact between i and j ending at time t. Idempotent
    // per (i, j, t); returns false when the event was already present.
    bool add_contact(NodeId i, NodeId j, double t, Provenance prov);
    void add_part_of(NodeId person, NodeId department);

    std::vector<Neighbor> neighbors(NodeId v, Relation rel) const;
    bool adjacent(NodeId a, NodeId b, Relation rel) const;
    const EdgeRecord* find_edge(NodeId a, NodeId b, Relation rel) const;
    EdgeRecord* find_edge_mut(NodeId a, NodeId b, Relation rel);

    // deg(v), T(v), T_avg(v) for every Person node; cp(v) initialized to 0
    // unless already set.
    void compute_node_properties();

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t contact_pair_count() const { return contact_pairs_; }
    std::size_t contact_event_count() const { return contact_events_; }
    std::size_t edge_count(Relation rel) const;
    std::size_t contact_degree(NodeId v) const;

    const std::vector<NodeRecord>& nodes() const { return nodes_; }
    const std::vector<EdgeRecord>& edges() const { return edges_; }
    std::vector<EdgeRecord>& edges_mut() { return edges_; }

    // Archive reader hooks: rebuild a graph record-for-record. Nodes must be
    // appended in id order, edges validated against the usual invariants.
    void restore_node(NodeRecord rec);
    void restore_edge(EdgeRecord rec);

    bool operator==(const KnowledgeGraph&) const = default;

private:
    void check_node(NodeId v) const;
    const std::map<NodeId, EdgeIdx>* adjacency(NodeId v, Relation rel) const;

    std::vector<NodeRecord> nodes_;
    std::vector<EdgeRecord> edges_;
    std::map<std::string, NodeId> raw_ids_;
    // per node: neighbor id -> edge index; contact adjacency is symmetric,
    // IS_PART_OF is stored outgoing (person -> department)
    std::vector<std::map<NodeId, EdgeIdx>> contact_adj_;
    std::vector<std::map<NodeId, EdgeIdx>> partof_adj_;
    std::size_t contact_pairs_ = 0;
    std::size_t contact_events_ = 0;
};

} // namespace kcgml
