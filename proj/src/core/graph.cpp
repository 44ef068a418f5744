#include "core/graph.hpp"

#include <algorithm>

namespace kcgml {

const char* relation_name(Relation r) noexcept {
    return r == Relation::HasContactWith ? "contact" : "partof";
}

const char* provenance_name(Provenance p) noexcept {
    return p == Provenance::Direct ? "direct" : "inferred";
}

bool NodeRecord::has_label(std::string_view l) const {
    return std::find(labels.begin(), labels.end(), l) != labels.end();
}

double NodeRecord::property_or(std::string_view name, double fallback) const {
    auto it = properties.find(std::string(name));
    return it == properties.end() ? fallback : it->second;
}

NodeId KnowledgeGraph::intern(const std::string& raw_id, std::string_view lbl) {
    auto it = raw_ids_.find(raw_id);
    if (it != raw_ids_.end()) {
        NodeRecord& rec = nodes_[it->second];
        if (!rec.has_label(lbl)) {
            rec.labels.emplace_back(lbl);
            std::sort(rec.labels.begin(), rec.labels.end());
        }
        return it->second;
    }
    const NodeId id = static_cast<NodeId>(nodes_.size());
    NodeRecord rec;
    rec.id = id;
    rec.raw_id = raw_id;
    rec.labels.emplace_back(lbl);
    nodes_.push_back(std::move(rec));
    contact_adj_.emplace_back();
    partof_adj_.emplace_back();
    raw_ids_.emplace(raw_id, id);
    return id;
}

bool KnowledgeGraph::contains(const std::string& raw_id) const {
    return raw_ids_.count(raw_id) != 0;
}

NodeId KnowledgeGraph::id_of(const std::string& raw_id) const {
    auto it = raw_ids_.find(raw_id);
    if (it == raw_ids_.end()) throw Error(Status::NotFound, "unknown node id: " + raw_id);
    return it->second;
}

const NodeRecord& KnowledgeGraph::node(NodeId v) const {
    check_node(v);
    return nodes_[v];
}

NodeRecord& KnowledgeGraph::node_mut(NodeId v) {
    check_node(v);
    return nodes_[v];
}

void KnowledgeGraph::check_node(NodeId v) const {
    if (v >= nodes_.size())
        throw Error(Status::NotFound, "node " + std::to_string(v) + " does not exist");
}

bool KnowledgeGraph::add_contact(NodeId i, NodeId j, double t, Provenance prov) {
    check_node(i);
    check_node(j);
    if (i == j)
        throw Error(Status::SelfLoop,
                    "self contact rejected for node " + nodes_[i].raw_id);
    if (!(t > 0)) throw Error(Status::InputError, "contact time must be positive");

    const NodeId head = std::min(i, j);
    const NodeId tail = std::max(i, j);
    auto it = contact_adj_[head].find(tail);
    if (it == contact_adj_[head].end()) {
        EdgeRecord e;
        e.head = head;
        e.tail = tail;
        e.relation = Relation::HasContactWith;
        e.provenance = prov;
        e.timestamps.push_back(t);
        e.total_contact_time = 20.0;
        const EdgeIdx idx = static_cast<EdgeIdx>(edges_.size());
        edges_.push_back(std::move(e));
        contact_adj_[head].emplace(tail, idx);
        contact_adj_[tail].emplace(head, idx);
        ++contact_pairs_;
        ++contact_events_;
        return true;
    }

    EdgeRecord& e = edges_[it->second];
    auto pos = std::lower_bound(e.timestamps.begin(), e.timestamps.end(), t);
    if (pos != e.timestamps.end() && *pos == t) return false; // duplicate event
    e.timestamps.insert(pos, t);
    e.total_contact_time += 20.0;
    if (prov == Provenance::Direct) e.provenance = Provenance::Direct;
    ++contact_events_;
    return true;
}

void KnowledgeGraph::add_part_of(NodeId person, NodeId department) {
    check_node(person);
    check_node(department);
    if (person == department) throw Error(Status::SelfLoop, "self membership rejected");
    if (partof_adj_[person].count(department)) return;
    EdgeRecord e;
    e.head = person;
    e.tail = department;
    e.relation = Relation::IsPartOf;
    const EdgeIdx idx = static_cast<EdgeIdx>(edges_.size());
    edges_.push_back(std::move(e));
    partof_adj_[person].emplace(department, idx);
}

const std::map<NodeId, EdgeIdx>* KnowledgeGraph::adjacency(NodeId v, Relation rel) const {
    check_node(v);
    return rel == Relation::HasContactWith ? &contact_adj_[v] : &partof_adj_[v];
}

std::vector<Neighbor> KnowledgeGraph::neighbors(NodeId v, Relation rel) const {
    const auto* adj = adjacency(v, rel);
    std::vector<Neighbor> out;
    out.reserve(adj->size());
    for (const auto& [u, idx] : *adj) out.push_back({u, &edges_[idx]});
    return out;
}

bool KnowledgeGraph::adjacent(NodeId a, NodeId b, Relation rel) const {
    return adjacency(a, rel)->count(b) != 0;
}

const EdgeRecord* KnowledgeGraph::find_edge(NodeId a, NodeId b, Relation rel) const {
    const auto* adj = adjacency(a, rel);
    auto it = adj->find(b);
    return it == adj->end() ? nullptr : &edges_[it->second];
}

EdgeRecord* KnowledgeGraph::find_edge_mut(NodeId a, NodeId b, Relation rel) {
    return const_cast<EdgeRecord*>(find_edge(a, b, rel));
}

void KnowledgeGraph::compute_node_properties() {
    for (NodeRecord& rec : nodes_) {
        if (!rec.has_label(label::kPerson)) continue;
        const auto& adj = contact_adj_[rec.id];
        double total = 0.0;
        for (const auto& [u, idx] : adj) total += edges_[idx].total_contact_time;
        const double deg = static_cast<double>(adj.size());
        rec.properties[std::string(prop::kDegree)] = deg;
        rec.properties[std::string(prop::kTotalContact)] = total;
        rec.properties[std::string(prop::kAvgContact)] = deg > 0 ? total / deg : 0.0;
        rec.properties.try_emplace(std::string(prop::kContagion), 0.0);
    }
}

void KnowledgeGraph::restore_node(NodeRecord rec) {
    if (rec.id != nodes_.size())
        throw Error(Status::InputError, "archive nodes out of order");
    if (raw_ids_.count(rec.raw_id))
        throw Error(Status::InputError, "duplicate raw id in archive: " + rec.raw_id);
    raw_ids_.emplace(rec.raw_id, rec.id);
    nodes_.push_back(std::move(rec));
    contact_adj_.emplace_back();
    partof_adj_.emplace_back();
}

void KnowledgeGraph::restore_edge(EdgeRecord rec) {
    check_node(rec.head);
    check_node(rec.tail);
    if (rec.head == rec.tail) throw Error(Status::InputError, "archive contains a self loop");
    const EdgeIdx idx = static_cast<EdgeIdx>(edges_.size());
    if (rec.relation == Relation::HasContactWith) {
        if (rec.head > rec.tail) throw Error(Status::InputError, "contact edge not canonical");
        if (rec.timestamps.empty())
            throw Error(Status::InputError, "contact edge without events");
        for (std::size_t k = 1; k < rec.timestamps.size(); ++k)
            if (!(rec.timestamps[k - 1] < rec.timestamps[k]))
                throw Error(Status::InputError, "contact timestamps not strictly increasing");
        if (rec.total_contact_time != 20.0 * static_cast<double>(rec.timestamps.size()))
            throw Error(Status::InputError, "contact time inconsistent with event count");
        if (contact_adj_[rec.head].count(rec.tail))
            throw Error(Status::InputError, "duplicate contact pair in archive");
        contact_adj_[rec.head].emplace(rec.tail, idx);
        contact_adj_[rec.tail].emplace(rec.head, idx);
        ++contact_pairs_;
        contact_events_ += rec.timestamps.size();
    } else {
        if (partof_adj_[rec.head].count(rec.tail))
            throw Error(Status::InputError, "duplicate membership edge in archive");
        partof_adj_[rec.head].emplace(rec.tail, idx);
    }
    edges_.push_back(std::move(rec));
}

std::size_t KnowledgeGraph::edge_count(Relation rel) const {
    std::size_t n = 0;
    for (const EdgeRecord& e : edges_)
        if (e.relation == rel) ++n;
    return n;
}

std::size_t KnowledgeGraph::contact_degree(NodeId v) const {
    check_node(v);
    return contact_adj_[v].size();
}

} // namespace kcgml
