#include "core/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include "core/random.hpp"
#include "core/text_io.hpp"

namespace kcgml {

namespace {
constexpr std::string_view kArchiveMagic = "kcgml-graph";
constexpr std::string_view kArchiveVersion = "v1";
} // namespace

ContactParse parse_contacts(std::istream& in) {
    ContactParse out;
    std::string line;
    while (std::getline(in, line)) {
        ++out.lines;
        const auto fields = split_ws(line);
        if (fields.empty()) {
            ++out.blank;
            continue;
        }
        if (fields.size() < 3) {
            ++out.malformed;
            continue;
        }
        const auto t = parse_double(fields[0]);
        if (!t || !(*t > 0)) {
            ++out.malformed;
            continue;
        }
        std::string i(fields[1]);
        std::string j(fields[2]);
        if (i == j) {
            ++out.self_loops;
            continue;
        }
        if (j < i) std::swap(i, j);
        out.rows.push_back({*t, std::move(i), std::move(j)});
        ++out.valid;
    }

    const std::size_t content = out.lines - out.blank;
    if (content == 0) throw Error(Status::InputError, "contact file has no content lines");
    if (out.malformed * 2 > content)
        throw Error(Status::InputError, "more than half of the contact lines are malformed; "
                                        "this does not look like a `t i j` file");

    std::sort(out.rows.begin(), out.rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.t, a.i, a.j) < std::tie(b.t, b.i, b.j);
    });
    auto last = std::unique(out.rows.begin(), out.rows.end());
    out.duplicates = static_cast<std::size_t>(out.rows.end() - last);
    out.valid -= out.duplicates;
    out.rows.erase(last, out.rows.end());
    return out;
}

MetadataParse parse_metadata(std::istream& in) {
    MetadataParse out;
    std::map<std::string, std::string> seen;
    std::string line;
    while (std::getline(in, line)) {
        ++out.lines;
        const auto fields = split_ws(line);
        if (fields.empty()) {
            ++out.blank;
            continue;
        }
        if (fields.size() < 2) {
            ++out.malformed;
            continue;
        }
        std::string person(fields[0]);
        std::string department(fields[1]);
        if (auto [it, inserted] = seen.emplace(person, department); !inserted) {
            ++out.conflicts;
            continue;
        }
        out.rows.push_back({std::move(person), std::move(department)});
        ++out.valid;
    }
    return out;
}

KnowledgeGraph build_kg(const std::vector<ContactFileRow>& contacts,
                        const std::vector<MetadataRow>& metadata, IngestReport* report) {
    KnowledgeGraph g;
    for (const ContactFileRow& row : contacts) {
        const NodeId i = g.intern(row.i, label::kPerson);
        const NodeId j = g.intern(row.j, label::kPerson);
        g.add_contact(i, j, row.t, Provenance::Direct);
    }
    std::size_t unknown = 0;
    for (const MetadataRow& row : metadata) {
        if (!g.contains(row.person)) ++unknown;
        const NodeId person = g.intern(row.person, label::kPerson);
        const NodeId department = g.intern(row.department, label::kDepartment);
        g.add_part_of(person, department);
    }
    g.compute_node_properties();

    if (report) {
        report->unknown_persons = unknown;
        report->nodes = g.node_count();
        report->partof_edges = g.edge_count(Relation::IsPartOf);
        report->contact_pairs = g.contact_pair_count();
        report->contact_events = g.contact_event_count();
        report->persons = 0;
        report->departments = 0;
        for (const NodeRecord& n : g.nodes()) {
            if (n.has_label(label::kPerson)) ++report->persons;
            if (n.has_label(label::kDepartment)) ++report->departments;
        }
    }
    return g;
}

ordered_json IngestReport::to_json() const {
    ordered_json j;
    j["contacts"] = {{"lines", contacts.lines},       {"blank", contacts.blank},
                     {"valid", contacts.valid},       {"malformed", contacts.malformed},
                     {"self_loops", contacts.self_loops}, {"duplicates", contacts.duplicates}};
    j["metadata"] = {{"lines", metadata.lines},
                     {"blank", metadata.blank},
                     {"valid", metadata.valid},
                     {"malformed", metadata.malformed},
                     {"conflicts", metadata.conflicts},
                     {"unknown_persons", unknown_persons}};
    j["graph"] = {{"nodes", nodes},
                  {"persons", persons},
                  {"departments", departments},
                  {"contact_pairs", contact_pairs},
                  {"contact_events", contact_events},
                  {"partof_edges", partof_edges}};
    // the office-building contact study this format comes from
    j["reference"] = {{"office_raw_pairs", 1694}};
    return j;
}

void SyntheticConfig::validate() const {
    if (n_people < 2) throw Error(Status::ConfigError, "synthetic: need at least 2 people");
    if (n_departments < 1) throw Error(Status::ConfigError, "synthetic: need at least 1 department");
    if (n_timestamps < 1) throw Error(Status::ConfigError, "synthetic: need at least 1 timestamp");
    if (!(event_rate > 0)) throw Error(Status::ConfigError, "synthetic: event_rate must be > 0");
    if (group_min < 2) throw Error(Status::ConfigError, "synthetic: group_min must be >= 2");
    if (group_max < group_min) throw Error(Status::ConfigError, "synthetic: group_max < group_min");
}

SyntheticData generate_synthetic(const SyntheticConfig& cfg) {
    cfg.validate();
    SyntheticData out;

    Rng meta_rng = derive_rng(cfg.seed, "synthetic-meta");
    std::string metadata;
    for (std::size_t p = 1; p <= cfg.n_people; ++p) {
        const std::uint64_t dep = 1 + meta_rng.next_below(cfg.n_departments);
        metadata += std::to_string(p);
        metadata += ' ';
        metadata += "DEP" + std::to_string(dep);
        metadata += '\n';
    }
    out.metadata_text = std::move(metadata);

    Rng rng = derive_rng(cfg.seed, "synthetic-contacts");
    std::vector<std::size_t> people(cfg.n_people);
    std::iota(people.begin(), people.end(), std::size_t{1});
    std::string contacts;
    for (std::size_t ts = 1; ts <= cfg.n_timestamps; ++ts) {
        const double t = 20.0 * static_cast<double>(ts);
        const std::uint64_t target = rng.next_poisson(cfg.event_rate);
        // Fisher-Yates; each person joins at most one group per timestamp.
        for (std::size_t k = cfg.n_people - 1; k > 0; --k) {
            const std::size_t r = static_cast<std::size_t>(rng.next_below(k + 1));
            std::swap(people[k], people[r]);
        }
        std::size_t emitted = 0;
        std::size_t next = 0;
        while (emitted < target && next + 2 <= cfg.n_people) {
            std::size_t size = cfg.group_min + rng.next_below(cfg.group_max - cfg.group_min + 1);
            size = std::min(size, cfg.n_people - next);
            if (size < 2) break;
            // random spanning tree over the group: a strict subset of the clique
            for (std::size_t m = 1; m < size; ++m) {
                const std::size_t parent = rng.next_below(m);
                contacts += format_double(t);
                contacts += ' ';
                contacts += std::to_string(people[next + m]);
                contacts += ' ';
                contacts += std::to_string(people[next + parent]);
                contacts += '\n';
                ++emitted;
            }
            next += size;
        }
    }
    out.contacts_text = std::move(contacts);
    return out;
}

namespace {

std::string serialize_node(const NodeRecord& n) {
    std::string line = std::to_string(n.id);
    line += ' ';
    line += n.raw_id;
    line += ' ';
    for (std::size_t i = 0; i < n.labels.size(); ++i) {
        if (i) line += ',';
        line += n.labels[i];
    }
    for (const auto& [k, v] : n.properties) {
        line += ' ';
        line += k;
        line += '=';
        line += format_double(v);
    }
    return line;
}

std::string serialize_edge(const EdgeRecord& e) {
    std::string line = relation_name(e.relation);
    line += ' ';
    line += std::to_string(e.head);
    line += ' ';
    line += std::to_string(e.tail);
    if (e.relation == Relation::HasContactWith) {
        line += ' ';
        line += provenance_name(e.provenance);
        line += ' ';
        line += format_double(e.strength);
        line += ' ';
        line += format_double(e.total_contact_time);
        for (double t : e.timestamps) {
            line += ' ';
            line += format_double(t);
        }
    }
    return line;
}

} // namespace

std::string serialize_graph(const KnowledgeGraph& g) {
    std::string out;
    out += kArchiveMagic;
    out += ' ';
    out += kArchiveVersion;
    out += '\n';
    out += "nodes " + std::to_string(g.node_count()) + '\n';
    for (const NodeRecord& n : g.nodes()) {
        out += serialize_node(n);
        out += '\n';
    }
    out += "edges " + std::to_string(g.edges().size()) + '\n';
    for (const EdgeRecord& e : g.edges()) {
        out += serialize_edge(e);
        out += '\n';
    }
    return out;
}

namespace {

NodeRecord parse_node_line(const std::vector<std::string_view>& f) {
    if (f.size() < 3) throw Error(Status::InputError, "bad node line in archive");
    NodeRecord rec;
    const auto id = parse_u64(f[0]);
    if (!id) throw Error(Status::InputError, "bad node id in archive");
    rec.id = static_cast<NodeId>(*id);
    rec.raw_id = std::string(f[1]);
    std::string_view labels = f[2];
    while (!labels.empty()) {
        const auto comma = labels.find(',');
        rec.labels.emplace_back(labels.substr(0, comma));
        if (comma == std::string_view::npos) break;
        labels.remove_prefix(comma + 1);
    }
    for (std::size_t i = 3; i < f.size(); ++i) {
        const auto eq = f[i].find('=');
        if (eq == std::string_view::npos)
            throw Error(Status::InputError, "bad node property in archive");
        const auto v = parse_double(f[i].substr(eq + 1));
        if (!v) throw Error(Status::InputError, "bad node property value in archive");
        rec.properties.emplace(std::string(f[i].substr(0, eq)), *v);
    }
    return rec;
}

EdgeRecord parse_edge_line(const std::vector<std::string_view>& f) {
    if (f.size() < 3) throw Error(Status::InputError, "bad edge line in archive");
    EdgeRecord rec;
    const auto head = parse_u64(f[1]);
    const auto tail = parse_u64(f[2]);
    if (!head || !tail) throw Error(Status::InputError, "bad edge endpoints in archive");
    rec.head = static_cast<NodeId>(*head);
    rec.tail = static_cast<NodeId>(*tail);
    if (f[0] == "partof") {
        rec.relation = Relation::IsPartOf;
        rec.total_contact_time = 0.0;
        return rec;
    }
    if (f[0] != "contact") throw Error(Status::InputError, "unknown edge relation in archive");
    if (f.size() < 7) throw Error(Status::InputError, "bad contact edge line in archive");
    rec.relation = Relation::HasContactWith;
    if (f[3] == "direct")
        rec.provenance = Provenance::Direct;
    else if (f[3] == "inferred")
        rec.provenance = Provenance::Inferred;
    else
        throw Error(Status::InputError, "unknown edge provenance in archive");
    const auto strength = parse_double(f[4]);
    const auto total = parse_double(f[5]);
    if (!strength || !total) throw Error(Status::InputError, "bad edge attributes in archive");
    rec.strength = *strength;
    rec.total_contact_time = *total;
    for (std::size_t i = 6; i < f.size(); ++i) {
        const auto t = parse_double(f[i]);
        if (!t) throw Error(Status::InputError, "bad edge timestamp in archive");
        rec.timestamps.push_back(*t);
    }
    return rec;
}

} // namespace

KnowledgeGraph deserialize_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw Error(Status::Truncated, "empty graph archive");
    {
        const auto f = split_ws(line);
        if (f.size() < 2 || f[0] != kArchiveMagic)
            throw Error(Status::FormatVersion, "not a kcgml graph archive");
        if (f[1] != kArchiveVersion)
            throw Error(Status::FormatVersion,
                        "unsupported archive version: " + std::string(f[1]));
    }

    auto read_count = [&](std::string_view section) {
        if (!std::getline(in, line))
            throw Error(Status::Truncated, "archive ends before " + std::string(section));
        const auto f = split_ws(line);
        if (f.size() != 2 || f[0] != section)
            throw Error(Status::InputError, "expected `" + std::string(section) + " <count>`");
        const auto n = parse_u64(f[1]);
        if (!n) throw Error(Status::InputError, "bad section count");
        return *n;
    };

    KnowledgeGraph g;
    const std::uint64_t n_nodes = read_count("nodes");
    for (std::uint64_t i = 0; i < n_nodes; ++i) {
        if (!std::getline(in, line))
            throw Error(Status::Truncated, "archive ends inside node section");
        g.restore_node(parse_node_line(split_ws(line)));
    }
    const std::uint64_t n_edges = read_count("edges");
    for (std::uint64_t i = 0; i < n_edges; ++i) {
        if (!std::getline(in, line))
            throw Error(Status::Truncated, "archive ends inside edge section");
        g.restore_edge(parse_edge_line(split_ws(line)));
    }
    return g;
}

void write_graph(const KnowledgeGraph& g, const std::string& path) {
    write_text_file(path, serialize_graph(g));
}

KnowledgeGraph load_graph(const std::string& path) { return deserialize_graph(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Status::NotFound, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Status::InputError, "cannot write file: " + path);
    out << content;
    if (!out) throw Error(Status::InputError, "write failed: " + path);
}

} // namespace kcgml
