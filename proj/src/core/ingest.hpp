#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/graph.hpp"

#include "json.hpp"

namespace kcgml {

using ordered_json = nlohmann::ordered_json;

// One `t i j` record: a 20-second proximity interval ending at t. Person ids
// are opaque strings; rows are canonicalized so that i <= j.
struct ContactFileRow {
    double t = 0;
    std::string i;
    std::string j;

    bool operator==(const ContactFileRow&) const = default;
};

struct MetadataRow {
    std::string person;
    std::string department;
};

struct ContactParse {
    std::vector<ContactFileRow> rows; // sorted by (t, i, j), deduplicated
    std::size_t lines = 0;
    std::size_t blank = 0;
    std::size_t valid = 0;
    std::size_t malformed = 0;
    std::size_t self_loops = 0;
    std::size_t duplicates = 0;
};

struct MetadataParse {
    std::vector<MetadataRow> rows;
    std::size_t lines = 0;
    std::size_t blank = 0;
    std::size_t valid = 0;
    std::size_t malformed = 0;
    std::size_t conflicts = 0; // repeated person id; first mapping wins
};

struct IngestReport {
    ContactParse contacts;
    MetadataParse metadata;
    std::size_t unknown_persons = 0; // in metadata but never seen in contacts
    std::size_t nodes = 0;
    std::size_t persons = 0;
    std::size_t departments = 0;
    std::size_t contact_pairs = 0;
    std::size_t contact_events = 0;
    std::size_t partof_edges = 0;

    ordered_json to_json() const;
};

// Lines `t i j`, whitespace separated, extra columns ignored. Malformed and
// self-loop rows are skipped and counted. Throws InputError when the stream
// has no content lines or when more than half of them are malformed.
ContactParse parse_contacts(std::istream& in);

// Lines `i D_i`; repeated person ids keep the first department.
MetadataParse parse_metadata(std::istream& in);

KnowledgeGraph build_kg(const std::vector<ContactFileRow>& contacts,
                        const std::vector<MetadataRow>& metadata,
                        IngestReport* report = nullptr);

struct SyntheticConfig {
    std::size_t n_people = 120;
    std::size_t n_departments = 5;
    std::size_t n_timestamps = 400;
    double event_rate = 12.0; // expected contact events per timestamp
    std::size_t group_min = 2;
    std::size_t group_max = 6;
    std::uint64_t seed = 42;

    void validate() const; // throws ConfigError
};

struct SyntheticData {
    std::string contacts_text;
    std::string metadata_text;
};

// Office-like random dataset. Each timestamp co-locates disjoint groups and
// emits only a random spanning tree of each group, so per-timestamp closure
// always has pairs to infer for groups of three or more.
SyntheticData generate_synthetic(const SyntheticConfig& cfg);

// Versioned line-oriented text archive; round-trips bit-exactly.
std::string serialize_graph(const KnowledgeGraph& g);
KnowledgeGraph deserialize_graph(const std::string& text);

void write_graph(const KnowledgeGraph& g, const std::string& path);
KnowledgeGraph load_graph(const std::string& path);

// Small file helpers shared by the pipeline stages.
std::string read_text_file(const std::string& path); // throws NotFound
void write_text_file(const std::string& path, const std::string& content);

} // namespace kcgml
