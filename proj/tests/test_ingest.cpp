#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "core/ingest.hpp"

using namespace kcgml;

namespace {

ContactParse parse(const std::string& text) {
    std::istringstream in(text);
    return parse_contacts(in);
}

} // namespace

TEST_CASE("contact rows parse by position") {
    const auto p = parse("40 15 22\n");
    REQUIRE(p.rows.size() == 1);
    CHECK(p.rows[0].t == 40);
    CHECK(p.rows[0].i == "15");
    CHECK(p.rows[0].j == "22");
}

TEST_CASE("rows are sorted by time then pair") {
    const auto p = parse("60 1 2\n40 1 3\n");
    REQUIRE(p.rows.size() == 2);
    CHECK(p.rows[0].t == 40);
    CHECK(p.rows[0].j == "3");
    CHECK(p.rows[1].t == 60);
}

TEST_CASE("self loops are skipped and counted") {
    const auto p = parse("40 7 7\n60 1 2\n");
    CHECK(p.self_loops == 1);
    CHECK(p.valid == 1);
    REQUIRE(p.rows.size() == 1);
}

TEST_CASE("malformed lines are counted; tabs and extra columns accepted") {
    const auto p = parse("40 1 2 extra ignored\n60\t3\t4\nnot-a-number 5 6\n80 9\n");
    CHECK(p.valid == 2);
    CHECK(p.malformed == 2);
    CHECK(p.lines == 4);
    CHECK(p.valid + p.malformed + p.self_loops + p.duplicates + p.blank == p.lines);
}

TEST_CASE("duplicate events collapse, including swapped order") {
    const auto p = parse("40 2 1\n40 1 2\n40 1 2\n");
    CHECK(p.duplicates == 2);
    REQUIRE(p.rows.size() == 1);
    CHECK(p.rows[0].i == "1");
}

TEST_CASE("empty input is an error") {
    CHECK_THROWS_AS((void)parse(""), Error);
    CHECK_THROWS_AS((void)parse("\n\n"), Error);
}

TEST_CASE("mostly-malformed input is rejected") {
    try {
        (void)parse("garbage\nmore garbage\n40 1 2\n");
        FAIL("expected input error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::InputError);
    }
}

TEST_CASE("build_kg wires persons, departments and memberships") {
    const auto contacts = parse("40 1 2\n");
    std::istringstream meta("1 SALES\n2 SALES\n");
    const auto metadata = parse_metadata(meta);
    IngestReport report;
    report.contacts = contacts;
    report.metadata = metadata;
    const KnowledgeGraph g = build_kg(contacts.rows, metadata.rows, &report);

    CHECK(g.node_count() == 3);
    CHECK(report.persons == 2);
    CHECK(report.departments == 1);
    CHECK(g.contact_pair_count() == 1);
    CHECK(g.edge_count(Relation::IsPartOf) == 2);
    CHECK(report.unknown_persons == 0);
}

TEST_CASE("person missing from metadata keeps no membership") {
    const auto contacts = parse("40 1 2\n");
    std::istringstream meta("1 SALES\n");
    const auto metadata = parse_metadata(meta);
    const KnowledgeGraph g = build_kg(contacts.rows, metadata.rows, nullptr);
    CHECK(g.neighbors(g.id_of("2"), Relation::IsPartOf).empty());
    CHECK(g.neighbors(g.id_of("1"), Relation::IsPartOf).size() == 1);
}

TEST_CASE("metadata-only person creates a warning and a node without contacts") {
    const auto contacts = parse("40 1 2\n");
    std::istringstream meta("9 SALES\n");
    const auto metadata = parse_metadata(meta);
    IngestReport report;
    const KnowledgeGraph g = build_kg(contacts.rows, metadata.rows, &report);
    CHECK(report.unknown_persons == 1);
    CHECK(g.contact_degree(g.id_of("9")) == 0);
}

TEST_CASE("metadata conflicts keep the first department") {
    std::istringstream meta("1 SALES\n1 HR\n");
    const auto metadata = parse_metadata(meta);
    CHECK(metadata.conflicts == 1);
    REQUIRE(metadata.rows.size() == 1);
    CHECK(metadata.rows[0].department == "SALES");
}

TEST_CASE("distinct pair count matches a generator-side count") {
    SyntheticConfig cfg;
    cfg.n_people = 30;
    cfg.n_timestamps = 40;
    cfg.event_rate = 5;
    cfg.seed = 11;
    const SyntheticData data = generate_synthetic(cfg);

    const auto contacts = parse(data.contacts_text);
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& row : contacts.rows) pairs.emplace(row.i, row.j);

    const KnowledgeGraph g = build_kg(contacts.rows, {}, nullptr);
    CHECK(g.contact_pair_count() == pairs.size());
}

TEST_CASE("synthetic generation is deterministic per seed") {
    SyntheticConfig cfg;
    cfg.n_people = 12;
    cfg.n_timestamps = 6;
    cfg.event_rate = 4;
    cfg.seed = 1;
    const SyntheticData a = generate_synthetic(cfg);
    const SyntheticData b = generate_synthetic(cfg);
    CHECK(a.contacts_text == b.contacts_text);
    CHECK(a.metadata_text == b.metadata_text);

    cfg.seed = 2;
    CHECK(generate_synthetic(cfg).contacts_text != a.contacts_text);
}

TEST_CASE("single department synthetic metadata") {
    SyntheticConfig cfg;
    cfg.n_people = 5;
    cfg.n_departments = 1;
    cfg.n_timestamps = 2;
    cfg.event_rate = 2;
    const SyntheticData data = generate_synthetic(cfg);
    std::istringstream in(data.metadata_text);
    const auto meta = parse_metadata(in);
    CHECK(meta.rows.size() == 5);
    for (const auto& row : meta.rows) CHECK(row.department == "DEP1");
}

TEST_CASE("spanning trees leave closure work in every group of 3+") {
    SyntheticConfig cfg;
    cfg.n_people = 9;
    cfg.n_timestamps = 1;
    cfg.event_rate = 8;
    cfg.group_min = 3;
    cfg.group_max = 3;
    cfg.seed = 3;
    const SyntheticData data = generate_synthetic(cfg);
    const auto contacts = parse(data.contacts_text);
    // groups of 3 emit exactly 2 events each; a closed triangle would be 3
    CHECK(contacts.rows.size() % 2 == 0);
    const KnowledgeGraph g = build_kg(contacts.rows, {}, nullptr);
    CHECK(g.contact_pair_count() == contacts.rows.size());
}

TEST_CASE("archive round-trip is the identity, bit-exact") {
    const auto contacts = parse("40 1 2\n60 2 3\n120 1 2\n");
    std::istringstream meta("1 A\n2 B\n3 A\n");
    const auto metadata = parse_metadata(meta);
    const KnowledgeGraph g = build_kg(contacts.rows, metadata.rows, nullptr);

    const std::string text = serialize_graph(g);
    const KnowledgeGraph back = deserialize_graph(text);
    CHECK(back == g);
    CHECK(serialize_graph(back) == text);
}

TEST_CASE("empty graph archive round-trips") {
    const KnowledgeGraph g;
    const KnowledgeGraph back = deserialize_graph(serialize_graph(g));
    CHECK(back == g);
    CHECK(back.node_count() == 0);
}

TEST_CASE("hand-written archive deserializes to the expected graph") {
    const std::string text = "kcgml-graph v1\n"
                             "nodes 2\n"
                             "0 alice Person deg=1\n"
                             "1 bob Person deg=1\n"
                             "edges 1\n"
                             "contact 0 1 direct 1 40 20 60\n";
    const KnowledgeGraph g = deserialize_graph(text);
    CHECK(g.node_count() == 2);
    CHECK(g.node(0).raw_id == "alice");
    CHECK(g.node(1).has_label(label::kPerson));
    const EdgeRecord* e = g.find_edge(0, 1, Relation::HasContactWith);
    REQUIRE(e != nullptr);
    CHECK(e->timestamps == std::vector<double>{20, 60});
    CHECK(e->total_contact_time == 40.0);
}

TEST_CASE("archive errors: version mismatch and truncation are distinct") {
    try {
        (void)deserialize_graph("kcgml-graph v9\nnodes 0\nedges 0\n");
        FAIL("expected version error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::FormatVersion);
    }
    try {
        (void)deserialize_graph("something else entirely\n");
        FAIL("expected version error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::FormatVersion);
    }
    try {
        (void)deserialize_graph("kcgml-graph v1\nnodes 2\n0 a Person\n");
        FAIL("expected truncation error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::Truncated);
    }
}

TEST_CASE("parse-serialize-build round trip equals direct build") {
    SyntheticConfig cfg;
    cfg.n_people = 15;
    cfg.n_timestamps = 10;
    cfg.event_rate = 5;
    cfg.seed = 4;
    const SyntheticData data = generate_synthetic(cfg);
    const auto contacts = parse(data.contacts_text);
    std::istringstream meta(data.metadata_text);
    const auto metadata = parse_metadata(meta);

    const KnowledgeGraph g = build_kg(contacts.rows, metadata.rows, nullptr);
    CHECK(deserialize_graph(serialize_graph(g)) == g);
}
