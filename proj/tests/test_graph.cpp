#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "core/graph.hpp"
#include "core/ingest.hpp"

using namespace kcgml;

namespace {

KnowledgeGraph path_graph_123() {
    KnowledgeGraph g;
    const NodeId a = g.intern("1", label::kPerson);
    const NodeId b = g.intern("2", label::kPerson);
    const NodeId c = g.intern("3", label::kPerson);
    g.add_contact(a, b, 40, Provenance::Direct);
    g.add_contact(b, c, 40, Provenance::Direct);
    return g;
}

} // namespace

TEST_CASE("single contact event builds one symmetric edge") {
    KnowledgeGraph g;
    const NodeId a = g.intern("1", label::kPerson);
    const NodeId b = g.intern("2", label::kPerson);
    CHECK(g.add_contact(a, b, 40, Provenance::Direct));

    CHECK(g.contact_pair_count() == 1);
    const EdgeRecord* e = g.find_edge(a, b, Relation::HasContactWith);
    REQUIRE(e != nullptr);
    CHECK(e->total_contact_time == 20.0);
    CHECK(e->timestamps == std::vector<double>{40});
    CHECK(g.find_edge(b, a, Relation::HasContactWith) == e);
}

TEST_CASE("duplicate events are idempotent") {
    KnowledgeGraph g;
    const NodeId a = g.intern("1", label::kPerson);
    const NodeId b = g.intern("2", label::kPerson);
    g.add_contact(a, b, 40, Provenance::Direct);
    const std::string once = serialize_graph(g);
    CHECK_FALSE(g.add_contact(a, b, 40, Provenance::Direct));
    CHECK(serialize_graph(g) == once);
}

TEST_CASE("repeated contacts extend the same edge") {
    KnowledgeGraph g;
    const NodeId a = g.intern("1", label::kPerson);
    const NodeId b = g.intern("2", label::kPerson);
    g.add_contact(a, b, 40, Provenance::Direct);
    g.add_contact(a, b, 60, Provenance::Direct);

    const EdgeRecord* e = g.find_edge(a, b, Relation::HasContactWith);
    REQUIRE(e != nullptr);
    // oracle: events x 20 seconds
    CHECK(e->total_contact_time == 40.0);
    CHECK(e->timestamps == std::vector<double>{40, 60});
    CHECK(g.contact_pair_count() == 1);
    CHECK(g.contact_event_count() == 2);
}

TEST_CASE("self contacts are rejected with the self-loop status") {
    KnowledgeGraph g;
    const NodeId a = g.intern("1", label::kPerson);
    try {
        g.add_contact(a, a, 40, Provenance::Direct);
        FAIL("expected a self-loop error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::SelfLoop);
    }
}

TEST_CASE("neighbors are ordered and symmetric") {
    KnowledgeGraph g = path_graph_123();
    const auto mid = g.neighbors(1, Relation::HasContactWith);
    REQUIRE(mid.size() == 2);
    CHECK(mid[0].id == 0);
    CHECK(mid[1].id == 2);

    const auto end = g.neighbors(0, Relation::HasContactWith);
    REQUIRE(end.size() == 1);
    CHECK(end[0].id == 1);

    KnowledgeGraph iso;
    iso.intern("z", label::kPerson);
    CHECK(iso.neighbors(0, Relation::HasContactWith).empty());

    CHECK_THROWS_AS((void)g.neighbors(99, Relation::HasContactWith), Error);
}

TEST_CASE("adjacency matches a brute-force rebuild") {
    KnowledgeGraph g;
    const NodeId a = g.intern("1", label::kPerson);
    const NodeId b = g.intern("2", label::kPerson);
    const NodeId c = g.intern("3", label::kPerson);
    g.add_contact(a, b, 20, Provenance::Direct);
    g.add_contact(a, c, 20, Provenance::Direct);
    g.add_contact(a, b, 40, Provenance::Direct);

    const auto nb = g.neighbors(a, Relation::HasContactWith);
    REQUIRE(nb.size() == 2);
    CHECK(nb[0].id == b);
    CHECK(nb[1].id == c);
    CHECK(nb[0].edge->timestamps.size() == 2);
}

TEST_CASE("node properties: degree, total and average contact time") {
    KnowledgeGraph g;
    const NodeId a = g.intern("1", label::kPerson);
    const NodeId b = g.intern("2", label::kPerson);
    const NodeId c = g.intern("3", label::kPerson);
    // 3 events over 2 neighbors
    g.add_contact(a, b, 20, Provenance::Direct);
    g.add_contact(a, b, 40, Provenance::Direct);
    g.add_contact(a, c, 20, Provenance::Direct);
    g.compute_node_properties();

    CHECK(g.node(a).property_or(prop::kDegree, -1) == 2.0);
    CHECK(g.node(a).property_or(prop::kTotalContact, -1) == 60.0);
    CHECK(g.node(a).property_or(prop::kAvgContact, -1) == 30.0);
    CHECK(g.node(a).property_or(prop::kContagion, -1) == 0.0);
}

TEST_CASE("isolated node has zero properties") {
    KnowledgeGraph g;
    g.intern("alone", label::kPerson);
    g.compute_node_properties();
    CHECK(g.node(0).property_or(prop::kDegree, -1) == 0.0);
    CHECK(g.node(0).property_or(prop::kTotalContact, -1) == 0.0);
    CHECK(g.node(0).property_or(prop::kAvgContact, -1) == 0.0);
}

TEST_CASE("triangle symmetry") {
    KnowledgeGraph g;
    const NodeId a = g.intern("1", label::kPerson);
    const NodeId b = g.intern("2", label::kPerson);
    const NodeId c = g.intern("3", label::kPerson);
    g.add_contact(a, b, 20, Provenance::Direct);
    g.add_contact(b, c, 20, Provenance::Direct);
    g.add_contact(a, c, 20, Provenance::Direct);
    g.compute_node_properties();
    for (NodeId v : {a, b, c}) {
        CHECK(g.node(v).property_or(prop::kDegree, -1) == 2.0);
        CHECK(g.node(v).property_or(prop::kTotalContact, -1) == 40.0);
        CHECK(g.node(v).property_or(prop::kAvgContact, -1) == 20.0);
    }
}

TEST_CASE("contact-time conservation over random event sequences") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        KnowledgeGraph g;
        for (int i = 0; i < 8; ++i) g.intern(std::to_string(i), label::kPerson);
        std::size_t events = 0;
        std::uint64_t state = seed;
        auto next = [&] {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            return state >> 33;
        };
        for (int k = 0; k < 60; ++k) {
            const NodeId i = static_cast<NodeId>(next() % 8);
            const NodeId j = static_cast<NodeId>(next() % 8);
            const double t = 20.0 * static_cast<double>(1 + next() % 10);
            if (i == j) continue;
            if (g.add_contact(i, j, t, Provenance::Direct)) ++events;
        }
        g.compute_node_properties();
        double total = 0.0;
        for (const NodeRecord& n : g.nodes()) total += n.property_or(prop::kTotalContact, 0);
        CHECK(total == 2.0 * 20.0 * static_cast<double>(events));
        CHECK(g.contact_event_count() == events);
    }
}

TEST_CASE("symmetry property: j in neighbors(i) iff i in neighbors(j)") {
    KnowledgeGraph g = path_graph_123();
    for (const NodeRecord& n : g.nodes())
        for (const Neighbor& nb : g.neighbors(n.id, Relation::HasContactWith)) {
            bool back = false;
            for (const Neighbor& rev : g.neighbors(nb.id, Relation::HasContactWith))
                if (rev.id == n.id) back = true;
            CHECK(back);
        }
}

TEST_CASE("ingestion determinism: same event sequence, bit-identical graphs") {
    auto build = [] {
        KnowledgeGraph g;
        const NodeId a = g.intern("x", label::kPerson);
        const NodeId b = g.intern("y", label::kPerson);
        const NodeId c = g.intern("z", label::kPerson);
        g.add_contact(a, b, 20, Provenance::Direct);
        g.add_contact(b, c, 40, Provenance::Direct);
        g.add_part_of(a, g.intern("D", label::kDepartment));
        g.compute_node_properties();
        return g;
    };
    CHECK(serialize_graph(build()) == serialize_graph(build()));
    CHECK(build() == build());
}
