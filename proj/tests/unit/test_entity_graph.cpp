#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "memharbor/entity_graph.hpp"
#include "memharbor/errors.hpp"
#include "oracles.hpp"

using namespace memharbor;
using namespace memharbor::test;

namespace {

MemoryStore store_with_mentions(
    const std::vector<std::vector<std::pair<const char*, EntityType>>>& per_memory) {
    MemoryStore store(4);
    for (std::size_t i = 0; i < per_memory.size(); ++i) {
        MemoryRecord r = make_record("m" + std::to_string(i), "text",
                                     std::vector<double>(4, 0.0), static_cast<std::int64_t>(i));
        for (auto& [surface, type] : per_memory[i]) r.entities.push_back({surface, type, {}});
        store.ingest(std::move(r));
    }
    return store;
}

} // namespace

TEST_CASE("single mention resolves to one entity with one alias") {
    MemoryStore store = store_with_mentions({{{"Paris", EntityType::location}}});
    EntityGraph graph = resolve(store, 0.85);
    REQUIRE(graph.entities.size() == 1);
    CHECK(graph.entities[0].aliases == std::set<std::string>{"paris"});
    CHECK(graph.entities[0].canonical_id == "location:paris");
    REQUIRE(graph.entities[0].member_mentions.size() == 1);
    CHECK(graph.entities[0].member_mentions[0].first == "m0");
    CHECK(store.records()[0].entities[0].canonical_id == "location:paris");
}

TEST_CASE("case-folded duplicates merge") {
    MemoryStore store = store_with_mentions(
        {{{"John Smith", EntityType::person}}, {{"john smith", EntityType::person}}});
    EntityGraph graph = resolve(store, 0.99);
    REQUIRE(graph.entities.size() == 1);
    CHECK(graph.entities[0].aliases == std::set<std::string>{"john smith"});
    CHECK(graph.entities[0].member_mentions.size() == 2);
}

TEST_CASE("threshold separates john/jon from mary") {
    MemoryStore store = store_with_mentions({{{"john", EntityType::person}},
                                             {{"jon", EntityType::person}},
                                             {{"mary", EntityType::person}}});
    // ratio(john, jon) = 6/7 ≈ 0.857 links at 0.8
    CHECK(oracle::sequence_ratio("john", "jon") == doctest::Approx(6.0 / 7.0));
    EntityGraph graph = resolve(store, 0.8);
    REQUIRE(graph.entities.size() == 2);
    CHECK(graph.entities[0].canonical_id == "person:john");
    CHECK(graph.entities[0].aliases == std::set<std::string>{"john", "jon"});
    CHECK(graph.entities[1].canonical_id == "person:mary");
}

TEST_CASE("same surface different type stays separate") {
    MemoryStore store = store_with_mentions(
        {{{"phoenix", EntityType::location}}, {{"phoenix", EntityType::organization}}});
    EntityGraph graph = resolve(store, 0.85);
    CHECK(graph.entities.size() == 2);
}

TEST_CASE("invalid thresholds are rejected") {
    MemoryStore store = store_with_mentions({{{"a", EntityType::person}}});
    CHECK_THROWS_AS(resolve(store, 0.0), InvalidThreshold);
    CHECK_THROWS_AS(resolve(store, -1.0), InvalidThreshold);
    CHECK_THROWS_AS(resolve(store, 1.5), InvalidThreshold);
    CHECK_NOTHROW(resolve(store, 1.0));
}

TEST_CASE("build_edges counts unordered co-occurrence pairs") {
    // m0: A,B ; m1: A,B,C ; edges: AB=2, AC=1, BC=1
    MemoryStore store = store_with_mentions(
        {{{"alice", EntityType::person}, {"google", EntityType::organization}},
         {{"alice", EntityType::person},
          {"google", EntityType::organization},
          {"paris", EntityType::location}}});
    EntityGraph graph = build_graph(store, 0.85);
    REQUIRE(graph.entities.size() == 3);
    auto edge = [&](std::string a, std::string b) {
        if (b < a) std::swap(a, b);
        auto it = graph.edges.find({a, b});
        return it == graph.edges.end() ? std::size_t{0} : it->second;
    };
    CHECK(edge("person:alice", "organization:google") == 2);
    CHECK(edge("person:alice", "location:paris") == 1);
    CHECK(edge("organization:google", "location:paris") == 1);

    // single-entity memory produces no edges
    MemoryStore lone = store_with_mentions({{{"bob", EntityType::person}}});
    EntityGraph lone_graph = build_graph(lone, 0.85);
    CHECK(lone_graph.edges.empty());
}

TEST_CASE("duplicate mentions of one entity in a memory count once per pair") {
    MemoryStore store = store_with_mentions(
        {{{"alice", EntityType::person}, {"alice", EntityType::person},
          {"google", EntityType::organization}}});
    EntityGraph graph = build_graph(store, 0.85);
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges.begin()->second == 1);
}

TEST_CASE("build_edges requires resolved mentions") {
    MemoryStore store = store_with_mentions({{{"alice", EntityType::person}}});
    EntityGraph empty_graph;
    CHECK_THROWS_AS(build_edges(empty_graph, store), UnresolvedMention);
}

TEST_CASE("related_memories walks zero or one hop") {
    // m0 mentions A, m1 mentions A and B, m2 mentions B and C, m3 mentions D
    MemoryStore store = store_with_mentions(
        {{{"alice", EntityType::person}},
         {{"alice", EntityType::person}, {"bob", EntityType::person}},
         {{"bob", EntityType::person}, {"carol", EntityType::person}},
         {{"dave", EntityType::person}}});
    EntityGraph graph = build_graph(store, 0.95);

    CHECK(related_memories("alice", graph, store, 0) == std::set<std::string>{"m0", "m1"});
    // one hop pulls in bob's memories (alice—bob edge), not carol-only ones
    CHECK(related_memories("alice", graph, store, 1) ==
          std::set<std::string>{"m0", "m1", "m2"});
    CHECK(related_memories("ALICE", graph, store, 0) == std::set<std::string>{"m0", "m1"});
    CHECK_THROWS_AS(related_memories("unknown surface", graph, store, 0), NotFound);
    CHECK_THROWS_AS(related_memories("alice", graph, store, 2), Error);

    // hop-1 result always contains the hop-0 result
    for (const char* surface : {"alice", "bob", "carol", "dave"}) {
        auto h0 = related_memories(surface, graph, store, 0);
        auto h1 = related_memories(surface, graph, store, 1);
        CHECK(std::includes(h1.begin(), h1.end(), h0.begin(), h0.end()));
    }
}

TEST_CASE("graph export format") {
    MemoryStore store = store_with_mentions(
        {{{"alice", EntityType::person}, {"google", EntityType::organization}}});
    EntityGraph graph = build_graph(store, 0.85);
    std::ostringstream out;
    export_graph(graph, out);
    CHECK(out.str() ==
          "E\torganization:google\torganization\tgoogle\n"
          "E\tperson:alice\tperson\talice\n"
          "R\torganization:google\tperson:alice\t1\n");
}

TEST_CASE("raising the threshold never merges clusters") {
    std::vector<std::string> surfaces = {"anna", "anne", "hanna", "bob", "rob", "robert"};
    std::size_t last = 0;
    for (double threshold : {0.3, 0.5, 0.7, 0.8, 0.9, 1.0}) {
        auto clusters = cluster_surfaces(surfaces, threshold);
        CHECK(clusters.size() >= last);
        last = clusters.size();
    }
    CHECK(cluster_surfaces(surfaces, 1.0).size() == surfaces.size());
}

TEST_CASE("resolution is a partition") {
    std::mt19937_64 rng(2025);
    const char* surfaces[] = {"anna", "anne", "anya", "bob", "bobby", "rob", "google", "googol"};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<std::pair<const char*, EntityType>>> memories;
        std::size_t n_mem = 1 + rng() % 5;
        std::size_t total_mentions = 0;
        for (std::size_t i = 0; i < n_mem; ++i) {
            std::vector<std::pair<const char*, EntityType>> mentions;
            for (std::size_t j = 0, n = rng() % 4; j < n; ++j) {
                mentions.push_back({surfaces[rng() % 8],
                                    rng() % 2 ? EntityType::person : EntityType::organization});
                ++total_mentions;
            }
            memories.push_back(std::move(mentions));
        }
        MemoryStore store = store_with_mentions(memories);
        double threshold = 0.5 + 0.5 * (static_cast<double>(rng() % 100) / 100.0);
        EntityGraph graph = resolve(store, threshold);

        std::size_t assigned = 0;
        for (const CanonicalEntity& e : graph.entities) {
            CHECK(!e.aliases.empty());
            assigned += e.member_mentions.size();
        }
        CHECK(assigned == total_mentions);
        for (const MemoryRecord& rec : store.records())
            for (const EntityMention& m : rec.entities) CHECK(m.canonical_id.has_value());
    }
}
