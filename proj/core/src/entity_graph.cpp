#include "memharbor/entity_graph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "memharbor/errors.hpp"
#include "memharbor/text_similarity.hpp"

namespace memharbor {

const CanonicalEntity* EntityGraph::find(std::string_view canonical_id) const {
    auto it = std::lower_bound(entities.begin(), entities.end(), canonical_id,
                               [](const CanonicalEntity& e, std::string_view id) {
                                   return e.canonical_id < id;
                               });
    if (it == entities.end() || it->canonical_id != canonical_id) return nullptr;
    return &*it;
}

std::vector<const CanonicalEntity*> EntityGraph::find_by_alias(
    std::string_view folded_surface) const {
    std::vector<const CanonicalEntity*> out;
    for (const CanonicalEntity& e : entities)
        if (e.aliases.count(std::string(folded_surface))) out.push_back(&e);
    return out;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

std::vector<std::vector<std::string>> cluster_surfaces(
    std::span<const std::string> folded_surfaces, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidThreshold(threshold);

    // identical surfaces always link (ratio 1.0 >= threshold), so cluster the
    // unique surfaces and fan back out
    std::vector<std::string> unique(folded_surfaces.begin(), folded_surfaces.end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    UnionFind uf(unique.size());
    for (std::size_t i = 0; i < unique.size(); ++i)
        for (std::size_t j = i + 1; j < unique.size(); ++j)
            if (sequence_ratio(unique[i], unique[j]) >= threshold) uf.unite(i, j);

    std::map<std::size_t, std::vector<std::string>> groups;
    for (std::size_t i = 0; i < unique.size(); ++i) groups[uf.find(i)].push_back(unique[i]);

    std::vector<std::vector<std::string>> clusters;
    clusters.reserve(groups.size());
    for (auto& [_, members] : groups) clusters.push_back(std::move(members));
    // deterministic order: by smallest member
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return clusters;
}

EntityGraph resolve(MemoryStore& store, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidThreshold(threshold);

    struct MentionRef {
        std::size_t record_index, mention_index;
        std::string folded;
    };
    std::map<EntityType, std::vector<MentionRef>> by_type;
    for (std::size_t r = 0; r < store.records().size(); ++r) {
        const MemoryRecord& rec = store.records()[r];
        for (std::size_t m = 0; m < rec.entities.size(); ++m)
            by_type[rec.entities[m].type].push_back({r, m, fold_case(rec.entities[m].surface)});
    }

    EntityGraph graph;
    for (auto& [type, mentions] : by_type) {
        std::vector<std::string> surfaces;
        surfaces.reserve(mentions.size());
        for (const MentionRef& m : mentions) surfaces.push_back(m.folded);
        for (auto& members : cluster_surfaces(surfaces, threshold)) {
            CanonicalEntity entity;
            entity.type = type;
            entity.aliases.insert(members.begin(), members.end());
            entity.canonical_id =
                std::string(to_string(type)) + ":" + *entity.aliases.begin();
            graph.entities.push_back(std::move(entity));
        }
    }
    std::sort(graph.entities.begin(), graph.entities.end(),
              [](const CanonicalEntity& a, const CanonicalEntity& b) {
                  return a.canonical_id < b.canonical_id;
              });

    // back-fill mention canonical ids and member lists
    std::map<std::pair<EntityType, std::string>, std::size_t> alias_to_entity;
    for (std::size_t e = 0; e < graph.entities.size(); ++e)
        for (const std::string& alias : graph.entities[e].aliases)
            alias_to_entity[{graph.entities[e].type, alias}] = e;

    for (const auto& [type, mentions] : by_type) {
        for (const MentionRef& m : mentions) {
            std::size_t e = alias_to_entity.at({type, m.folded});
            const std::string& id = store.records()[m.record_index].id;
            graph.entities[e].member_mentions.emplace_back(id, m.mention_index);
            store.annotate_canonical(m.record_index, m.mention_index,
                                     graph.entities[e].canonical_id);
        }
    }
    for (CanonicalEntity& e : graph.entities) std::sort(e.member_mentions.begin(),
                                                        e.member_mentions.end());
    return graph;
}

void build_edges(EntityGraph& graph, const MemoryStore& store) {
    graph.edges.clear();
    for (const MemoryRecord& rec : store.records()) {
        std::set<std::string> ids;
        for (const EntityMention& m : rec.entities) {
            if (!m.canonical_id) throw UnresolvedMention(m.surface);
            ids.insert(*m.canonical_id);
        }
        for (auto a = ids.begin(); a != ids.end(); ++a) {
            auto b = a;
            for (++b; b != ids.end(); ++b) graph.edges[{*a, *b}] += 1;
        }
    }
}

EntityGraph build_graph(MemoryStore& store, double threshold) {
    EntityGraph graph = resolve(store, threshold);
    build_edges(graph, store);
    return graph;
}

std::set<std::string> related_memories(std::string_view surface, const EntityGraph& graph,
                                       const MemoryStore& store, int hops) {
    if (hops != 0 && hops != 1) throw Error("hops must be 0 or 1");
    (void)store;
    std::string folded = fold_case(surface);
    std::vector<const CanonicalEntity*> seeds = graph.find_by_alias(folded);
    if (seeds.empty()) throw NotFound("entity surface: " + std::string(surface));

    std::set<std::string> entity_ids;
    for (const CanonicalEntity* e : seeds) entity_ids.insert(e->canonical_id);
    if (hops == 1) {
        std::set<std::string> neighbors;
        for (const auto& [key, count] : graph.edges) {
            (void)count;
            if (entity_ids.count(key.first)) neighbors.insert(key.second);
            if (entity_ids.count(key.second)) neighbors.insert(key.first);
        }
        entity_ids.insert(neighbors.begin(), neighbors.end());
    }

    std::set<std::string> memory_ids;
    for (const std::string& id : entity_ids) {
        const CanonicalEntity* e = graph.find(id);
        if (!e) continue;
        for (const auto& [memory_id, _] : e->member_mentions) memory_ids.insert(memory_id);
    }
    return memory_ids;
}

void export_graph(const EntityGraph& graph, std::ostream& out) {
    for (const CanonicalEntity& e : graph.entities) {
        out << "E\t" << e.canonical_id << '\t' << to_string(e.type) << '\t';
        bool first = true;
        for (const std::string& alias : e.aliases) {
            if (!first) out << '|';
            out << alias;
            first = false;
        }
        out << '\n';
    }
    for (const auto& [key, count] : graph.edges)
        out << "R\t" << key.first << '\t' << key.second << '\t' << count << '\n';
}

} // namespace memharbor
