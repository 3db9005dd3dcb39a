#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memharbor/memory_store.hpp"
#include "memharbor/types.hpp"

namespace memharbor {

struct CanonicalEntity {
    std::string canonical_id;  // "<type>:<lexicographically smallest alias>"
    EntityType type = EntityType::concept_;
    std::set<std::string> aliases;  // folded surfaces, nonempty
    std::vector<std::pair<std::string, std::size_t>> member_mentions;  // (memory id, mention index)
};

struct EntityGraph {
    std::vector<CanonicalEntity> entities;  // sorted by canonical_id
    // undirected co-occurrence counts, key ids in ascending order
    std::map<std::pair<std::string, std::string>, std::size_t> edges;

    const CanonicalEntity* find(std::string_view canonical_id) const;
    // all entities (any type) holding this folded surface as an alias
    std::vector<const CanonicalEntity*> find_by_alias(std::string_view folded_surface) const;
};

// Single-linkage clusters over same-type surfaces: two surfaces link when
// sequence_ratio of their folded forms >= threshold. Returns clusters of
// folded surfaces keyed by type. Threshold must be in (0, 1].
std::vector<std::vector<std::string>> cluster_surfaces(
    std::span<const std::string> folded_surfaces, double threshold);

// Clusters every mention in the store into canonical entities and back-fills
// each mention's canonical_id. Throws InvalidThreshold.
EntityGraph resolve(MemoryStore& store, double threshold);

// For each memory, increments the edge count of every unordered pair of
// distinct canonical entities mentioned in it. Throws UnresolvedMention.
void build_edges(EntityGraph& graph, const MemoryStore& store);

EntityGraph build_graph(MemoryStore& store, double threshold);

// hops = 0: memories mentioning the entity resolved from `surface`;
// hops = 1: additionally memories mentioning any direct neighbor.
// Throws NotFound when the surface resolves to no entity.
std::set<std::string> related_memories(std::string_view surface, const EntityGraph& graph,
                                       const MemoryStore& store, int hops);

// `E<TAB>id<TAB>type<TAB>alias1|alias2` then `R<TAB>idA<TAB>idB<TAB>count`.
void export_graph(const EntityGraph& graph, std::ostream& out);

} // namespace memharbor
