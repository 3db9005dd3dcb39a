#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memharbor/entity_graph.hpp"
#include "memharbor/memory_store.hpp"
#include "memharbor/query.hpp"
#include "memharbor/scorers.hpp"
#include "memharbor/types.hpp"
#include "memharbor/weights.hpp"

namespace memharbor {

struct RetrievalConfig {
    std::size_t top_k = 5;
    // minimum total to include; <= 0 disables filtering (totals can be
    // negative when semantic cosine is negative)
    double threshold = 0.0;
};

struct QueryOptions {
    // reference time for the temporal dimension; defaults to the newest
    // memory timestamp of the user so repeated runs are byte-identical
    std::optional<std::int64_t> now;
    std::optional<DimensionSet> forced_dimensions;  // overrides strategy selection
    std::vector<std::string> context_markers;
};

struct ScoredMemory {
    const MemoryRecord* memory = nullptr;
    std::map<Dimension, double> per_dimension;  // keys = enabled dimensions
    double total = 0.0;
};

struct RetrievalResult {
    std::vector<ScoredMemory> ranked;  // descending total; ties: newer, then id
    DimensionSet strategy_used;
    std::size_t variants_used = 0;  // in [1, 6]
    std::string response_text;
};

inline constexpr std::string_view kNoMemoriesSentinel = "no memories found";

// Deterministic answer template: the top memory's text, then up to two
// supporting texts in rank order. Empty input yields the sentinel.
std::string compose_response(std::span<const ScoredMemory> top, const ProcessedQuery& query);

// Pipeline of process -> expand -> score -> rank -> compose. Scans every
// memory of the user; variant scores merge per memory by maximum.
class RetrievalEngine {
public:
    RetrievalEngine(const QueryProcessor& processor, DimensionWeights weights,
                    RetrievalConfig config);

    // `graph` is accepted for cross-memory integration hooks; ranking itself
    // is fully defined by the dimension scores and does not consume it.
    RetrievalResult retrieve(std::string_view raw_query, const std::string& user_id,
                             const MemoryStore& store, const EntityGraph* graph = nullptr,
                             const QueryOptions& options = {}) const;

    const DimensionWeights& weights() const { return weights_; }
    const RetrievalConfig& config() const { return config_; }

private:
    const QueryProcessor& processor_;
    DimensionWeights weights_;
    RetrievalConfig config_;
};

} // namespace memharbor
