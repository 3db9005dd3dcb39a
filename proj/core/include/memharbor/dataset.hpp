#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "memharbor/embedding.hpp"
#include "memharbor/eval.hpp"
#include "memharbor/memory_store.hpp"
#include "memharbor/query.hpp"

namespace memharbor {

// Context-marker conventions shared by the generator and the eval runner.
inline constexpr std::string_view kConversationMarkerPrefix = "conv:";
inline constexpr std::string_view kSessionMarkerPrefix = "sess:";

struct GeneratedDataset {
    MemoryStore store;
    std::vector<EvalQuery> queries;  // one per conversation
};

// Seeded synthetic conversations. Per conversation: 5..15 turns (mean 8.5),
// one labelled query whose category follows the fixed 25/20/25/20/10 split
// over personal/professional/preferences/goals/contextual. Each turn becomes
// one memory record, analyzed with the provided rules and embedder.
GeneratedDataset generate_dataset(std::uint64_t seed, std::size_t n_conversations,
                                  const RuleSet& rules, const EmbeddingProvider& provider);

// Line-delimited query records, fields in fixed order.
void save_queries(const std::vector<EvalQuery>& queries, std::ostream& out);
void save_queries_file(const std::vector<EvalQuery>& queries, const std::filesystem::path& path);
std::vector<EvalQuery> load_queries(std::istream& in);
std::vector<EvalQuery> load_queries_file(const std::filesystem::path& path);

} // namespace memharbor
