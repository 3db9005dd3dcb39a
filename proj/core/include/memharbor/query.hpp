#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memharbor/embedding.hpp"
#include "memharbor/types.hpp"

namespace memharbor {

// A query after analysis, ready for scoring.
struct ProcessedQuery {
    std::string text;
    std::vector<double> embedding;
    std::vector<EntityMention> entities;
    std::set<Category> categories;
    Intent intent = Intent::unknown;
    DimensionSet enabled_dimensions;
    std::vector<std::string> context_markers;
    std::int64_t timestamp = 0;
};

// Deterministic extraction rules: gazetteers, date/time patterns, and
// capitalization heuristics for person/organization/location.
struct ExtractionRuleSet {
    std::map<EntityType, std::set<std::string>> gazetteers;  // lowercase surfaces
    struct Pattern {
        EntityType type;
        std::string regex;  // ECMAScript, matched against the folded text
    };
    std::vector<Pattern> patterns;
    bool case_heuristics = true;

    // `type<TAB>surface` per line. Built-in date/time patterns are attached.
    static ExtractionRuleSet load(const std::filesystem::path& gazetteer_file);
    static std::vector<Pattern> builtin_patterns();
};

// `label<TAB>keyword-phrase` per line; a phrase matches when its token
// sequence occurs contiguously in the text's token sequence.
struct IntentKeywordTable {
    std::map<Intent, std::vector<std::string>> phrases;
    static IntentKeywordTable load(const std::filesystem::path& path);
};

struct CategoryKeywordTable {
    std::map<Category, std::vector<std::string>> phrases;
    static CategoryKeywordTable load(const std::filesystem::path& path);
};

// `word<TAB>syn1,syn2,...` per line.
struct SynonymTable {
    std::map<std::string, std::set<std::string>> by_word;
    static SynonymTable load(const std::filesystem::path& path);
};

// Category -> dimension subset, plus a nonempty default.
struct StrategyTable {
    std::map<Category, DimensionSet> by_category;
    DimensionSet default_set = DimensionSet::all();
    static StrategyTable load(const std::filesystem::path& path);
};

// The five rule files of one rules directory.
struct RuleSet {
    ExtractionRuleSet extraction;
    IntentKeywordTable intents;
    CategoryKeywordTable categories;
    SynonymTable synonyms;
    StrategyTable strategy;

    static RuleSet load_dir(const std::filesystem::path& dir);
};

// Position-ordered, non-overlapping mentions; each token claimed by at most
// one mention, longest match first, then leftmost.
std::vector<EntityMention> extract_entities(std::string_view text, const ExtractionRuleSet& rules);

// Keyword classification; `unknown` when nothing fires. Ties resolved by the
// fixed priority: information_seeking > preference_expression > goal_setting >
// contextual_clarification > social_interaction.
Intent classify_intent(std::string_view text, const IntentKeywordTable& table);

// Multi-label keyword classification; possibly empty.
std::set<Category> classify_categories(std::string_view text, const CategoryKeywordTable& table);

// Union of the table rows for the query's categories; the default set when
// the query has none. Never empty.
DimensionSet select_strategy(const ProcessedQuery& query, const StrategyTable& table);

// Full analysis pipeline plus synonym expansion.
class QueryProcessor {
public:
    QueryProcessor(const RuleSet& rules, const EmbeddingProvider& provider);

    ProcessedQuery process(std::string_view text, std::int64_t now,
                           std::span<const std::string> context_markers = {},
                           std::optional<DimensionSet> forced_dimensions = {}) const;

    // Original first, then one re-analyzed variant per applicable synonym
    // substitution (at most 5), ordered by word position then synonym.
    // Variants inherit the original's enabled dimensions and timestamp.
    std::vector<ProcessedQuery> expand(const ProcessedQuery& query) const;

    const RuleSet& rules() const { return rules_; }

private:
    const RuleSet& rules_;
    const EmbeddingProvider& provider_;
};

} // namespace memharbor
