#include "memharbor/retrieval.hpp"

#include <algorithm>

#include "memharbor/errors.hpp"
#include "memharbor/text_similarity.hpp"

namespace memharbor {

std::string compose_response(std::span<const ScoredMemory> top, const ProcessedQuery& query) {
    (void)query;
    if (top.empty()) return std::string(kNoMemoriesSentinel);
    std::string out = "Recalled: " + top[0].memory->text;
    if (top.size() > 1) {
        out += " Related: " + top[1].memory->text;
        if (top.size() > 2) out += " | " + top[2].memory->text;
    }
    return out;
}

RetrievalEngine::RetrievalEngine(const QueryProcessor& processor, DimensionWeights weights,
                                 RetrievalConfig config)
    : processor_(processor), weights_(std::move(weights)), config_(config) {
    weights_.validate();
}

namespace {

struct VariantData {
    ProcessedQuery query;
    TokenizedText folded_text;
    std::vector<EntityMention> folded_entities;
};

VariantData make_variant_data(ProcessedQuery q) {
    VariantData v;
    v.folded_text = TokenizedText::from(fold_case(q.text));
    v.folded_entities.reserve(q.entities.size());
    for (const EntityMention& m : q.entities)
        v.folded_entities.push_back({fold_case(m.surface), m.type, {}});
    v.query = std::move(q);
    return v;
}

} // namespace

RetrievalResult RetrievalEngine::retrieve(std::string_view raw_query, const std::string& user_id,
                                          const MemoryStore& store, const EntityGraph* graph,
                                          const QueryOptions& options) const {
    (void)graph;
    std::span<const std::size_t> candidates = store.user_records(user_id);

    std::int64_t now = 0;
    if (options.now) {
        now = *options.now;
    } else {
        for (std::size_t index : candidates)
            now = std::max(now, store.records()[index].timestamp);
    }

    ProcessedQuery query =
        processor_.process(raw_query, now, options.context_markers, options.forced_dimensions);
    DimensionSet enabled = query.enabled_dimensions;

    std::vector<ProcessedQuery> expanded = processor_.expand(query);
    std::vector<VariantData> variants;
    variants.reserve(expanded.size());
    for (ProcessedQuery& q : expanded) variants.push_back(make_variant_data(std::move(q)));

    // memory-side folds are shared across variants
    std::vector<TokenizedText> memory_text(candidates.size());
    std::vector<std::vector<EntityMention>> memory_entities(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const MemoryRecord& rec = store.records()[candidates[c]];
        memory_text[c] = TokenizedText::from(fold_case(rec.text));
        memory_entities[c].reserve(rec.entities.size());
        for (const EntityMention& m : rec.entities)
            memory_entities[c].push_back({fold_case(m.surface), m.type, {}});
    }

    std::vector<ScoredMemory> scored;
    scored.reserve(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const MemoryRecord& rec = store.records()[candidates[c]];
        std::map<Dimension, double> best_scores;
        double best_total = 0.0;
        bool first = true;
        for (const VariantData& v : variants) {
            std::map<Dimension, double> scores;
            if (enabled.contains(Dimension::semantic))
                scores[Dimension::semantic] =
                    semantic_score(v.query.embedding, rec.embedding, weights_);
            if (enabled.contains(Dimension::entity))
                scores[Dimension::entity] =
                    entity_score(v.folded_entities, memory_entities[c], weights_);
            if (enabled.contains(Dimension::category))
                scores[Dimension::category] =
                    category_score(v.query.categories, rec.categories, weights_);
            if (enabled.contains(Dimension::intent))
                scores[Dimension::intent] = intent_score(v.query.intent, rec.intent, weights_);
            if (enabled.contains(Dimension::context))
                scores[Dimension::context] =
                    context_score_folded(v.query.context_markers, rec.context_markers,
                                         v.folded_text, memory_text[c], weights_);
            if (enabled.contains(Dimension::temporal))
                scores[Dimension::temporal] =
                    temporal_score(v.query.timestamp, rec.timestamp, weights_);
            double total = aggregate(scores, enabled, weights_);
            if (first || total > best_total) {
                best_total = total;
                best_scores = std::move(scores);
                first = false;
            }
        }
        scored.push_back({&rec, std::move(best_scores), best_total});
    }

    std::sort(scored.begin(), scored.end(), [](const ScoredMemory& a, const ScoredMemory& b) {
        if (a.total != b.total) return a.total > b.total;
        if (a.memory->timestamp != b.memory->timestamp)
            return a.memory->timestamp > b.memory->timestamp;
        return a.memory->id < b.memory->id;
    });

    if (config_.threshold > 0.0) {
        std::erase_if(scored,
                      [this](const ScoredMemory& s) { return s.total < config_.threshold; });
    }
    if (scored.size() > config_.top_k) scored.resize(config_.top_k);

    RetrievalResult result;
    result.strategy_used = enabled;
    result.variants_used = variants.size();
    result.response_text = compose_response(scored, query);
    result.ranked = std::move(scored);
    return result;
}

} // namespace memharbor
