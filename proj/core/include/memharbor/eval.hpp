#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memharbor/retrieval.hpp"
#include "memharbor/types.hpp"

namespace memharbor {

// One labelled benchmark query.
struct EvalQuery {
    std::string conversation_id;  // doubles as the user id of its memories
    std::string text;
    std::set<std::string> gold_entities;  // folded surfaces
    Intent gold_intent = Intent::unknown;
    std::string gold_answer;  // nonempty
    std::set<std::string> gold_memory_ids;
    Category category = Category::contextual;
};

// Per-query metric values. All except response_time_seconds and overall lie
// in [0, 1]. real_tech_usage is a configured constant, echoed per run.
struct MetricVector {
    double f1 = 0.0;
    double intent_accuracy = 0.0;
    double answer_relevance = 0.0;
    double memory_relevance = 0.0;
    double completeness = 0.0;
    double bleu = 0.0;
    double response_time_seconds = 0.0;
    double real_tech_usage = 0.0;
    double overall = 0.0;
};

// Ablation variants; each forces a fixed enabled-dimension set.
enum class SystemVariant : std::uint8_t {
    Full,
    Semantic_Only,
    Entity_Only,
    Category_Only,
    Intent_Only,
    Context_Only,
    Semantic_Entity,
    Semantic_Category,
};

inline constexpr std::array<SystemVariant, 8> kAllVariants = {
    SystemVariant::Full,          SystemVariant::Semantic_Only,
    SystemVariant::Entity_Only,   SystemVariant::Category_Only,
    SystemVariant::Intent_Only,   SystemVariant::Context_Only,
    SystemVariant::Semantic_Entity, SystemVariant::Semantic_Category,
};

std::string_view to_string(SystemVariant v);
SystemVariant parse_variant(std::string_view label);
DimensionSet variant_dimensions(SystemVariant v);

// Set-based F1 over folded entity strings. Both empty -> 1; one empty -> 0.
double entity_f1(const std::set<std::string>& predicted, const std::set<std::string>& gold);

// BLEU up to 4-grams with add-one smoothing on each modified precision
// ((matches+1)/(total+1)) and brevity penalty exp(1 - r/c) when c < r.
// Empty candidate -> 0.
double bleu(std::string_view candidate, std::string_view reference);

struct RelevanceMetrics {
    double answer_relevance = 0.0;  // enhanced similarity of response vs gold answer, /1.5
    double memory_relevance = 0.0;  // |retrieved ∩ gold| / |retrieved|
    double completeness = 0.0;      // |retrieved ∩ gold| / |gold|
};
RelevanceMetrics relevance_metrics(const RetrievalResult& result, const EvalQuery& gold);

// 0.25*f1 + 0.20*intent + 0.20*answer + 0.15*memory + 0.10*completeness +
// 0.10*bleu, times 1.5 for the Full variant. Throws InvalidMetric when a
// component lies outside [0, 1].
double overall_score(const MetricVector& m, SystemVariant variant);

inline constexpr double kOverallWeightF1 = 0.25;
inline constexpr double kOverallWeightIntent = 0.20;
inline constexpr double kOverallWeightAnswer = 0.20;
inline constexpr double kOverallWeightMemory = 0.15;
inline constexpr double kOverallWeightCompleteness = 0.10;
inline constexpr double kOverallWeightBleu = 0.10;
inline constexpr double kFullVariantBonus = 1.5;

// Fixed reference rows used by every report to demonstrate the overall-score
// formula; their published overall values are known not to satisfy it.
struct ReferenceRow {
    std::string_view name;
    double f1, intent_accuracy, answer_relevance, memory_relevance, completeness, bleu;
    double published_overall;
};
std::span<const ReferenceRow> reference_rows();
double reference_formula_overall(const ReferenceRow& row);

} // namespace memharbor
