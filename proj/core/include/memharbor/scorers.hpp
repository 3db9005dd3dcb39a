#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <set>
#include <string_view>

#include "memharbor/types.hpp"
#include "memharbor/weights.hpp"

namespace memharbor {

struct TokenizedText;

// Per-dimension similarity scores. Each score already carries its dimension
// weight; aggregate() applies no second weighting.

// cosine(q, m) * w_semantic; 0 if either vector is zero. Cosine is clamped
// to [-1, 1] against rounding. Throws DimensionMismatch on length mismatch.
double semantic_score(std::span<const double> q_vec, std::span<const double> m_vec,
                      const DimensionWeights& w);

// min(cap, sum over query entities of best-match string similarity * 0.4).
// Best match = memory entity with maximal sequence_ratio over case-folded
// surfaces, ties broken by earliest memory-entity position.
double entity_score(std::span<const EntityMention> q_entities,
                    std::span<const EntityMention> m_entities, const DimensionWeights& w);

// min(cap, 0.3 * |shared categories|).
double category_score(const std::set<Category>& q_cats, const std::set<Category>& m_cats,
                      const DimensionWeights& w);

// 0.3 if intents are equal and neither is unknown; else 0.
double intent_score(Intent q_intent, Intent m_intent, const DimensionWeights& w);

// exp(-alpha * dt_days) * w_temporal. Throws FutureMemory when now < m_time.
double temporal_score(std::int64_t now, std::int64_t m_time, const DimensionWeights& w);

// w_context * max(marker Jaccard, enhanced_text_similarity / 1.5).
// Two empty marker sets contribute 0 (absence of evidence, not agreement).
double context_score(std::span<const std::string> q_markers,
                     std::span<const std::string> m_markers, std::string_view q_text,
                     std::string_view m_text, const DimensionWeights& w);

// Pre-folded variant for the scoring hot path (raw fields already folded).
double context_score_folded(std::span<const std::string> q_markers,
                            std::span<const std::string> m_markers, const TokenizedText& q_text,
                            const TokenizedText& m_text, const DimensionWeights& w);

// (sum of per-dimension scores) * B, where B = multi_bonus when more than one
// dimension is enabled and 1.0 otherwise. Keys must be a subset of `enabled`.
// Throws NoDimensions when `enabled` is empty.
double aggregate(const std::map<Dimension, double>& per_dimension, DimensionSet enabled,
                 const DimensionWeights& w);

} // namespace memharbor
