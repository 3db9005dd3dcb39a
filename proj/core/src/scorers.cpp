#include "memharbor/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "memharbor/errors.hpp"
#include "memharbor/text_similarity.hpp"

namespace memharbor {

double semantic_score(std::span<const double> q_vec, std::span<const double> m_vec,
                      const DimensionWeights& w) {
    if (q_vec.size() != m_vec.size()) throw DimensionMismatch(q_vec.size(), m_vec.size());
    double dot = 0.0, qq = 0.0, mm = 0.0;
    for (std::size_t i = 0; i < q_vec.size(); ++i) {
        dot += q_vec[i] * m_vec[i];
        qq += q_vec[i] * q_vec[i];
        mm += m_vec[i] * m_vec[i];
    }
    if (qq == 0.0 || mm == 0.0) return 0.0;
    double cosine = dot / (std::sqrt(qq) * std::sqrt(mm));
    cosine = std::clamp(cosine, -1.0, 1.0);
    return cosine * w.semantic;
}

double entity_score(std::span<const EntityMention> q_entities,
                    std::span<const EntityMention> m_entities, const DimensionWeights& w) {
    if (q_entities.empty() || m_entities.empty()) return 0.0;
    std::vector<std::string> folded_m;
    folded_m.reserve(m_entities.size());
    for (const EntityMention& m : m_entities) folded_m.push_back(fold_case(m.surface));

    double sum = 0.0;
    for (const EntityMention& q : q_entities) {
        std::string folded_q = fold_case(q.surface);
        double best = 0.0;
        for (const std::string& m : folded_m) {
            double r = sequence_ratio(folded_q, m);
            if (r > best) best = r;  // strict: ties keep the earliest entity
        }
        sum += best * w.per_entity_weight;
    }
    return std::min(w.entity_cap, sum);
}

double category_score(const std::set<Category>& q_cats, const std::set<Category>& m_cats,
                      const DimensionWeights& w) {
    std::size_t shared = 0;
    for (Category c : q_cats)
        if (m_cats.count(c)) ++shared;
    return std::min(w.category_cap, w.per_category_credit * static_cast<double>(shared));
}

double intent_score(Intent q_intent, Intent m_intent, const DimensionWeights& w) {
    if (q_intent == Intent::unknown || m_intent == Intent::unknown) return 0.0;
    return q_intent == m_intent ? w.intent : 0.0;
}

double temporal_score(std::int64_t now, std::int64_t m_time, const DimensionWeights& w) {
    if (now < m_time) throw FutureMemory();
    double dt_days = static_cast<double>(now - m_time) / 86400.0;
    return std::exp(-w.alpha * dt_days) * w.temporal;
}

namespace {

double marker_jaccard(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() && b.empty()) return 0.0;  // no marker evidence on either side
    std::set<std::string_view> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::size_t inter = 0;
    for (std::string_view m : sa)
        if (sb.count(m)) ++inter;
    std::size_t uni = sa.size() + sb.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace

double context_score(std::span<const std::string> q_markers,
                     std::span<const std::string> m_markers, std::string_view q_text,
                     std::string_view m_text, const DimensionWeights& w) {
    double markers = marker_jaccard(q_markers, m_markers);
    double text = enhanced_text_similarity(q_text, m_text) / 1.5;
    return w.context * std::max(markers, text);
}

double context_score_folded(std::span<const std::string> q_markers,
                            std::span<const std::string> m_markers, const TokenizedText& q_text,
                            const TokenizedText& m_text, const DimensionWeights& w) {
    double markers = marker_jaccard(q_markers, m_markers);
    double text = enhanced_text_similarity_folded(q_text, m_text) / 1.5;
    return w.context * std::max(markers, text);
}

double aggregate(const std::map<Dimension, double>& per_dimension, DimensionSet enabled,
                 const DimensionWeights& w) {
    if (enabled.empty()) throw NoDimensions();
    double sum = 0.0;
    for (const auto& [dim, score] : per_dimension) {
        if (!enabled.contains(dim))
            throw Error("per-dimension score present for disabled dimension: " +
                        std::string(to_string(dim)));
        sum += score;
    }
    double bonus = enabled.size() > 1 ? w.multi_bonus : 1.0;
    return sum * bonus;
}

} // namespace memharbor
