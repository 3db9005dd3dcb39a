#include "memharbor/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "memharbor/errors.hpp"
#include "memharbor/text_similarity.hpp"

namespace memharbor {

std::string_view to_string(SystemVariant v) {
    switch (v) {
        case SystemVariant::Full: return "Full";
        case SystemVariant::Semantic_Only: return "Semantic_Only";
        case SystemVariant::Entity_Only: return "Entity_Only";
        case SystemVariant::Category_Only: return "Category_Only";
        case SystemVariant::Intent_Only: return "Intent_Only";
        case SystemVariant::Context_Only: return "Context_Only";
        case SystemVariant::Semantic_Entity: return "Semantic_Entity";
        case SystemVariant::Semantic_Category: return "Semantic_Category";
    }
    return "?";
}

SystemVariant parse_variant(std::string_view label) {
    for (SystemVariant v : kAllVariants)
        if (to_string(v) == label) return v;
    throw Error("unknown system variant: " + std::string(label));
}

DimensionSet variant_dimensions(SystemVariant v) {
    switch (v) {
        case SystemVariant::Full: return DimensionSet::all();
        case SystemVariant::Semantic_Only: return DimensionSet::of({Dimension::semantic});
        case SystemVariant::Entity_Only: return DimensionSet::of({Dimension::entity});
        case SystemVariant::Category_Only: return DimensionSet::of({Dimension::category});
        case SystemVariant::Intent_Only: return DimensionSet::of({Dimension::intent});
        case SystemVariant::Context_Only: return DimensionSet::of({Dimension::context});
        case SystemVariant::Semantic_Entity:
            return DimensionSet::of({Dimension::semantic, Dimension::entity});
        case SystemVariant::Semantic_Category:
            return DimensionSet::of({Dimension::semantic, Dimension::category});
    }
    return DimensionSet::all();
}

double entity_f1(const std::set<std::string>& predicted, const std::set<std::string>& gold) {
    if (predicted.empty() && gold.empty()) return 1.0;
    if (predicted.empty() || gold.empty()) return 0.0;
    std::size_t hits = 0;
    for (const std::string& p : predicted)
        if (gold.count(p)) ++hits;
    if (hits == 0) return 0.0;
    double precision = static_cast<double>(hits) / static_cast<double>(predicted.size());
    double recall = static_cast<double>(hits) / static_cast<double>(gold.size());
    return 2.0 * precision * recall / (precision + recall);
}

double bleu(std::string_view candidate, std::string_view reference) {
    std::vector<std::string> cand = TokenizedText::from(candidate).words;
    std::vector<std::string> ref = TokenizedText::from(reference).words;
    if (cand.empty()) return 0.0;

    double log_sum = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        std::map<std::vector<std::string>, std::size_t> ref_counts;
        if (ref.size() >= n)
            for (std::size_t i = 0; i + n <= ref.size(); ++i)
                ref_counts[{ref.begin() + i, ref.begin() + i + n}] += 1;

        std::size_t total = cand.size() >= n ? cand.size() - n + 1 : 0;
        std::map<std::vector<std::string>, std::size_t> cand_counts;
        for (std::size_t i = 0; i + n <= cand.size(); ++i)
            cand_counts[{cand.begin() + i, cand.begin() + i + n}] += 1;
        std::size_t matched = 0;
        for (const auto& [gram, count] : cand_counts) {
            auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) matched += std::min(count, it->second);
        }
        double p = (static_cast<double>(matched) + 1.0) / (static_cast<double>(total) + 1.0);
        log_sum += 0.25 * std::log(p);
    }

    double bp = 1.0;
    if (cand.size() < ref.size())
        bp = std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(cand.size()));
    return bp * std::exp(log_sum);
}

RelevanceMetrics relevance_metrics(const RetrievalResult& result, const EvalQuery& gold) {
    RelevanceMetrics m;
    m.answer_relevance =
        std::clamp(enhanced_text_similarity(result.response_text, gold.gold_answer) / 1.5, 0.0, 1.0);

    std::size_t hits = 0;
    for (const ScoredMemory& s : result.ranked)
        if (gold.gold_memory_ids.count(s.memory->id)) ++hits;
    m.memory_relevance = result.ranked.empty()
                             ? 0.0
                             : static_cast<double>(hits) / static_cast<double>(result.ranked.size());
    m.completeness = gold.gold_memory_ids.empty()
                         ? 0.0
                         : static_cast<double>(hits) /
                               static_cast<double>(gold.gold_memory_ids.size());
    return m;
}

double overall_score(const MetricVector& m, SystemVariant variant) {
    auto check = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            throw InvalidMetric(std::string(name) + " = " + std::to_string(v));
    };
    check(m.f1, "f1");
    check(m.intent_accuracy, "intent_accuracy");
    check(m.answer_relevance, "answer_relevance");
    check(m.memory_relevance, "memory_relevance");
    check(m.completeness, "completeness");
    check(m.bleu, "bleu");

    double weighted = kOverallWeightF1 * m.f1 + kOverallWeightIntent * m.intent_accuracy +
                      kOverallWeightAnswer * m.answer_relevance +
                      kOverallWeightMemory * m.memory_relevance +
                      kOverallWeightCompleteness * m.completeness + kOverallWeightBleu * m.bleu;
    double bonus = variant == SystemVariant::Full ? kFullVariantBonus : 1.0;
    return weighted * bonus;
}

std::span<const ReferenceRow> reference_rows() {
    static const ReferenceRow rows[] = {
        {"reference-prod", 1.000, 0.167, 1.000, 1.000, 1.000, 0.800, 0.792},
        {"reference-sim", 0.667, 0.200, 0.200, 0.468, 0.200, 0.200, 0.314},
        {"reference-ner-rag", 0.500, 0.133, 0.072, 0.333, 0.333, 0.058, 0.207},
    };
    return rows;
}

double reference_formula_overall(const ReferenceRow& row) {
    return kOverallWeightF1 * row.f1 + kOverallWeightIntent * row.intent_accuracy +
           kOverallWeightAnswer * row.answer_relevance +
           kOverallWeightMemory * row.memory_relevance +
           kOverallWeightCompleteness * row.completeness + kOverallWeightBleu * row.bleu;
}

} // namespace memharbor
