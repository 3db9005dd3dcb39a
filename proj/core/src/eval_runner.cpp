#include "memharbor/eval_runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "memharbor/errors.hpp"
#include "memharbor/text_similarity.hpp"

namespace memharbor {

namespace {

std::int64_t derive_now(const MemoryStore& store, const std::string& user_id) {
    std::int64_t now = 0;
    for (std::size_t index : store.user_records(user_id))
        now = std::max(now, store.records()[index].timestamp);
    return now + 600;
}

MetricVector evaluate_query(const EvalQuery& query, const EvalContext& context,
                            SystemVariant variant, const RetrievalEngine& engine) {
    MetricVector m;
    const RuleSet& rules = context.processor.rules();

    std::set<std::string> predicted;
    for (const EntityMention& mention : extract_entities(query.text, rules.extraction))
        predicted.insert(fold_case(mention.surface));
    m.f1 = entity_f1(predicted, query.gold_entities);

    Intent classified = classify_intent(query.text, rules.intents);
    m.intent_accuracy = classified == query.gold_intent ? 1.0 : 0.0;

    QueryOptions options;
    options.now = derive_now(context.store, query.conversation_id);
    options.forced_dimensions = variant_dimensions(variant);
    options.context_markers = {std::string(kConversationMarkerPrefix) + query.conversation_id};

    auto start = std::chrono::steady_clock::now();
    RetrievalResult result =
        engine.retrieve(query.text, query.conversation_id, context.store, nullptr, options);
    auto stop = std::chrono::steady_clock::now();
    m.response_time_seconds = std::chrono::duration<double>(stop - start).count();

    RelevanceMetrics rel = relevance_metrics(result, query);
    m.answer_relevance = rel.answer_relevance;
    m.memory_relevance = rel.memory_relevance;
    m.completeness = rel.completeness;
    m.bleu = bleu(result.response_text, query.gold_answer);
    m.real_tech_usage = context.real_tech_usage;
    m.overall = overall_score(m, variant);
    return m;
}

MetricVector mean_metrics(const std::vector<MetricVector>& values, double real_tech_usage) {
    MetricVector mean;
    if (values.empty()) {
        double nan = std::numeric_limits<double>::quiet_NaN();
        mean = {nan, nan, nan, nan, nan, nan, nan, real_tech_usage, nan};
        return mean;
    }
    for (const MetricVector& v : values) {
        mean.f1 += v.f1;
        mean.intent_accuracy += v.intent_accuracy;
        mean.answer_relevance += v.answer_relevance;
        mean.memory_relevance += v.memory_relevance;
        mean.completeness += v.completeness;
        mean.bleu += v.bleu;
        mean.response_time_seconds += v.response_time_seconds;
        mean.overall += v.overall;
    }
    double n = static_cast<double>(values.size());
    mean.f1 /= n;
    mean.intent_accuracy /= n;
    mean.answer_relevance /= n;
    mean.memory_relevance /= n;
    mean.completeness /= n;
    mean.bleu /= n;
    mean.response_time_seconds /= n;
    mean.overall /= n;
    mean.real_tech_usage = real_tech_usage;
    return mean;
}

std::string fmt(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

} // namespace

EvalReport run_eval(const std::vector<EvalQuery>& queries, const EvalContext& context,
                    const std::vector<SystemVariant>& variants) {
    EvalReport report;
    report.real_tech_usage = context.real_tech_usage;
    RetrievalEngine engine(context.processor, context.weights, context.retrieval);

    for (SystemVariant variant : variants) {
        std::vector<MetricVector> collected;
        collected.reserve(queries.size());
        for (const EvalQuery& query : queries) {
            MetricVector m = evaluate_query(query, context, variant, engine);
            report.per_query.push_back({variant, query.conversation_id, m});
            collected.push_back(m);
        }
        report.rows.push_back(
            {variant, collected.size(), mean_metrics(collected, context.real_tech_usage)});
    }
    return report;
}

EvalReport run_ablation(const std::vector<EvalQuery>& queries, const EvalContext& context) {
    return run_eval(queries, context,
                    std::vector<SystemVariant>(kAllVariants.begin(), kAllVariants.end()));
}

namespace {

void write_metric_cells(const MetricVector& m, std::ostream& out) {
    out << fmt(m.f1) << ',' << fmt(m.intent_accuracy) << ',' << fmt(m.answer_relevance) << ','
        << fmt(m.memory_relevance) << ',' << fmt(m.completeness) << ',' << fmt(m.bleu) << ','
        << fmt(m.response_time_seconds) << ',' << fmt(m.overall);
}

} // namespace

void write_report_csv(const EvalReport& report, std::ostream& out) {
    out << "variant,f1,intent_accuracy,answer_relevance,memory_relevance,completeness,bleu,"
           "response_time,overall\n";
    for (const VariantSummary& row : report.rows) {
        out << to_string(row.variant) << ',';
        write_metric_cells(row.means, out);
        out << '\n';
    }
}

void write_per_query_csv(const EvalReport& report, std::ostream& out) {
    out << "variant,conversation_id,f1,intent_accuracy,answer_relevance,memory_relevance,"
           "completeness,bleu,response_time,overall\n";
    for (const PerQueryMetrics& q : report.per_query) {
        out << to_string(q.variant) << ',' << q.conversation_id << ',';
        write_metric_cells(q.metrics, out);
        out << '\n';
    }
}

void write_summary(const EvalReport& report, std::ostream& out) {
    out << "memharbor evaluation summary\n";
    out << "============================\n\n";
    out << "variants evaluated: " << report.rows.size() << "\n";
    if (!report.rows.empty()) out << "queries per variant: " << report.rows.front().n_queries << "\n";
    out << "real_tech_usage (configured): " << fmt(report.real_tech_usage) << "\n\n";

    std::vector<VariantSummary> ranked = report.rows;
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        double x = a.means.overall, y = b.means.overall;
        if (std::isnan(x)) return false;
        if (std::isnan(y)) return true;
        return x > y;
    });
    out << "variant ranking by mean overall\n";
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        out << "  " << (i + 1) << ". " << to_string(ranked[i].variant) << "  overall="
            << fmt(ranked[i].means.overall) << "  f1=" << fmt(ranked[i].means.f1)
            << "  memory_relevance=" << fmt(ranked[i].means.memory_relevance)
            << "  completeness=" << fmt(ranked[i].means.completeness) << "\n";
    }
    out << "\n";

    out << "overall-score formula check on fixed reference fixtures\n";
    out << "  (weights: f1 0.25, intent 0.20, answer 0.20, memory 0.15, completeness 0.10, "
           "bleu 0.10)\n";
    out << "  system              formula_overall  fixture_overall  deviation\n";
    for (const ReferenceRow& row : reference_rows()) {
        double formula = reference_formula_overall(row);
        double deviation = formula - row.published_overall;
        char line[160];
        std::snprintf(line, sizeof(line), "  %-18s  %.4f           %.3f            %+.4f\n",
                      std::string(row.name).c_str(), formula, row.published_overall, deviation);
        out << line;
    }
    out << "  note: the fixture overall values do not satisfy the weighted-sum formula applied\n"
           "  to their own component metrics; this report recomputes the formula, and the\n"
           "  deviation column flags the difference.\n";
}

void write_report_files(const EvalReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream csv(out_dir / "report.csv", std::ios::binary);
        if (!csv) throw Error("cannot write report.csv under " + out_dir.string());
        write_report_csv(report, csv);
    }
    {
        std::ofstream csv(out_dir / "per_query.csv", std::ios::binary);
        if (!csv) throw Error("cannot write per_query.csv under " + out_dir.string());
        write_per_query_csv(report, csv);
    }
    {
        std::ofstream txt(out_dir / "summary.txt", std::ios::binary);
        if (!txt) throw Error("cannot write summary.txt under " + out_dir.string());
        write_summary(report, txt);
    }
}

} // namespace memharbor
