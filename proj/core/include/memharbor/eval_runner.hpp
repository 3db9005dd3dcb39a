#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "memharbor/dataset.hpp"
#include "memharbor/eval.hpp"
#include "memharbor/retrieval.hpp"

namespace memharbor {

struct PerQueryMetrics {
    SystemVariant variant = SystemVariant::Full;
    std::string conversation_id;
    MetricVector metrics;
};

struct VariantSummary {
    SystemVariant variant = SystemVariant::Full;
    std::size_t n_queries = 0;
    MetricVector means;  // NaN components when n_queries == 0
};

struct EvalReport {
    std::vector<VariantSummary> rows;
    std::vector<PerQueryMetrics> per_query;
    double real_tech_usage = 0.0;
};

struct EvalContext {
    const MemoryStore& store;
    const QueryProcessor& processor;
    DimensionWeights weights;
    RetrievalConfig retrieval;
    double real_tech_usage = 0.0;  // configured constant, echoed into metrics
};

// Runs every query against each requested variant with its forced dimension
// set. Retrieval reference time derives from the newest memory of the query's
// conversation, so output is reproducible; response_time is measured wall
// clock and is the only nondeterministic value.
EvalReport run_eval(const std::vector<EvalQuery>& queries, const EvalContext& context,
                    const std::vector<SystemVariant>& variants);

// All eight variants.
EvalReport run_ablation(const std::vector<EvalQuery>& queries, const EvalContext& context);

// CSV of per-variant means; column order fixed:
// variant,f1,intent_accuracy,answer_relevance,memory_relevance,completeness,
// bleu,response_time,overall
void write_report_csv(const EvalReport& report, std::ostream& out);
// Same columns per (variant, query) pair, conversation_id inserted after variant.
void write_per_query_csv(const EvalReport& report, std::ostream& out);
// Human-readable ranking plus the fixed-formula reference check.
void write_summary(const EvalReport& report, std::ostream& out);

void write_report_files(const EvalReport& report, const std::filesystem::path& out_dir);

} // namespace memharbor
