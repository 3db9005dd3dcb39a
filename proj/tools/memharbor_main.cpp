#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "memharbor/dataset.hpp"
#include "memharbor/entity_graph.hpp"
#include "memharbor/errors.hpp"
#include "memharbor/eval_runner.hpp"
#include "memharbor/memory_store.hpp"
#include "memharbor/retrieval.hpp"
#include "memharbor/weights.hpp"
#include "profile.hpp"

namespace {

using namespace memharbor;
using cli::RunProfile;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

std::string require(const std::string& value, const char* what) {
    if (value.empty())
        throw Error(std::string(what) + " required (flag or MEMHARBOR_CONFIG profile)");
    return value;
}

DimensionWeights load_weights(const RunProfile& profile) {
    if (profile.weights_file.empty()) return {};
    return DimensionWeights::from_file(profile.weights_file);
}

int run_gen_dataset(const RunProfile& profile, std::size_t n, const std::string& out_dir) {
    RuleSet rules = RuleSet::load_dir(require(profile.rules_dir, "rules directory"));
    auto provider = make_provider(profile.embedding);
    GeneratedDataset dataset = generate_dataset(profile.seed, n, rules, *provider);

    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    save_queries_file(dataset.queries, dir / "queries.jsonl");
    save_store_file(dataset.store, dir / "memories.store");
    std::cout << "wrote " << dataset.queries.size() << " queries and " << dataset.store.size()
              << " memories under " << dir.string() << "\n";
    return kExitOk;
}

void print_result_text(const RetrievalResult& result) {
    std::cout << "strategy: " << to_string(result.strategy_used) << "\n";
    std::cout << "variants: " << result.variants_used << "\n";
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
        const ScoredMemory& s = result.ranked[i];
        char total[32];
        std::snprintf(total, sizeof(total), "%.6f", s.total);
        std::cout << (i + 1) << ". id=" << s.memory->id << " total=" << total;
        for (const auto& [dim, score] : s.per_dimension) {
            char cell[32];
            std::snprintf(cell, sizeof(cell), "%.6f", score);
            std::cout << ' ' << to_string(dim) << '=' << cell;
        }
        std::cout << "\n";
    }
    std::cout << "response: " << result.response_text << "\n";
}

void print_result_json(const RetrievalResult& result) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json dims = nlohmann::ordered_json::array();
    for (Dimension d : kAllDimensions)
        if (result.strategy_used.contains(d)) dims.push_back(to_string(d));
    j["strategy_used"] = std::move(dims);
    j["variants_used"] = result.variants_used;
    nlohmann::ordered_json ranked = nlohmann::ordered_json::array();
    for (const ScoredMemory& s : result.ranked) {
        nlohmann::ordered_json item;
        item["id"] = s.memory->id;
        item["total"] = s.total;
        nlohmann::ordered_json per_dim;
        for (const auto& [dim, score] : s.per_dimension) per_dim[to_string(dim)] = score;
        item["per_dimension"] = std::move(per_dim);
        ranked.push_back(std::move(item));
    }
    j["ranked"] = std::move(ranked);
    j["response_text"] = result.response_text;
    std::cout << j.dump(2) << "\n";
}

int run_query(const RunProfile& profile, const std::string& text, const std::string& dims_csv,
              const std::string& format, std::string user,
              std::optional<std::int64_t> now) {
    MemoryStore store = load_store_file(require(profile.store_path, "store file"));
    RuleSet rules = RuleSet::load_dir(require(profile.rules_dir, "rules directory"));
    auto provider = make_provider(profile.embedding);
    if (provider->dimension() != store.dimension())
        throw Error("embedding dimension " + std::to_string(provider->dimension()) +
                    " does not match store dimension " + std::to_string(store.dimension()));

    if (user.empty()) {
        std::vector<std::string> users = store.user_ids();
        if (users.size() == 1) {
            user = users.front();
        } else if (users.empty()) {
            user = "default";
        } else {
            throw Error("store has " + std::to_string(users.size()) +
                        " users; pass --user to pick one");
        }
    }

    QueryProcessor processor(rules, *provider);
    RetrievalEngine engine(processor, load_weights(profile),
                           {profile.top_k, profile.retrieval_threshold});
    QueryOptions options;
    if (!dims_csv.empty()) {
        DimensionSet forced = parse_dimension_set(dims_csv);
        if (forced.empty()) throw Error("--dims must name at least one dimension");
        options.forced_dimensions = forced;
    }
    options.now = now;

    RetrievalResult result = engine.retrieve(text, user, store, nullptr, options);
    if (format == "json")
        print_result_json(result);
    else
        print_result_text(result);
    return kExitOk;
}

int run_eval(const RunProfile& profile, const std::string& dataset_path,
             const std::string& variant_arg, const std::string& out_dir) {
    MemoryStore store = load_store_file(require(profile.store_path, "store file"));
    std::vector<EvalQuery> queries = load_queries_file(dataset_path);
    RuleSet rules = RuleSet::load_dir(require(profile.rules_dir, "rules directory"));
    auto provider = make_provider(profile.embedding);
    if (provider->dimension() != store.dimension())
        throw Error("embedding dimension does not match store dimension");

    std::vector<SystemVariant> variants;
    if (variant_arg == "all")
        variants.assign(kAllVariants.begin(), kAllVariants.end());
    else
        variants.push_back(parse_variant(variant_arg));

    QueryProcessor processor(rules, *provider);
    EvalContext context{store, processor, load_weights(profile),
                        {profile.top_k, profile.retrieval_threshold}, profile.real_tech_usage};
    EvalReport report = run_eval(queries, context, variants);
    write_report_files(report, out_dir);
    std::cout << "wrote report.csv, per_query.csv, summary.txt under " << out_dir << "\n";
    return kExitOk;
}

int run_graph(const RunProfile& profile, double threshold, const std::string& out_file) {
    MemoryStore store = load_store_file(require(profile.store_path, "store file"));
    EntityGraph graph = build_graph(store, threshold);
    if (out_file.empty() || out_file == "-") {
        export_graph(graph, std::cout);
    } else {
        std::ofstream out(out_file, std::ios::binary);
        if (!out) throw Error("cannot open output file: " + out_file);
        export_graph(graph, out);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"memharbor: multi-dimensional conversational memory retrieval"};
    app.require_subcommand(1);

    RunProfile profile;
    try {
        profile = RunProfile::from_env();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    // gen-dataset
    auto* gen = app.add_subcommand("gen-dataset", "generate a seeded dataset + memory store");
    std::size_t gen_n = 1000;
    std::string gen_out;
    gen->add_option("--seed", profile.seed, "generation seed");
    gen->add_option("--n", gen_n, "number of conversations");
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--rules", profile.rules_dir, "rules directory");
    gen->add_option("--embed-dim", profile.embedding.dimension, "embedding dimension");
    gen->add_option("--embed-seed", profile.embedding.seed, "embedding hash seed");
    gen->add_option("--embed-provider", profile.embedding.provider, "hash|external");

    // query
    auto* query = app.add_subcommand("query", "run one retrieval against a store");
    std::string q_text, q_dims, q_format = "text", q_user;
    std::optional<std::int64_t> q_now;
    query->add_option("--store", profile.store_path, "store file");
    query->add_option("--text", q_text, "query text")->required();
    query->add_option("--dims", q_dims, "forced dimension list, e.g. semantic,entity");
    query->add_option("--format", q_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    query->add_option("--user", q_user, "user id (defaults to the store's single user)");
    query->add_option("--now", q_now,
                      "reference epoch seconds (defaults to newest memory timestamp)");
    query->add_option("--rules", profile.rules_dir, "rules directory");
    query->add_option("--weights", profile.weights_file, "weights file");
    query->add_option("--top-k", profile.top_k, "results to keep");
    query->add_option("--threshold", profile.retrieval_threshold, "minimum total score");
    query->add_option("--embed-dim", profile.embedding.dimension, "embedding dimension");
    query->add_option("--embed-seed", profile.embedding.seed, "embedding hash seed");
    query->add_option("--embed-provider", profile.embedding.provider, "hash|external");

    // eval
    auto* eval = app.add_subcommand("eval", "run the metric suite / ablation");
    std::string e_dataset, e_variant = "all", e_out;
    eval->add_option("--store", profile.store_path, "store file");
    eval->add_option("--dataset", e_dataset, "queries.jsonl file")->required();
    eval->add_option("--variant", e_variant, "system variant name or 'all'");
    eval->add_option("--out", e_out, "output directory")->required();
    eval->add_option("--rules", profile.rules_dir, "rules directory");
    eval->add_option("--weights", profile.weights_file, "weights file");
    eval->add_option("--top-k", profile.top_k, "results to keep per query");
    eval->add_option("--threshold", profile.retrieval_threshold, "minimum total score");
    eval->add_option("--real-tech-usage", profile.real_tech_usage,
                     "configured real-tech usage constant");
    eval->add_option("--embed-dim", profile.embedding.dimension, "embedding dimension");
    eval->add_option("--embed-seed", profile.embedding.seed, "embedding hash seed");
    eval->add_option("--embed-provider", profile.embedding.provider, "hash|external");

    // graph
    auto* graph = app.add_subcommand("graph", "resolve entities and export the graph");
    double g_threshold = 0.85;
    std::string g_out;
    graph->add_option("--store", profile.store_path, "store file");
    graph->add_option("--threshold", g_threshold, "resolution threshold in (0,1]");
    graph->add_option("--out", g_out, "output file ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return run_gen_dataset(profile, gen_n, gen_out);
        if (query->parsed()) return run_query(profile, q_text, q_dims, q_format, q_user, q_now);
        if (eval->parsed()) return run_eval(profile, e_dataset, e_variant, e_out);
        if (graph->parsed()) return run_graph(profile, g_threshold, g_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
