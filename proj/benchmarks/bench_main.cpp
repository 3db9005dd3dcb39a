#include <benchmark/benchmark.h>

#include <map>

#include <cstdio>
#include <string>

#include "memharbor/embedding.hpp"
#include "memharbor/memory_store.hpp"
#include "memharbor/query.hpp"
#include "memharbor/retrieval.hpp"
#include "memharbor/scorers.hpp"
#include "memharbor/text_similarity.hpp"

namespace {

using namespace memharbor;

const RuleSet& rules() {
    static RuleSet r = RuleSet::load_dir(std::string(MEMHARBOR_DATA_DIR) + "/rules");
    return r;
}

MemoryStore build_store(std::size_t n) {
    HashEmbeddingProvider provider(64, 1);
    const char* shapes[] = {
        "My name is %s.",          "I live in %s.",           "I work at %s.",
        "I love %s.",              "My favorite food is %s.", "I want to become a %s.",
        "We talked before about %s.", "I bought a new %s yesterday.",
    };
    const char* fills[] = {"Alice", "Paris", "Google", "hiking", "sushi",
                           "pilot", "chess", "camera", "Tokyo",  "pasta"};
    MemoryStore store(64);
    for (std::size_t i = 0; i < n; ++i) {
        char text[128];
        std::snprintf(text, sizeof(text), shapes[i % 8], fills[(i / 8) % 10]);
        MemoryRecord r;
        r.id = "m" + std::to_string(i);
        r.user_id = "bench";
        r.text = text;
        r.embedding = provider.embed(r.text);
        r.entities = extract_entities(r.text, rules().extraction);
        r.categories = classify_categories(r.text, rules().categories);
        r.intent = classify_intent(r.text, rules().intents);
        r.timestamp = 1700000000 + static_cast<std::int64_t>(i);
        store.ingest(std::move(r));
    }
    return store;
}

void BM_SequenceRatio(benchmark::State& state) {
    std::string a = "what is my favorite food these days";
    std::string b = "my favorite food is sushi and always was";
    for (auto _ : state) benchmark::DoNotOptimize(sequence_ratio(a, b));
}
BENCHMARK(BM_SequenceRatio);

void BM_EnhancedSimilarity(benchmark::State& state) {
    std::string a = "what is my favorite food these days";
    std::string b = "my favorite food is sushi and always was";
    for (auto _ : state) benchmark::DoNotOptimize(enhanced_text_similarity(a, b));
}
BENCHMARK(BM_EnhancedSimilarity);

void BM_HashEmbed(benchmark::State& state) {
    std::string text = "the quick brown fox jumps over the lazy dog";
    for (auto _ : state) benchmark::DoNotOptimize(hash_embed(text, 64, 1));
}
BENCHMARK(BM_HashEmbed);

void BM_ExtractEntities(benchmark::State& state) {
    std::string text = "I met Alice at Google in Paris on 2024-03-05.";
    for (auto _ : state) benchmark::DoNotOptimize(extract_entities(text, rules().extraction));
}
BENCHMARK(BM_ExtractEntities);

void BM_Retrieve(benchmark::State& state) {
    static std::map<std::size_t, MemoryStore> stores;
    std::size_t n = static_cast<std::size_t>(state.range(0));
    auto it = stores.find(n);
    if (it == stores.end()) it = stores.emplace(n, build_store(n)).first;
    const MemoryStore& store = it->second;

    static HashEmbeddingProvider provider(64, 1);
    static QueryProcessor processor(rules(), provider);
    RetrievalEngine engine(processor, {}, {});
    QueryOptions options;
    options.forced_dimensions = DimensionSet::all();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            engine.retrieve("What is my favorite food?", "bench", store, nullptr, options));
    }
}
BENCHMARK(BM_Retrieve)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
