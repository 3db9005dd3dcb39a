#include "profile.hpp"

#include <cstdlib>

#include "memharbor/errors.hpp"
#include "memharbor/kv_config.hpp"

namespace memharbor::cli {

RunProfile RunProfile::from_file(const std::string& path) {
    RunProfile profile;
    auto kv = load_key_values(path);
    auto take = [&kv](const char* key, auto parse) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        parse(it->second);
        kv.erase(it);
    };
    take("store", [&](const std::string& v) { profile.store_path = v; });
    take("rules", [&](const std::string& v) { profile.rules_dir = v; });
    take("weights", [&](const std::string& v) { profile.weights_file = v; });
    take("embedding.provider", [&](const std::string& v) { profile.embedding.provider = v; });
    take("embedding.dimension",
         [&](const std::string& v) { profile.embedding.dimension = std::stoul(v); });
    take("embedding.seed",
         [&](const std::string& v) { profile.embedding.seed = std::stoull(v); });
    take("seed", [&](const std::string& v) { profile.seed = std::stoull(v); });
    take("retrieval.top_k", [&](const std::string& v) { profile.top_k = std::stoul(v); });
    take("retrieval.threshold",
         [&](const std::string& v) { profile.retrieval_threshold = std::stod(v); });
    take("real_tech_usage",
         [&](const std::string& v) { profile.real_tech_usage = std::stod(v); });
    if (!kv.empty()) throw Error("unknown profile key: " + kv.begin()->first);
    return profile;
}

RunProfile RunProfile::from_env() {
    const char* path = std::getenv("MEMHARBOR_CONFIG");
    if (!path || !*path) return {};
    return from_file(path);
}

} // namespace memharbor::cli
