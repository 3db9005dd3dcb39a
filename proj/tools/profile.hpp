#pragma once

#include <cstdint>
#include <string>

#include "memharbor/embedding.hpp"

namespace memharbor::cli {

// Run defaults loadable from the file named by MEMHARBOR_CONFIG.
// Command-line flags override any field.
struct RunProfile {
    std::string store_path;
    std::string rules_dir;
    std::string weights_file;
    EmbeddingSettings embedding;
    std::uint64_t seed = 42;
    std::size_t top_k = 5;
    double retrieval_threshold = 0.0;
    double real_tech_usage = 0.0;

    static RunProfile from_file(const std::string& path);
    static RunProfile from_env();  // empty profile when MEMHARBOR_CONFIG unset
};

} // namespace memharbor::cli
