#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "memharbor/memory_store.hpp"
#include "memharbor/query.hpp"
#include "memharbor/types.hpp"

namespace memharbor::test {

inline std::vector<double> unit_vec(std::size_t dim, std::size_t hot) {
    std::vector<double> v(dim, 0.0);
    v.at(hot) = 1.0;
    return v;
}

inline MemoryRecord make_record(std::string id, std::string text,
                                std::vector<double> embedding, std::int64_t timestamp = 0,
                                std::string user = "u") {
    MemoryRecord r;
    r.id = std::move(id);
    r.user_id = std::move(user);
    r.text = std::move(text);
    r.embedding = std::move(embedding);
    r.timestamp = timestamp;
    return r;
}

// Rules directory shipped with the repo, wired in by CMake.
inline std::filesystem::path data_dir() {
    return std::filesystem::path(MEMHARBOR_DATA_DIR);
}
inline std::filesystem::path rules_dir() { return data_dir() / "rules"; }

inline const RuleSet& shared_rules() {
    static RuleSet rules = RuleSet::load_dir(rules_dir());
    return rules;
}

// CLI binary path, wired in by CMake.
inline std::string cli_path() { return MEMHARBOR_CLI_PATH; }

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

inline CommandResult run_command(const std::string& command) {
    CommandResult result;
    std::string full = command + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) return result;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.output.append(buf.data(), n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

inline CommandResult run_cli(const std::string& args) {
    return run_command(cli_path() + " " + args);
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("memharbor-test-" + tag + "-" + std::to_string(::getpid()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace memharbor::test
