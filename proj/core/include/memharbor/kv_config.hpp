#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace memharbor {

// Flat `key=value` text config. Blank lines and `#` comments are skipped;
// whitespace around keys and values is trimmed. Duplicate keys: last wins.
std::map<std::string, std::string> parse_key_values(std::istream& in);
std::map<std::string, std::string> load_key_values(const std::filesystem::path& path);

} // namespace memharbor
