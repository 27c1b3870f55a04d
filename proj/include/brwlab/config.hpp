#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace brwlab {

// Flat key=value settings: one pair per line, '#' starts a comment, blank
// lines ignored. Later assignments win. Unknown keys are rejected by the
// consumer, not the parser.
using KeyValueMap = std::map<std::string, std::string>;

KeyValueMap parse_key_values(const std::string& text);
KeyValueMap parse_config_file(const std::string& path);

// Typed readers; each throws ConfigError on malformed values.
double to_double(const std::string& key, const std::string& value);
std::uint64_t to_uint(const std::string& key, const std::string& value);
std::vector<std::uint64_t> to_uint_list(const std::string& key, const std::string& value);

}  // namespace brwlab
