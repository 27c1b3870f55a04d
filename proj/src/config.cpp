#include "brwlab/config.hpp"

#include <charconv>
#include <cstdlib>

#include "brwlab/errors.hpp"
#include "brwlab/report.hpp"

namespace brwlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueMap parse_key_values(const std::string& text) {
  KeyValueMap out;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

KeyValueMap parse_config_file(const std::string& path) {
  return parse_key_values(read_text_file(path));
}

double to_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') {
    throw ConfigError(key + ": not a number: '" + value + "'");
  }
  return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw ConfigError(key + ": not a nonnegative integer: '" + value + "'");
  }
  return v;
}

std::vector<std::uint64_t> to_uint_list(const std::string& key, const std::string& value) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    std::size_t comma = value.find(',', pos);
    if (comma == std::string::npos) comma = value.size();
    std::string piece = value.substr(pos, comma - pos);
    std::size_t a = piece.find_first_not_of(" \t");
    std::size_t b = piece.find_last_not_of(" \t");
    if (a == std::string::npos) throw ConfigError(key + ": empty element in list");
    out.push_back(to_uint(key, piece.substr(a, b - a + 1)));
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

}  // namespace brwlab
