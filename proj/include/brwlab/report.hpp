#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace brwlab {

// Canonical JSON value: object keys are emitted sorted, floats with 17
// significant digits, so equal values serialize to equal bytes everywhere.
class Json {
 public:
  static Json object() { return Json(Kind::object); }
  static Json array() { return Json(Kind::array); }
  static Json str(std::string v);
  static Json num(double v);
  static Json integer(std::int64_t v);
  static Json uinteger(std::uint64_t v);
  static Json boolean(bool v);

  Json& set(const std::string& key, Json v);  // object only
  Json& push(Json v);                         // array only

  std::string dump() const;  // compact canonical form
  void dump_to(std::string& out) const;

 private:
  enum class Kind { object, array, string, number, integer, uinteger, boolean };
  explicit Json(Kind k) : kind_(k) {}

  Kind kind_;
  std::map<std::string, Json> members_;
  std::vector<Json> elements_;
  std::string string_;
  double number_ = 0.0;
  std::int64_t int_ = 0;
  std::uint64_t uint_ = 0;
  bool bool_ = false;
};

// 17-significant-digit float form used inside report JSON.
std::string json_double(double v);

// Shortest round-trip float form used in CSV outputs.
std::string csv_double(double v);

// Creates parent directories as needed, then writes atomically-enough for
// our purposes (truncate + write).
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace brwlab
