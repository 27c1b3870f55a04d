#include "brwlab/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace brwlab {

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned>(ch));
          out += buf;
        } else {
          out.push_back(ch);
        }
    }
  }
  out.push_back('"');
}

}  // namespace

Json Json::str(std::string v) {
  Json j(Kind::string);
  j.string_ = std::move(v);
  return j;
}

Json Json::num(double v) {
  Json j(Kind::number);
  j.number_ = v;
  return j;
}

Json Json::integer(std::int64_t v) {
  Json j(Kind::integer);
  j.int_ = v;
  return j;
}

Json Json::uinteger(std::uint64_t v) {
  Json j(Kind::uinteger);
  j.uint_ = v;
  return j;
}

Json Json::boolean(bool v) {
  Json j(Kind::boolean);
  j.bool_ = v;
  return j;
}

Json& Json::set(const std::string& key, Json v) {
  if (kind_ != Kind::object) throw std::logic_error("set on a non-object json value");
  members_.insert_or_assign(key, std::move(v));
  return *this;
}

Json& Json::push(Json v) {
  if (kind_ != Kind::array) throw std::logic_error("push on a non-array json value");
  elements_.push_back(std::move(v));
  return *this;
}

std::string json_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_double(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void Json::dump_to(std::string& out) const {
  switch (kind_) {
    case Kind::object: {
      out.push_back('{');
      bool first = true;
      for (const auto& [k, v] : members_) {
        if (!first) out.push_back(',');
        first = false;
        append_escaped(out, k);
        out.push_back(':');
        v.dump_to(out);
      }
      out.push_back('}');
      break;
    }
    case Kind::array: {
      out.push_back('[');
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (i) out.push_back(',');
        elements_[i].dump_to(out);
      }
      out.push_back(']');
      break;
    }
    case Kind::string:
      append_escaped(out, string_);
      break;
    case Kind::number:
      out += json_double(number_);
      break;
    case Kind::integer: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof(buf), int_);
      out.append(buf, res.ptr);
      break;
    }
    case Kind::uinteger: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof(buf), uint_);
      out.append(buf, res.ptr);
      break;
    }
    case Kind::boolean:
      out += bool_ ? "true" : "false";
      break;
  }
}

std::string Json::dump() const {
  std::string out;
  dump_to(out);
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace brwlab
