#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace brwlab {

class PopulationOverflow : public std::runtime_error {
 public:
  explicit PopulationOverflow(std::uint64_t ceiling)
      : std::runtime_error("population exceeded ceiling " + std::to_string(ceiling)),
        ceiling_(ceiling) {}
  std::uint64_t ceiling() const { return ceiling_; }

 private:
  std::uint64_t ceiling_;
};

class InsufficientSurvivors : public std::runtime_error {
 public:
  InsufficientSurvivors(std::uint64_t got, std::uint64_t needed)
      : std::runtime_error("only " + std::to_string(got) + " surviving replicates, need " +
                           std::to_string(needed)),
        got_(got),
        needed_(needed) {}
  std::uint64_t survivors() const { return got_; }
  std::uint64_t needed() const { return needed_; }

 private:
  std::uint64_t got_;
  std::uint64_t needed_;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace brwlab
