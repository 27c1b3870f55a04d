#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brwlab/rng.hpp"

namespace brwlab {

// Counts above this stay exact in doubles and in serialized JSON numbers.
inline constexpr std::uint64_t kPopulationCeiling = 1ull << 53;

// Per-site populations below this are sampled one individual at a time;
// larger ones use exact law-specific aggregation where available.
inline constexpr std::uint64_t kAggregationThreshold = 10000;

enum class LawKind { binary, geometric_half, poisson1, custom };

// Critical offspring distribution: mean 1, finite variance. The built-in
// laws carry exact pgfs and aggregate samplers; custom laws are finite pmfs.
class OffspringLaw {
 public:
  static OffspringLaw binary();
  static OffspringLaw geometric_half();
  static OffspringLaw poisson1();
  // pmf over {0, 1, ..., pmf.size()-1}; must sum to 1 and have mean 1,
  // both within 1e-12. Zero variance is allowed but flagged.
  static OffspringLaw custom(std::vector<double> pmf);

  LawKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double mean() const { return 1.0; }
  double variance() const { return variance_; }
  bool critical_variance() const { return variance_ > 0.0; }

  double pgf(double s) const;
  double pmf(std::uint64_t k) const;
  std::uint64_t sample(Rng& rng) const;
  // Sum of z iid offspring counts, exact in distribution.
  std::uint64_t sample_sum(Rng& rng, std::uint64_t z) const;

 private:
  OffspringLaw(LawKind kind, std::string name, double variance, std::vector<double> pmf)
      : kind_(kind), name_(std::move(name)), variance_(variance), custom_pmf_(std::move(pmf)) {}

  LawKind kind_;
  std::string name_;
  double variance_;
  std::vector<double> custom_pmf_;
};

}  // namespace brwlab
