#include "brwlab/offspring.hpp"

#include <cmath>

#include "brwlab/errors.hpp"
#include "brwlab/sampling.hpp"

namespace brwlab {

OffspringLaw OffspringLaw::binary() {
  return OffspringLaw(LawKind::binary, "binary", 1.0, {});
}

OffspringLaw OffspringLaw::geometric_half() {
  return OffspringLaw(LawKind::geometric_half, "geometric_half", 2.0, {});
}

OffspringLaw OffspringLaw::poisson1() {
  return OffspringLaw(LawKind::poisson1, "poisson1", 1.0, {});
}

OffspringLaw OffspringLaw::custom(std::vector<double> pmf) {
  if (pmf.empty()) throw ConfigError("custom offspring pmf is empty");
  double total = 0.0, mean = 0.0, second = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (!(pmf[k] >= 0.0)) throw ConfigError("custom offspring pmf has a negative entry");
    double kd = static_cast<double>(k);
    total += pmf[k];
    mean += kd * pmf[k];
    second += kd * kd * pmf[k];
  }
  if (std::fabs(total - 1.0) > 1e-12) throw ConfigError("custom offspring pmf does not sum to 1");
  if (std::fabs(mean - 1.0) > 1e-12) throw ConfigError("custom offspring law is not critical");
  return OffspringLaw(LawKind::custom, "custom", second - mean * mean, std::move(pmf));
}

double OffspringLaw::pgf(double s) const {
  switch (kind_) {
    case LawKind::binary:
      return 0.5 * (1.0 + s * s);
    case LawKind::geometric_half:
      return 1.0 / (2.0 - s);
    case LawKind::poisson1:
      return std::exp(s - 1.0);
    case LawKind::custom: {
      double acc = 0.0;
      for (std::size_t k = custom_pmf_.size(); k-- > 0;) acc = acc * s + custom_pmf_[k];
      return acc;
    }
  }
  return 0.0;
}

double OffspringLaw::pmf(std::uint64_t k) const {
  switch (kind_) {
    case LawKind::binary:
      return (k == 0 || k == 2) ? 0.5 : 0.0;
    case LawKind::geometric_half:
      return k >= 1073 ? 0.0 : std::ldexp(1.0, -static_cast<int>(k) - 1);
    case LawKind::poisson1:
      return std::exp(-1.0 - std::lgamma(static_cast<double>(k) + 1.0));
    case LawKind::custom:
      return k < custom_pmf_.size() ? custom_pmf_[static_cast<std::size_t>(k)] : 0.0;
  }
  return 0.0;
}

std::uint64_t OffspringLaw::sample(Rng& rng) const {
  switch (kind_) {
    case LawKind::binary:
      return (rng.next_u64() >> 63) ? 2 : 0;
    case LawKind::geometric_half:
      return sample_geometric_half(rng);
    case LawKind::poisson1:
      return sample_poisson(rng, 1.0);
    case LawKind::custom: {
      double u = rng.uniform01();
      double acc = 0.0;
      for (std::size_t k = 0; k < custom_pmf_.size(); ++k) {
        acc += custom_pmf_[k];
        if (u <= acc) return static_cast<std::uint64_t>(k);
      }
      return static_cast<std::uint64_t>(custom_pmf_.size() - 1);
    }
  }
  return 0;
}

std::uint64_t OffspringLaw::sample_sum(Rng& rng, std::uint64_t z) const {
  if (z == 0) return 0;
  if (z >= kAggregationThreshold) {
    switch (kind_) {
      case LawKind::binary:
        return 2 * sample_binomial(rng, z, 0.5);
      case LawKind::geometric_half:
        return sample_negative_binomial_half(rng, z);
      case LawKind::poisson1:
        return sample_poisson(rng, static_cast<double>(z));
      case LawKind::custom:
        break;  // no generic aggregation; fall through to the loop
    }
  }
  std::uint64_t acc = 0;
  for (std::uint64_t i = 0; i < z; ++i) acc += sample(rng);
  return acc;
}

}  // namespace brwlab
