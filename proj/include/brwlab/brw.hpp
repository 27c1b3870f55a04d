#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "brwlab/gw.hpp"
#include "brwlab/offspring.hpp"
#include "brwlab/walk.hpp"

namespace brwlab {

// Sparse particle state: (site, count) pairs sorted by site, no zero counts,
// with the total cached so mass queries are O(1) and rightmost is the back.
struct SiteConfiguration {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;
  std::uint64_t generation = 0;
  std::uint64_t total = 0;

  bool empty() const { return counts.empty(); }
  std::uint64_t count_at(std::uint64_t site) const;
  std::uint64_t rightmost() const;  // requires a nonempty configuration

  static SiteConfiguration single(std::uint64_t site, std::uint64_t count,
                                  std::uint64_t generation = 0);
  // Sorts, merges duplicate sites, drops zeros, recomputes the total.
  static SiteConfiguration from_pairs(std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs,
                                      std::uint64_t generation = 0);
};

struct BRWRunRecord {
  WalkParams params;
  OffspringLaw law;
  SiteConfiguration initial;
  std::uint64_t horizon = 0;
  bool survived = false;
  std::optional<std::uint64_t> rightmost_at_horizon;
  std::vector<SiteConfiguration> snapshots;
};

struct BinnedMass {
  std::vector<double> masses;  // one per [b_i, b_{i+1}) cell
  double overflow = 0.0;       // mass at or beyond the last boundary
};

struct ConditionedRightmost {
  std::vector<std::uint64_t> values;  // rightmost site of each surviving run
  std::uint64_t horizon = 0;
  std::uint64_t budget_used = 0;
};

// One generation: per-site offspring totals (aggregated draws), then a
// single binomial split toward the origin; site 0 sends everything to 1.
SiteConfiguration step_configuration(const SiteConfiguration& config, const WalkParams& params,
                                     const OffspringLaw& law, Rng& rng,
                                     std::uint64_t ceiling = kPopulationCeiling);

// Full run with optional deep-copied snapshots at the requested generations
// (sorted, within [0, horizon]); extinction absorbs early.
BRWRunRecord run_to_horizon(const SiteConfiguration& initial, const WalkParams& params,
                            const OffspringLaw& law, std::uint64_t horizon,
                            const std::vector<std::uint64_t>& snapshot_times, Rng& rng,
                            std::uint64_t ceiling = kPopulationCeiling);

// Particle counts binned by site/scale into [b_i, b_{i+1}) cells.
BinnedMass occupation_measure(const SiteConfiguration& config, double scale,
                              const std::vector<double>& bins);

// Rightmost positions at generation floor(n^alpha) over surviving
// single-ancestor runs from the origin, conditioned by rejection.
ConditionedRightmost sample_conditioned_rightmost(const WalkParams& params,
                                                  const OffspringLaw& law, double alpha,
                                                  std::uint64_t replicates_budget, Rng& rng,
                                                  std::uint64_t survivor_minimum =
                                                      kDefaultSurvivorMinimum);

}  // namespace brwlab
