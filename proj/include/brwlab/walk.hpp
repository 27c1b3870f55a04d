#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "brwlab/rng.hpp"

namespace brwlab {

// Nearest-neighbour walk on the nonnegative integers with a reflecting
// origin: from x >= 1 it steps down with probability 1/2 + beta/sqrt(n) and
// up with the complement; from 0 it moves to 1. beta = 0 is the reflected
// simple walk.
struct WalkParams {
  double beta;
  std::uint64_t n;
  double p_down;  // 1/2 + beta/sqrt(n)
  double p_up;    // always 1 - p_down, so the pair sums to 1 bit-exactly

  WalkParams(double beta_, std::uint64_t n_);
  bool is_unbiased() const { return beta == 0.0; }
};

struct WalkPath {
  std::uint64_t start;
  std::vector<std::uint64_t> positions;  // positions[0] == start, length m+1
  std::uint64_t final() const { return positions.back(); }
};

struct StepDistribution {
  std::uint64_t down_site;  // x-1 for x >= 1, else 1
  std::uint64_t up_site;
  double p_down;
  double p_up;
};

StepDistribution step_distribution(const WalkParams& params, std::uint64_t x);

WalkPath simulate_walk(const WalkParams& params, std::uint64_t start, std::uint64_t m, Rng& rng);

// Joint sampler driving the biased walk and the reflected simple walk with
// one shared uniform per step; the biased path never exceeds the simple one.
std::pair<WalkPath, WalkPath> coupled_biased_vs_reflected(const WalkParams& params,
                                                          std::uint64_t start,
                                                          std::uint64_t m, Rng& rng);

// Joint sampler for two copies of the same walk started at ordered positions
// of equal parity: the upper copy mirrors the lower copy's jump whenever the
// lower one moves freely, and draws fresh randomness while the lower one is
// pinned at the origin. Paths never cross and coincide after first meeting.
std::pair<WalkPath, WalkPath> coupled_monotone_pair(const WalkParams& params,
                                                    std::uint64_t start_low,
                                                    std::uint64_t start_high,
                                                    std::uint64_t m, Rng& rng);

struct TailEstimate {
  double value;
  double stderr_;
  std::uint64_t samples;
};

// Monte Carlo estimate of P(max_{i<=m} |W_i| >= k) for the unreflected
// simple walk started at 0.
TailEstimate max_abs_simple_walk_tail(std::uint64_t m, std::uint64_t k,
                                      std::uint64_t samples, Rng& rng);

}  // namespace brwlab
