#include "brwlab/walk.hpp"

#include <cmath>
#include <stdexcept>

namespace brwlab {

WalkParams::WalkParams(double beta_, std::uint64_t n_) : beta(beta_), n(n_) {
  if (n == 0) throw std::invalid_argument("walk scale n must be positive");
  if (!(beta >= 0.0)) throw std::invalid_argument("walk drift beta must be nonnegative");
  double drift = beta / std::sqrt(static_cast<double>(n));
  if (!(drift < 0.5)) throw std::invalid_argument("beta must be below sqrt(n)/2");
  p_down = 0.5 + drift;
  p_up = 1.0 - p_down;
}

StepDistribution step_distribution(const WalkParams& params, std::uint64_t x) {
  if (x == 0) return {1, 1, 0.0, 1.0};
  return {x - 1, x + 1, params.p_down, params.p_up};
}

namespace {

inline std::uint64_t step_from(std::uint64_t x, double u, double p_down) {
  if (x == 0) return 1;
  return u <= p_down ? x - 1 : x + 1;
}

}  // namespace

WalkPath simulate_walk(const WalkParams& params, std::uint64_t start, std::uint64_t m, Rng& rng) {
  WalkPath path{start, {}};
  path.positions.reserve(m + 1);
  path.positions.push_back(start);
  std::uint64_t x = start;
  for (std::uint64_t i = 0; i < m; ++i) {
    x = step_from(x, x == 0 ? 0.0 : rng.uniform01(), params.p_down);
    path.positions.push_back(x);
  }
  return path;
}

std::pair<WalkPath, WalkPath> coupled_biased_vs_reflected(const WalkParams& params,
                                                          std::uint64_t start,
                                                          std::uint64_t m, Rng& rng) {
  WalkPath biased{start, {start}};
  WalkPath simple{start, {start}};
  biased.positions.reserve(m + 1);
  simple.positions.reserve(m + 1);
  std::uint64_t xb = start, xs = start;
  for (std::uint64_t i = 0; i < m; ++i) {
    double u = rng.uniform01();
    xb = step_from(xb, u, params.p_down);
    xs = step_from(xs, u, 0.5);
    biased.positions.push_back(xb);
    simple.positions.push_back(xs);
  }
  return {std::move(biased), std::move(simple)};
}

std::pair<WalkPath, WalkPath> coupled_monotone_pair(const WalkParams& params,
                                                    std::uint64_t start_low,
                                                    std::uint64_t start_high,
                                                    std::uint64_t m, Rng& rng) {
  if (start_low > start_high) throw std::invalid_argument("start_low must not exceed start_high");
  if (((start_high - start_low) & 1ull) != 0) {
    throw std::invalid_argument("coupled starts must have equal parity");
  }
  WalkPath low{start_low, {start_low}};
  WalkPath high{start_high, {start_high}};
  low.positions.reserve(m + 1);
  high.positions.reserve(m + 1);
  std::uint64_t xl = start_low, xh = start_high;
  for (std::uint64_t i = 0; i < m; ++i) {
    if (xl == xh) {
      std::uint64_t x = step_from(xl, xl == 0 ? 0.0 : rng.uniform01(), params.p_down);
      xl = xh = x;
    } else if (xl == 0) {
      xl = 1;
      xh = step_from(xh, rng.uniform01(), params.p_down);
    } else {
      // Both interior: the upper walker copies the lower walker's jump.
      double u = rng.uniform01();
      if (u <= params.p_down) {
        --xl;
        --xh;
      } else {
        ++xl;
        ++xh;
      }
    }
    low.positions.push_back(xl);
    high.positions.push_back(xh);
  }
  return {std::move(low), std::move(high)};
}

TailEstimate max_abs_simple_walk_tail(std::uint64_t m, std::uint64_t k,
                                      std::uint64_t samples, Rng& rng) {
  if (m == 0) throw std::invalid_argument("horizon must be at least 1");
  if (k == 0) throw std::invalid_argument("threshold must be at least 1");
  if (k > m) return {0.0, 0.0, samples};
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::int64_t x = 0;
    for (std::uint64_t i = 0; i < m; ++i) {
      x += (rng.next_u64() >> 63) ? 1 : -1;
      if (x >= static_cast<std::int64_t>(k) || -x >= static_cast<std::int64_t>(k)) {
        ++hits;
        break;
      }
    }
  }
  double phat = static_cast<double>(hits) / static_cast<double>(samples);
  double se = std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
  return {phat, se, samples};
}

}  // namespace brwlab
