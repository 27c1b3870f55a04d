#include "brwlab/sampling.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace brwlab {

double sample_exponential(Rng& rng, double mean) {
  return -mean * std::log(rng.uniform01());
}

namespace {

std::uint64_t poisson_knuth(Rng& rng, double mean) {
  double limit = std::exp(-mean);
  double prod = 1.0;
  std::uint64_t k = 0;
  for (;;) {
    prod *= rng.uniform01();
    if (prod <= limit) return k;
    ++k;
  }
}

// Hormann's PTRS transformed-rejection sampler, valid for mean >= 10.
std::uint64_t poisson_ptrs(Rng& rng, double mean) {
  double log_mean = std::log(mean);
  double b = 0.931 + 2.53 * std::sqrt(mean);
  double a = -0.059 + 0.02483 * b;
  double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = rng.uniform01() - 0.5;
    double v = rng.uniform01();
    double us = 0.5 - std::fabs(u);
    double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * log_mean - mean - std::lgamma(kf + 1.0)) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

std::uint64_t binomial_inversion(Rng& rng, std::uint64_t n, double p) {
  double q = 1.0 - p;
  double s = p / q;
  double f = std::exp(static_cast<double>(n) * std::log(q));  // P(X = 0)
  double u = rng.uniform01();
  for (std::uint64_t k = 0; k < n; ++k) {
    if (u <= f) return k;
    u -= f;
    f *= s * static_cast<double>(n - k) / static_cast<double>(k + 1);
  }
  // The top bin absorbs any roundoff residue.
  return n;
}

// Hormann's BTRS transformed-rejection sampler, valid for n*p >= 10, p <= 1/2.
std::uint64_t binomial_btrs(Rng& rng, std::uint64_t n, double p) {
  double nd = static_cast<double>(n);
  double q = 1.0 - p;
  double spq = std::sqrt(nd * p * q);
  double b = 1.15 + 2.53 * spq;
  double a = -0.0873 + 0.0248 * b + 0.01 * p;
  double c = nd * p + 0.5;
  double v_r = 0.92 - 4.2 / b;
  double alpha = (2.83 + 5.1 / b) * spq;
  double lpq = std::log(p / q);
  double md = std::floor((nd + 1.0) * p);
  double h = std::lgamma(md + 1.0) + std::lgamma(nd - md + 1.0);
  for (;;) {
    double u = rng.uniform01() - 0.5;
    double v = rng.uniform01();
    double us = 0.5 - std::fabs(u);
    double kf = std::floor((2.0 * a / us + b) * u + c);
    if (kf < 0.0 || kf > nd) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (std::log(v * alpha / (a / (us * us) + b)) <=
        h - std::lgamma(kf + 1.0) - std::lgamma(nd - kf + 1.0) + (kf - md) * lpq) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

}  // namespace

std::uint64_t sample_poisson(Rng& rng, double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson mean must be nonnegative");
  if (mean == 0.0) return 0;
  if (mean < 10.0) return poisson_knuth(rng, mean);
  return poisson_ptrs(rng, mean);
}

std::uint64_t sample_binomial(Rng& rng, std::uint64_t n, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial p out of range");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - sample_binomial(rng, n, 1.0 - p);
  double np = static_cast<double>(n) * p;
  if (np < 10.0) return binomial_inversion(rng, n, p);
  return binomial_btrs(rng, n, p);
}

double sample_gamma(Rng& rng, double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0) throw std::invalid_argument("gamma parameters must be positive");
  if (shape < 1.0) {
    double u = rng.uniform01();
    return sample_gamma(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = rng.normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = rng.uniform01();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

std::uint64_t sample_geometric_half(Rng& rng) {
  std::uint64_t total = 0;
  for (;;) {
    std::uint64_t w = rng.next_u64();
    int ones = std::countl_one(w);
    total += static_cast<std::uint64_t>(ones);
    if (ones < 64) return total;
  }
}

std::uint64_t sample_negative_binomial_half(Rng& rng, std::uint64_t r) {
  if (r == 0) return 0;
  // NB(r, 1/2) is Poisson mixed over Gamma(r, 1).
  double g = sample_gamma(rng, static_cast<double>(r), 1.0);
  return sample_poisson(rng, g);
}

}  // namespace brwlab
