#include "brwlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brwlab {

double Welford::stderr_of_mean() const {
  if (n_ < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(n_));
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  double n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  std::size_t below = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    double f = cdf(samples[i]);
    double lo = static_cast<double>(below) / n;
    double hi = static_cast<double>(j) / n;
    d = std::max(d, std::max(std::fabs(f - lo), std::fabs(hi - f)));
    below = j;
    i = j;
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int it = 0; it < 500; ++it) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("regularized_gamma_q domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

Chi2Result chi2_goodness_of_fit(const std::vector<double>& observed,
                                const std::vector<double>& expected,
                                double min_expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument("chi2: mismatched bins");
  }
  // Pool low-expectation bins so the chi-square approximation is sound.
  std::vector<double> obs, exp;
  double pool_o = 0.0, pool_e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] >= min_expected) {
      obs.push_back(observed[i]);
      exp.push_back(expected[i]);
    } else {
      pool_o += observed[i];
      pool_e += expected[i];
    }
  }
  if (pool_e > 0.0) {
    obs.push_back(pool_o);
    exp.push_back(pool_e);
  }
  if (obs.size() < 2) throw std::invalid_argument("chi2: fewer than two usable bins");
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    double d = obs[i] - exp[i];
    stat += d * d / exp[i];
  }
  std::uint64_t dof = obs.size() - 1;
  double p = regularized_gamma_q(0.5 * static_cast<double>(dof), 0.5 * stat);
  return {stat, dof, p};
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q out of range");
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= v.size()) return v.back();
  double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

}  // namespace brwlab
