#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace brwlab {

// Streaming mean/variance accumulator (Welford update).
class Welford {
 public:
  void add(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stderr_of_mean() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// One-sample Kolmogorov statistic against a callable CDF. Handles tied
// sample values (lattice data) by collapsing them into single jumps.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Regularized upper incomplete gamma Q(a, x) via series / continued fraction.
double regularized_gamma_q(double a, double x);

struct Chi2Result {
  double statistic;
  std::uint64_t dof;
  double p_value;
};

// Goodness of fit for pre-binned counts against expected bin masses.
// Bins with expected count below min_expected are pooled into a remainder bin.
Chi2Result chi2_goodness_of_fit(const std::vector<double>& observed,
                                const std::vector<double>& expected,
                                double min_expected = 5.0);

double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);

}  // namespace brwlab
