#include "brwlab/feller.hpp"

#include <cmath>
#include <stdexcept>

#include "brwlab/sampling.hpp"

namespace brwlab {

double profile_mass(const ExponentialProfile& profile, double a, double b) {
  if (!(profile.beta > 0.0)) throw std::invalid_argument("profile beta must be positive");
  if (!(a >= 0.0) || !(a < b)) throw std::invalid_argument("need 0 <= a < b");
  double hi = std::isinf(b) ? 0.0 : std::exp(-4.0 * profile.beta * b);
  return std::exp(-4.0 * profile.beta * a) - hi;
}

std::vector<FellerState> feller_euler_path(double y0, double sigma2, double t_end, double dt,
                                           Rng& rng) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("need dt > 0 and t_end > 0");
  if (!(y0 >= 0.0)) throw std::invalid_argument("y0 must be nonnegative");
  long long steps = std::llround(t_end / dt);
  if (steps < 1) steps = 1;
  double h = t_end / static_cast<double>(steps);
  double sigma = std::sqrt(sigma2);
  double sqh = std::sqrt(h);
  std::vector<FellerState> path;
  path.reserve(static_cast<std::size_t>(steps) + 1);
  double y = y0;
  path.push_back({0.0, y, sigma2, y0});
  for (long long k = 1; k <= steps; ++k) {
    if (y > 0.0) {
      y += sigma * std::sqrt(y) * sqh * rng.normal();
      if (y < 0.0) y = 0.0;
    }
    path.push_back({static_cast<double>(k) * h, y, sigma2, y0});
  }
  return path;
}

double feller_euler_marginal(double y0, double sigma2, double t, double dt, Rng& rng) {
  if (!(dt > 0.0) || !(t > 0.0)) throw std::invalid_argument("need dt > 0 and t > 0");
  if (!(y0 >= 0.0)) throw std::invalid_argument("y0 must be nonnegative");
  long long steps = std::llround(t / dt);
  if (steps < 1) steps = 1;
  double h = t / static_cast<double>(steps);
  double sigma = std::sqrt(sigma2);
  double sqh = std::sqrt(h);
  double y = y0;
  for (long long k = 0; k < steps && y > 0.0; ++k) {
    y += sigma * std::sqrt(y) * sqh * rng.normal();
    if (y < 0.0) y = 0.0;
  }
  return y;
}

double feller_exact_marginal(double y0, double sigma2, double t, Rng& rng) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (!(y0 >= 0.0)) throw std::invalid_argument("y0 must be nonnegative");
  if (y0 == 0.0) return 0.0;
  double scale = 0.5 * sigma2 * t;
  std::uint64_t n = sample_poisson(rng, y0 / scale);
  double acc = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) acc += sample_exponential(rng, scale);
  return acc;
}

double limit_measure_mass(double y_t, const ExponentialProfile& profile, double a, double b) {
  if (!(y_t >= 0.0)) throw std::invalid_argument("mass must be nonnegative");
  return y_t * profile_mass(profile, a, b);
}

}  // namespace brwlab
