#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "brwlab/feller.hpp"
#include "brwlab/rng.hpp"
#include "brwlab/stats.hpp"

using namespace brwlab;

TEST_CASE("profile masses in closed form") {
  ExponentialProfile half{0.5};
  CHECK(profile_mass(half, 0.0, INFINITY) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(profile_mass(half, 0.0, 0.5) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  ExponentialProfile quarter{0.25};
  CHECK(profile_mass(quarter, 1.0, 2.0) ==
        doctest::Approx(std::exp(-1.0) - std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("profile masses telescope exactly") {
  ExponentialProfile prof{0.7};
  struct Triple {
    double a, b, c;
  };
  for (Triple t : {Triple{0.0, 0.5, 1.0},
                   {0.0, 1.0, 2.0},
                   {0.5, 1.0, 1.5},
                   {0.25, 0.5, 0.75},
                   {1.0, 2.0, INFINITY}}) {
    double whole = profile_mass(prof, t.a, t.c);
    double split = profile_mass(prof, t.a, t.b) + profile_mass(prof, t.b, t.c);
    CHECK(whole == doctest::Approx(split).epsilon(1e-14));
  }
}

TEST_CASE("profile domain errors") {
  ExponentialProfile prof{0.5};
  CHECK_THROWS_AS(profile_mass(prof, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(profile_mass(prof, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(profile_mass(prof, -0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(profile_mass(ExponentialProfile{0.0}, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(profile_mass(ExponentialProfile{-1.0}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("limit measure is the product form") {
  ExponentialProfile prof{0.5};
  CHECK(limit_measure_mass(0.0, prof, 0.0, 1.0) == 0.0);
  CHECK(limit_measure_mass(2.0, prof, 0.0, INFINITY) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(limit_measure_mass(1.0, ExponentialProfile{0.25}, 1.0, 2.0) ==
        doctest::Approx(0.23254).epsilon(1e-4));
  CHECK_THROWS_AS(limit_measure_mass(-1.0, prof, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("euler paths are structured and absorbing") {
  Rng rng(81, 0);
  std::vector<FellerState> flat = feller_euler_path(0.0, 2.0, 1.0, 1e-2, rng);
  CHECK(flat.size() == 101);
  for (const FellerState& s : flat) CHECK(s.mass == 0.0);

  for (int rep = 0; rep < 20; ++rep) {
    std::vector<FellerState> path = feller_euler_path(0.5, 2.0, 1.0, 1e-2, rng);
    REQUIRE(path.size() == 101);
    CHECK(path.front().mass == 0.5);
    bool dead = false;
    for (std::size_t k = 0; k < path.size(); ++k) {
      CHECK(path[k].t == doctest::Approx(1e-2 * static_cast<double>(k)).epsilon(1e-12));
      CHECK(path[k].mass >= 0.0);
      CHECK(path[k].sigma2 == 2.0);
      CHECK(path[k].y0 == 0.5);
      if (dead) CHECK(path[k].mass == 0.0);
      if (path[k].mass == 0.0) dead = true;
    }
  }
  CHECK_THROWS_AS(feller_euler_path(1.0, 2.0, 1.0, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(feller_euler_path(-1.0, 2.0, 1.0, 1e-2, rng), std::invalid_argument);
  CHECK_THROWS_AS(feller_euler_marginal(1.0, 2.0, 0.0, 1e-2, rng), std::invalid_argument);
}

TEST_CASE("euler endpoint keeps the first two moments") {
  Rng rng(82, 0);
  const int paths = 100000;
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (int i = 0; i < paths; ++i) {
    double y = feller_euler_marginal(1.0, 2.0, 1.0, 1e-3, rng);
    sum += y;
    sum2 += y * y;
    sum4 += y * y * y * y;
  }
  double n = static_cast<double>(paths);
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  double se_mean = std::sqrt(var / n);
  double se_var = std::sqrt((sum4 / n - (sum2 / n) * (sum2 / n)) / n);
  // Clamping at zero nudges the mean up by O(dt); grant a small bias budget
  // on top of the Monte Carlo corridor.
  CHECK(std::abs(mean - 1.0) <= 3.0 * se_mean + 0.01);
  CHECK(std::abs(var - 2.0) <= 3.0 * se_var + 0.06);
}

TEST_CASE("exact marginal extinction and mean") {
  Rng rng(83, 0);
  CHECK(feller_exact_marginal(0.0, 2.0, 1.0, rng) == 0.0);
  const int draws = 1000000;
  int extinct = 0;
  Welford acc;
  for (int i = 0; i < draws; ++i) {
    double y = feller_exact_marginal(1.0, 2.0, 1.0, rng);
    if (y == 0.0) ++extinct;
    acc.add(y);
  }
  double p0 = std::exp(-1.0);  // exp(-2 y0 / (sigma2 t))
  double se0 = std::sqrt(p0 * (1.0 - p0) / draws);
  CHECK(std::abs(static_cast<double>(extinct) / draws - p0) <= 3.0 * se0);
  CHECK(std::abs(acc.mean() - 1.0) <= 3.0 * acc.stderr_of_mean());
  CHECK_THROWS_AS(feller_exact_marginal(1.0, 2.0, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(feller_exact_marginal(-1.0, 2.0, 1.0, rng), std::invalid_argument);
}

TEST_CASE("euler extinction frequency matches the formula") {
  Rng rng(84, 0);
  const int paths = 50000;
  int extinct = 0;
  for (int i = 0; i < paths; ++i) {
    if (feller_euler_marginal(1.0, 2.0, 1.0, 1e-3, rng) == 0.0) ++extinct;
  }
  double p0 = std::exp(-1.0);
  double se0 = std::sqrt(p0 * (1.0 - p0) / paths);
  CHECK(std::abs(static_cast<double>(extinct) / paths - p0) <= 3.0 * se0 + 0.01);
}

TEST_CASE("exact and euler marginals share one distribution") {
  Rng rng(85, 0);
  const int draws = 20000;
  std::vector<double> exact, euler;
  exact.reserve(draws);
  euler.reserve(draws);
  for (int i = 0; i < draws; ++i) exact.push_back(feller_exact_marginal(1.0, 2.0, 1.0, rng));
  for (int i = 0; i < draws; ++i)
    euler.push_back(feller_euler_marginal(1.0, 2.0, 1.0, 1e-3, rng));
  CHECK(ks_two_sample(exact, euler) < 0.02);
}

TEST_CASE("default step size scales with the horizon") {
  CHECK(default_feller_dt(1.0) == doctest::Approx(1e-3));
  CHECK(default_feller_dt(2.0) == doctest::Approx(2e-3));
}
