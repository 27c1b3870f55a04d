#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "brwlab/brw.hpp"
#include "brwlab/errors.hpp"
#include "brwlab/exact_probs.hpp"
#include "brwlab/gw.hpp"
#include "brwlab/rng.hpp"
#include "brwlab/stats.hpp"

using namespace brwlab;

namespace {

// Total variation between two empirical histograms, with a crude
// three-sigma-style Monte Carlo bound built from the pooled frequencies.
struct TvComparison {
  double tv = 0.0;
  double bound = 0.0;
};

TvComparison tv_compare(const std::vector<double>& a, const std::vector<double>& b,
                        double na, double nb) {
  TvComparison out;
  std::size_t cells = std::max(a.size(), b.size());
  for (std::size_t j = 0; j < cells; ++j) {
    double pa = j < a.size() ? a[j] / na : 0.0;
    double pb = j < b.size() ? b[j] / nb : 0.0;
    out.tv += 0.5 * std::abs(pa - pb);
    double pooled = 0.5 * (pa + pb);
    out.bound += 1.5 * std::sqrt(pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb));
  }
  return out;
}

void record(std::vector<double>& hist, std::uint64_t value) {
  if (hist.size() <= value) hist.resize(value + 1, 0.0);
  hist[value] += 1.0;
}

}  // namespace

TEST_CASE("site configuration construction rules") {
  SiteConfiguration c = SiteConfiguration::from_pairs({{7, 2}, {0, 3}, {7, 1}, {4, 0}}, 5);
  CHECK(c.generation == 5);
  CHECK(c.total == 6);
  CHECK(c.count_at(0) == 3);
  CHECK(c.count_at(7) == 3);
  CHECK(c.count_at(4) == 0);
  CHECK(c.rightmost() == 7);
  REQUIRE(c.counts.size() == 2);
  CHECK(c.counts.front().first == 0);

  SiteConfiguration s = SiteConfiguration::single(9, 4);
  CHECK(s.total == 4);
  CHECK(s.rightmost() == 9);
  SiteConfiguration none = SiteConfiguration::single(9, 0);
  CHECK(none.empty());
  CHECK_THROWS_AS(none.rightmost(), std::runtime_error);
}

TEST_CASE("stepping an empty configuration stays empty") {
  Rng rng(61, 0);
  WalkParams p(0.5, 100);
  SiteConfiguration empty;
  SiteConfiguration next = step_configuration(empty, p, OffspringLaw::geometric_half(), rng);
  CHECK(next.empty());
  CHECK(next.generation == 1);
}

TEST_CASE("frozen law forces the reflection move") {
  Rng rng(62, 0);
  WalkParams p(0.5, 100);
  OffspringLaw frozen = OffspringLaw::custom({0.0, 1.0});
  for (int rep = 0; rep < 50; ++rep) {
    SiteConfiguration next = step_configuration(SiteConfiguration::single(0, 1), p, frozen, rng);
    CHECK(next.total == 1);
    CHECK(next.count_at(1) == 1);
  }
}

TEST_CASE("aggregated stepping matches per-particle stepping in law") {
  WalkParams p(0.5, 100);
  OffspringLaw law = OffspringLaw::geometric_half();
  const std::uint64_t site = 5;
  const int reps = 100000;
  for (std::uint64_t c : {1ull, 10ull, 100ull}) {
    CAPTURE(c);
    Rng rng_a(63, c);
    Rng rng_b(64, c);
    std::vector<double> total_a, total_b, down_a, down_b;
    for (int rep = 0; rep < reps; ++rep) {
      SiteConfiguration next =
          step_configuration(SiteConfiguration::single(site, c), p, law, rng_a);
      record(total_a, next.total);
      record(down_a, next.count_at(site - 1));
      // Reference: every particle breeds alone, every child moves alone.
      std::uint64_t t = 0;
      for (std::uint64_t i = 0; i < c; ++i) t += law.sample(rng_b);
      std::uint64_t d = 0;
      for (std::uint64_t j = 0; j < t; ++j)
        if (rng_b.uniform01() <= p.p_down) ++d;
      record(total_b, t);
      record(down_b, d);
    }
    TvComparison totals = tv_compare(total_a, total_b, reps, reps);
    CHECK(totals.tv < totals.bound);
    TvComparison downs = tv_compare(down_a, down_b, reps, reps);
    CHECK(downs.tv < downs.bound);
  }
}

TEST_CASE("expected site counts reproduce the walk kernel") {
  // One ancestor: the expected particle count at each site after m
  // generations is exactly the m-step walk probability.
  struct Case {
    double beta;
    std::uint64_t n, start, m;
    int reps;
  };
  for (Case cs : {Case{0.5, 100, 0, 10, 200000}, Case{0.0, 16, 3, 8, 100000}}) {
    CAPTURE(cs.beta);
    Rng rng(65, cs.start);
    WalkParams p(cs.beta, cs.n);
    OffspringLaw law = OffspringLaw::geometric_half();
    std::size_t width = cs.start + cs.m + 1;
    std::vector<double> sum(width, 0.0), sumsq(width, 0.0);
    for (int rep = 0; rep < cs.reps; ++rep) {
      SiteConfiguration config = SiteConfiguration::single(cs.start, 1);
      for (std::uint64_t gen = 0; gen < cs.m && !config.empty(); ++gen) {
        config = step_configuration(config, p, law, rng);
      }
      for (const auto& [site, count] : config.counts) {
        if (site < width) {
          sum[site] += static_cast<double>(count);
          sumsq[site] += static_cast<double>(count) * static_cast<double>(count);
        }
      }
    }
    TransitionRow row = rw_dp_transition_prob(p, cs.start, cs.m);
    double n = static_cast<double>(cs.reps);
    for (std::size_t site = 0; site < width; ++site) {
      if (row.probs[site] < 1e-3) continue;
      double mean = sum[site] / n;
      double var = sumsq[site] / n - mean * mean;
      double se = std::sqrt(var / n);
      CHECK(std::abs(mean - row.probs[site]) <= 3.0 * se);
    }
  }
}

TEST_CASE("occupied sites stay parity pure") {
  Rng rng(66, 0);
  WalkParams p(0.5, 100);
  OffspringLaw law = OffspringLaw::geometric_half();
  SiteConfiguration config = SiteConfiguration::from_pairs({{3, 2}, {5, 1}});
  for (int gen = 1; gen <= 12 && !config.empty(); ++gen) {
    config = step_configuration(config, p, law, rng);
    for (const auto& [site, count] : config.counts) {
      CHECK(((site + 3 + config.generation) & 1ull) == 0);
      CHECK(count > 0);
    }
  }
}

TEST_CASE("run to horizon records survival, rightmost, and snapshots") {
  Rng rng(67, 0);
  WalkParams p(0.5, 100);
  OffspringLaw law = OffspringLaw::geometric_half();
  SUBCASE("zero horizon is a pure report") {
    BRWRunRecord rec =
        run_to_horizon(SiteConfiguration::from_pairs({{2, 1}, {6, 4}}), p, law, 0, {0}, rng);
    CHECK(rec.survived);
    CHECK(rec.rightmost_at_horizon == 6);
    REQUIRE(rec.snapshots.size() == 1);
    CHECK(rec.snapshots[0].total == 5);
    BRWRunRecord dead = run_to_horizon(SiteConfiguration{}, p, law, 0, {}, rng);
    CHECK_FALSE(dead.survived);
    CHECK_FALSE(dead.rightmost_at_horizon.has_value());
  }
  SUBCASE("snapshots carry their generation stamps") {
    BRWRunRecord rec =
        run_to_horizon(SiteConfiguration::single(0, 400), p, law, 30, {0, 10, 30}, rng);
    REQUIRE(rec.snapshots.size() == 3);
    CHECK(rec.snapshots[0].generation == 0);
    CHECK(rec.snapshots[1].generation == 10);
    CHECK(rec.snapshots[2].generation == 30);
    CHECK(rec.snapshots[0].total == 400);
    if (rec.survived) {
      REQUIRE(rec.rightmost_at_horizon.has_value());
      CHECK(*rec.rightmost_at_horizon == rec.snapshots[2].rightmost());
    } else {
      CHECK(rec.snapshots[2].empty());
    }
  }
  SUBCASE("extinct runs still produce the requested frames") {
    bool found_extinct = false;
    for (int rep = 0; rep < 50 && !found_extinct; ++rep) {
      BRWRunRecord rec = run_to_horizon(SiteConfiguration::single(0, 1), p, law, 40, {20, 40}, rng);
      if (rec.survived) continue;
      found_extinct = true;
      REQUIRE(rec.snapshots.size() == 2);
      CHECK(rec.snapshots[0].generation == 20);
      CHECK(rec.snapshots[1].generation == 40);
      CHECK(rec.snapshots[1].empty());
      CHECK_FALSE(rec.rightmost_at_horizon.has_value());
    }
    CHECK(found_extinct);
  }
}

TEST_CASE("spatial motion leaves survival untouched") {
  Rng rng(68, 0);
  WalkParams p(1.0, 64);
  OffspringLaw law = OffspringLaw::binary();
  const int reps = 100000;
  const std::uint64_t m = 40;
  int survived = 0;
  for (int rep = 0; rep < reps; ++rep) {
    BRWRunRecord rec = run_to_horizon(SiteConfiguration::single(0, 1), p, law, m, {}, rng);
    if (rec.survived) ++survived;
  }
  double target = survival_probability(law, m);
  double se = std::sqrt(target * (1.0 - target) / reps);
  CHECK(std::abs(static_cast<double>(survived) / reps - target) <= 3.0 * se);
}

TEST_CASE("total mass is a martingale") {
  Rng rng(69, 0);
  WalkParams p(0.5, 100);
  OffspringLaw law = OffspringLaw::geometric_half();
  SUBCASE("tight corridor at a short horizon") {
    const int reps = 400;
    Welford acc;
    for (int rep = 0; rep < reps; ++rep) {
      BRWRunRecord rec =
          run_to_horizon(SiteConfiguration::single(3, 500), p, law, 200, {200}, rng);
      acc.add(static_cast<double>(rec.snapshots[0].total));
    }
    CHECK(std::abs(acc.mean() - 500.0) <= 3.0 * acc.stderr_of_mean());
  }
  SUBCASE("thousand ancestors to a thousand generations") {
    const int reps = 60;
    Welford acc;
    for (int rep = 0; rep < reps; ++rep) {
      BRWRunRecord rec =
          run_to_horizon(SiteConfiguration::single(0, 1000), p, law, 1000, {1000}, rng);
      acc.add(static_cast<double>(rec.snapshots[0].total));
    }
    CHECK(std::abs(acc.mean() - 1000.0) <= 3.0 * acc.stderr_of_mean());
  }
}

TEST_CASE("occupation measure bins by scaled site") {
  SiteConfiguration c = SiteConfiguration::from_pairs({{0, 3}, {7, 2}});
  BinnedMass m = occupation_measure(c, 10.0, {0.0, 0.5, 1.0});
  REQUIRE(m.masses.size() == 2);
  CHECK(m.masses[0] == 3.0);
  CHECK(m.masses[1] == 2.0);
  CHECK(m.overflow == 0.0);

  BinnedMass all = occupation_measure(c, 10.0,
                                      {0.0, std::numeric_limits<double>::infinity()});
  REQUIRE(all.masses.size() == 1);
  CHECK(all.masses[0] == 5.0);
  CHECK(all.overflow == 0.0);

  BinnedMass spill = occupation_measure(c, 10.0, {0.0, 0.7});
  CHECK(spill.masses[0] == 3.0);
  CHECK(spill.overflow == 2.0);  // 0.7 sits exactly on the boundary

  SiteConfiguration empty;
  BinnedMass nothing = occupation_measure(empty, 10.0, {0.0, 1.0});
  CHECK(nothing.masses[0] == 0.0);
  CHECK(nothing.overflow == 0.0);

  CHECK_THROWS_AS(occupation_measure(c, 10.0, {0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(occupation_measure(c, 10.0, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(occupation_measure(c, 10.0, {0.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("conditioned rightmost sampling") {
  OffspringLaw law = OffspringLaw::geometric_half();
  SUBCASE("survivor frequency matches the branching law") {
    Rng rng(70, 0);
    WalkParams p(0.5, 50);
    ConditionedRightmost out = sample_conditioned_rightmost(p, law, 1.3, 60000, rng);
    CHECK(out.horizon == 161);
    CHECK(out.budget_used == 60000);
    double rho = survival_probability(law, out.horizon);
    double phat = static_cast<double>(out.values.size()) / 60000.0;
    double se = std::sqrt(rho * (1.0 - rho) / 60000.0);
    CHECK(std::abs(phat - rho) <= 3.0 * se);
    for (std::uint64_t v : out.values) CHECK((v & 1ull) == (out.horizon & 1ull));
  }
  SUBCASE("scaled median lands in the coarse theory band") {
    Rng rng(71, 0);
    WalkParams p(0.5, 100);
    ConditionedRightmost out = sample_conditioned_rightmost(p, law, 1.5, 300000, rng);
    CHECK(out.horizon == 1000);
    std::vector<double> scaled;
    scaled.reserve(out.values.size());
    double divisor = std::sqrt(100.0) * std::log(100.0);
    for (std::uint64_t v : out.values) scaled.push_back(static_cast<double>(v) / divisor);
    double med = median(scaled);
    CHECK(med >= 0.25 * 0.4);
    CHECK(med <= 0.25 * 2.5);
  }
  SUBCASE("starved budgets raise the survivor error") {
    Rng rng(72, 0);
    WalkParams p(0.5, 50);
    CHECK_THROWS_AS(sample_conditioned_rightmost(p, law, 1.2, 5000, rng),
                    InsufficientSurvivors);
    CHECK_THROWS_AS(sample_conditioned_rightmost(p, law, 0.9, 100, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_conditioned_rightmost(p, law, 1.2, 0, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("population ceiling propagates out of runs") {
  Rng rng(73, 0);
  WalkParams p(0.5, 100);
  OffspringLaw law = OffspringLaw::geometric_half();
  int overflows = 0;
  for (int rep = 0; rep < 50; ++rep) {
    try {
      run_to_horizon(SiteConfiguration::single(0, 64), p, law, 100, {}, rng, 80);
    } catch (const PopulationOverflow& e) {
      CHECK(e.ceiling() == 80);
      ++overflows;
    }
  }
  CHECK(overflows > 0);
}
