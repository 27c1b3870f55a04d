#include "brwlab/brw.hpp"

#include <algorithm>
#include <cmath>

#include "brwlab/errors.hpp"
#include "brwlab/sampling.hpp"

namespace brwlab {

std::uint64_t SiteConfiguration::count_at(std::uint64_t site) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), site,
                             [](const auto& e, std::uint64_t s) { return e.first < s; });
  return (it != counts.end() && it->first == site) ? it->second : 0;
}

std::uint64_t SiteConfiguration::rightmost() const {
  if (counts.empty()) throw std::runtime_error("rightmost of an empty configuration");
  return counts.back().first;
}

SiteConfiguration SiteConfiguration::single(std::uint64_t site, std::uint64_t count,
                                            std::uint64_t generation) {
  SiteConfiguration c;
  c.generation = generation;
  if (count > 0) {
    c.counts.push_back({site, count});
    c.total = count;
  }
  return c;
}

SiteConfiguration SiteConfiguration::from_pairs(
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs, std::uint64_t generation) {
  std::sort(pairs.begin(), pairs.end());
  SiteConfiguration c;
  c.generation = generation;
  for (const auto& [site, count] : pairs) {
    if (count == 0) continue;
    if (!c.counts.empty() && c.counts.back().first == site) {
      c.counts.back().second += count;
    } else {
      c.counts.push_back({site, count});
    }
    c.total += count;
  }
  return c;
}

SiteConfiguration step_configuration(const SiteConfiguration& config, const WalkParams& params,
                                     const OffspringLaw& law, Rng& rng, std::uint64_t ceiling) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> next;
  next.reserve(config.counts.size() + 2);
  for (const auto& [site, count] : config.counts) {
    std::uint64_t offspring = law.sample_sum(rng, count);
    if (offspring == 0) continue;
    if (site == 0) {
      next.push_back({1, offspring});
    } else {
      std::uint64_t down = sample_binomial(rng, offspring, params.p_down);
      if (down > 0) next.push_back({site - 1, down});
      if (offspring > down) next.push_back({site + 1, offspring - down});
    }
  }
  SiteConfiguration out = SiteConfiguration::from_pairs(std::move(next), config.generation + 1);
  if (out.total > ceiling) throw PopulationOverflow(ceiling);
  return out;
}

BRWRunRecord run_to_horizon(const SiteConfiguration& initial, const WalkParams& params,
                            const OffspringLaw& law, std::uint64_t horizon,
                            const std::vector<std::uint64_t>& snapshot_times, Rng& rng,
                            std::uint64_t ceiling) {
  BRWRunRecord rec{params, law, initial, horizon, false, std::nullopt, {}};
  SiteConfiguration config = initial;
  std::size_t next_snap = 0;
  auto maybe_snapshot = [&](const SiteConfiguration& c) {
    while (next_snap < snapshot_times.size() && snapshot_times[next_snap] == c.generation) {
      rec.snapshots.push_back(c);
      ++next_snap;
    }
  };
  maybe_snapshot(config);
  while (config.generation < horizon && !config.empty()) {
    config = step_configuration(config, params, law, rng, ceiling);
    maybe_snapshot(config);
  }
  // Extinct before a requested time: the state there is the empty one.
  while (next_snap < snapshot_times.size()) {
    SiteConfiguration dead;
    dead.generation = snapshot_times[next_snap++];
    rec.snapshots.push_back(dead);
  }
  rec.survived = !config.empty();
  if (rec.survived) rec.rightmost_at_horizon = config.rightmost();
  return rec;
}

BinnedMass occupation_measure(const SiteConfiguration& config, double scale,
                              const std::vector<double>& bins) {
  if (bins.size() < 2 || bins.front() != 0.0) {
    throw std::invalid_argument("bins must start at 0 with at least one cell");
  }
  for (std::size_t i = 1; i < bins.size(); ++i) {
    if (!(bins[i] > bins[i - 1])) throw std::invalid_argument("bins must increase strictly");
  }
  BinnedMass out;
  out.masses.assign(bins.size() - 1, 0.0);
  for (const auto& [site, count] : config.counts) {
    double x = static_cast<double>(site) / scale;
    auto it = std::upper_bound(bins.begin(), bins.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - bins.begin());
    if (idx == 0) continue;  // below the first boundary (x < 0 cannot happen)
    if (idx >= bins.size()) {
      out.overflow += static_cast<double>(count);
    } else {
      out.masses[idx - 1] += static_cast<double>(count);
    }
  }
  return out;
}

ConditionedRightmost sample_conditioned_rightmost(const WalkParams& params,
                                                  const OffspringLaw& law, double alpha,
                                                  std::uint64_t replicates_budget, Rng& rng,
                                                  std::uint64_t survivor_minimum) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  if (replicates_budget == 0) throw std::invalid_argument("replicates_budget must be positive");
  std::uint64_t horizon = static_cast<std::uint64_t>(
      std::floor(std::pow(static_cast<double>(params.n), alpha) + 1e-9));
  ConditionedRightmost out;
  out.horizon = horizon;
  out.budget_used = replicates_budget;
  for (std::uint64_t rep = 0; rep < replicates_budget; ++rep) {
    SiteConfiguration config = SiteConfiguration::single(0, 1);
    for (std::uint64_t gen = 0; gen < horizon && !config.empty(); ++gen) {
      config = step_configuration(config, params, law, rng);
    }
    if (!config.empty()) out.values.push_back(config.rightmost());
  }
  if (out.values.size() < survivor_minimum) {
    throw InsufficientSurvivors(out.values.size(), survivor_minimum);
  }
  return out;
}

}  // namespace brwlab
