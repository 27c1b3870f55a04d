#pragma once

#include <cstdint>
#include <vector>

#include "brwlab/offspring.hpp"
#include "brwlab/rng.hpp"

namespace brwlab {

inline constexpr std::uint64_t kDefaultSurvivorMinimum = 200;

struct GWSnapshot {
  std::uint64_t generation = 0;
  std::uint64_t population = 0;
};

struct YaglomDiagnostic {
  double ks_distance = 0.0;       // empirical Z_m/m vs Exp(mean variance/2)
  std::uint64_t survivors = 0;    // conditional sample size
  double conditional_mean = 0.0;  // mean of Z_m over surviving replicates
};

// Exact survival probability of generation m from one ancestor, by m-fold
// pgf iteration (closed form where the law admits one).
double survival_probability(const OffspringLaw& law, std::uint64_t m);

// Exactly 1/rho_m; the martingale mean makes this an identity, not a limit.
double conditional_mean_given_survival(const OffspringLaw& law, std::uint64_t m);

// One trajectory of populations, recorded per generation; stops early once
// extinct (the terminal zero snapshot is included).
std::vector<GWSnapshot> simulate_gw(const OffspringLaw& law, std::uint64_t z0,
                                    std::uint64_t horizon, Rng& rng,
                                    std::uint64_t ceiling = kPopulationCeiling);

// Kolmogorov-Smirnov distance of the conditional law of Z_m/m against the
// exponential limit, from fresh replicates started at one ancestor.
YaglomDiagnostic yaglom_diagnostic(const OffspringLaw& law, std::uint64_t m,
                                   std::uint64_t replicates, Rng& rng,
                                   std::uint64_t survivor_minimum = kDefaultSurvivorMinimum);

}  // namespace brwlab
