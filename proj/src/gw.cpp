#include "brwlab/gw.hpp"

#include <algorithm>
#include <cmath>

#include "brwlab/errors.hpp"
#include "brwlab/stats.hpp"

namespace brwlab {

double survival_probability(const OffspringLaw& law, std::uint64_t m) {
  if (m == 0) return 1.0;
  switch (law.kind()) {
    case LawKind::geometric_half:
      // f(s) = 1/(2-s) iterates to m/(m+1) at 0, so rho_m = 1/(m+1) exactly.
      return 1.0 / (static_cast<double>(m) + 1.0);
    case LawKind::binary: {
      // rho' = 1 - f(1 - rho) = rho - rho^2/2, iterated without cancellation.
      double rho = 1.0;
      for (std::uint64_t i = 0; i < m; ++i) rho -= 0.5 * rho * rho;
      return rho;
    }
    case LawKind::poisson1: {
      double rho = 1.0;
      for (std::uint64_t i = 0; i < m; ++i) rho = -std::expm1(-rho);
      return rho;
    }
    case LawKind::custom: {
      double rho = 1.0;
      for (std::uint64_t i = 0; i < m; ++i) rho = 1.0 - law.pgf(1.0 - rho);
      return rho;
    }
  }
  return 0.0;
}

double conditional_mean_given_survival(const OffspringLaw& law, std::uint64_t m) {
  return 1.0 / survival_probability(law, m);
}

std::vector<GWSnapshot> simulate_gw(const OffspringLaw& law, std::uint64_t z0,
                                    std::uint64_t horizon, Rng& rng, std::uint64_t ceiling) {
  std::vector<GWSnapshot> out;
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(horizon, 4096)) + 1);
  std::uint64_t z = z0;
  out.push_back({0, z});
  for (std::uint64_t gen = 1; gen <= horizon && z > 0; ++gen) {
    z = law.sample_sum(rng, z);
    if (z > ceiling) throw PopulationOverflow(ceiling);
    out.push_back({gen, z});
  }
  return out;
}

YaglomDiagnostic yaglom_diagnostic(const OffspringLaw& law, std::uint64_t m,
                                   std::uint64_t replicates, Rng& rng,
                                   std::uint64_t survivor_minimum) {
  std::vector<double> scaled;
  double mean_acc = 0.0;
  for (std::uint64_t rep = 0; rep < replicates; ++rep) {
    std::uint64_t z = 1;
    for (std::uint64_t gen = 0; gen < m && z > 0; ++gen) {
      z = law.sample_sum(rng, z);
      if (z > kPopulationCeiling) throw PopulationOverflow(kPopulationCeiling);
    }
    if (z > 0) {
      scaled.push_back(static_cast<double>(z) / static_cast<double>(m));
      mean_acc += static_cast<double>(z);
    }
  }
  if (scaled.size() < survivor_minimum) {
    throw InsufficientSurvivors(scaled.size(), survivor_minimum);
  }
  double rate = 2.0 / law.variance();  // Exp with mean sigma^2/2
  double ks = ks_statistic(scaled, [rate](double x) { return -std::expm1(-rate * x); });
  return {ks, scaled.size(), mean_acc / static_cast<double>(scaled.size())};
}

}  // namespace brwlab
