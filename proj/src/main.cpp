#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "brwlab/brw.hpp"
#include "brwlab/errors.hpp"
#include "brwlab/exact_probs.hpp"
#include "brwlab/experiments.hpp"
#include "brwlab/feller.hpp"
#include "brwlab/gw.hpp"
#include "brwlab/report.hpp"
#include "brwlab/walk.hpp"

namespace {

using namespace brwlab;

std::string resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  const char* env = std::getenv("BRWLAB_OUT");
  if (env && *env) return env;
  return "out";
}

// Common state for one experiment subcommand; flag values are kept as raw
// strings so file config and flag overrides share one typed parser.
struct ExperimentCli {
  ExperimentKind kind = ExperimentKind::survival_curve;
  CLI::App* cmd = nullptr;
  std::string config_path, out, beta, n, n_grid, law, alpha, t, y, delta, replicates, seed,
      survivor_minimum;
  int workers = 1;
  bool timing = false;

  std::map<std::string, CLI::Option*> opts;

  void add_flags() {
    opts["config"] = cmd->add_option("--config", config_path, "flat key=value settings file");
    opts["out"] = cmd->add_option("--out", out, "output directory (or env BRWLAB_OUT)");
    opts["beta"] = cmd->add_option("--beta", beta, "drift coefficient");
    auto* on = cmd->add_option("--n", n, "single lattice scale (shorthand for --n-grid n)");
    auto* og = cmd->add_option("--n-grid", n_grid, "comma-separated lattice scales");
    on->excludes(og);
    og->excludes(on);
    opts["n"] = on;
    opts["n_grid"] = og;
    opts["law"] = cmd->add_option("--law", law, "offspring law: binary|geom|poisson1");
    opts["alpha"] = cmd->add_option("--alpha", alpha, "horizon exponent (> 1)");
    opts["t"] = cmd->add_option("--t", t, "macroscopic time");
    opts["y"] = cmd->add_option("--y", y, "initial mass density");
    opts["delta"] = cmd->add_option("--delta", delta, "total-mass exceedance threshold");
    opts["replicates"] = cmd->add_option("--replicates", replicates, "replicates per cell");
    opts["seed"] = cmd->add_option("--seed", seed, "master seed");
    opts["survivor_minimum"] =
        cmd->add_option("--survivor-minimum", survivor_minimum, "minimum surviving replicates");
    cmd->add_option("--workers", workers, "worker threads (never changes results)");
    cmd->add_flag("--timing", timing, "record wall-clock in meta (off keeps reports bit-stable)");
  }

  int run() const {
    KeyValueMap kv;
    if (!config_path.empty()) kv = parse_config_file(config_path);
    auto override_if = [&](const char* key, const std::string& value) {
      if (opts.at(key)->count() > 0) kv[key] = value;
    };
    override_if("beta", beta);
    if (opts.at("n")->count() > 0) kv["n_grid"] = n;
    if (opts.at("n_grid")->count() > 0) kv["n_grid"] = n_grid;
    override_if("law", law);
    override_if("alpha", alpha);
    override_if("t", t);
    override_if("y", y);
    override_if("delta", delta);
    override_if("replicates", replicates);
    override_if("seed", seed);
    override_if("survivor_minimum", survivor_minimum);
    kv["experiment"] = experiment_name(kind);
    ExperimentConfig config = config_from_kv(kv);
    config.workers = workers;
    config.record_wallclock = timing;
    ExperimentReport report = run_experiment(config);
    std::string out_dir = resolve_out_dir(out);
    write_report_files(report, out_dir);
    for (const auto& cell : report.cells) {
      for (const auto& [name, v] : cell.verdicts) {
        std::cout << (v.pass ? "pass" : "FAIL") << "  n=" << cell.n << "  " << name
                  << "  (tolerance " << v.tolerance << ")\n";
      }
    }
    std::cout << "report: " << out_dir << "/report.json\n";
    return report.all_pass() ? 0 : 1;
  }
};

int run_simulate_brw(double beta_v, std::uint64_t n_v, const std::string& law_s,
                     std::uint64_t particles, std::uint64_t start, std::uint64_t horizon,
                     const std::string& snapshots_s, std::uint64_t seed,
                     const std::string& out) {
  WalkParams wp(beta_v, n_v);
  OffspringLaw law = law_from_name(law_s);
  std::vector<std::uint64_t> snaps;
  if (!snapshots_s.empty()) snaps = to_uint_list("snapshots", snapshots_s);
  snaps.push_back(horizon);
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
  Rng rng(seed, derive_stream({0x51ull, n_v, 0}));
  BRWRunRecord rec = run_to_horizon(SiteConfiguration::single(start, particles), wp, law,
                                    horizon, snaps, rng);
  std::string out_dir = resolve_out_dir(out);
  std::string csv = "generation,site,count\n";
  for (const auto& snap : rec.snapshots) {
    for (const auto& [site, count] : snap.counts) {
      csv += std::to_string(snap.generation) + "," + std::to_string(site) + "," +
             std::to_string(count) + "\n";
    }
  }
  write_text_file(out_dir + "/snapshots.csv", csv);
  Json j = Json::object();
  j.set("survived", Json::boolean(rec.survived));
  j.set("horizon", Json::uinteger(rec.horizon));
  if (rec.rightmost_at_horizon) {
    j.set("rightmost_at_horizon", Json::uinteger(*rec.rightmost_at_horizon));
  }
  write_text_file(out_dir + "/run.json", j.dump() + "\n");
  std::cout << (rec.survived ? "survived" : "extinct") << ", snapshots: " << out_dir
            << "/snapshots.csv\n";
  return 0;
}

int run_exact_prob(double beta_v, std::uint64_t n_v, std::uint64_t start, std::uint64_t m,
                   const std::string& out) {
  WalkParams wp(beta_v, n_v);
  TransitionRow dp = rw_dp_transition_prob(wp, start, m);
  KacRow kac = kac_transition_row(wp, start, m);
  std::string csv = "site,dp,main,remainder,value,abs_diff\n";
  for (std::uint64_t k = 0; k < dp.probs.size(); ++k) {
    csv += std::to_string(k) + "," + csv_double(dp.probs[k]);
    if (k == 0) {
      csv += ",,,,\n";  // the spectral row serves sites >= 1 only
      continue;
    }
    double value = kac.value_at(k);
    csv += "," + csv_double(kac.main_term[k]) + "," + csv_double(kac.remainder[k]) + "," +
           csv_double(value) + "," + csv_double(std::fabs(value - dp.probs[k])) + "\n";
  }
  std::string out_dir = resolve_out_dir(out);
  write_text_file(out_dir + "/exact_prob.csv", csv);
  std::cout << "wrote " << out_dir << "/exact_prob.csv\n";
  return 0;
}

int run_gw_stats(const std::string& law_s, const std::string& m_grid_s, const std::string& out) {
  OffspringLaw law = law_from_name(law_s);
  std::vector<std::uint64_t> ms = {1, 10, 100, 1000, 10000, 100000};
  if (!m_grid_s.empty()) ms = to_uint_list("m_grid", m_grid_s);
  std::string csv = "m,rho,kolmogorov_product\n";
  for (std::uint64_t m : ms) {
    double rho = survival_probability(law, m);
    csv += std::to_string(m) + "," + csv_double(rho) + "," +
           csv_double(static_cast<double>(m) * rho * law.variance() / 2.0) + "\n";
  }
  std::string out_dir = resolve_out_dir(out);
  write_text_file(out_dir + "/gw_stats.csv", csv);
  std::cout << "wrote " << out_dir << "/gw_stats.csv\n";
  return 0;
}

int run_feller(double y, double t, double sigma2, std::uint64_t replicates,
               const std::string& method, double dt, std::uint64_t seed,
               const std::string& out) {
  std::string csv = "sample,mass\n";
  Rng rng(seed, derive_stream({0xFEull, 0, 0}));
  for (std::uint64_t i = 0; i < replicates; ++i) {
    double mass = method == "euler" ? feller_euler_marginal(y, sigma2, t, dt, rng)
                                    : feller_exact_marginal(y, sigma2, t, rng);
    csv += std::to_string(i) + "," + csv_double(mass) + "\n";
  }
  std::string out_dir = resolve_out_dir(out);
  write_text_file(out_dir + "/feller_marginals.csv", csv);
  std::cout << "wrote " << out_dir << "/feller_marginals.csv\n";
  return 0;
}

int run_validate() {
  int failures = 0;
  auto check = [&](const char* name, bool ok, const std::string& detail = "") {
    if (ok) {
      std::cout << "ok: " << name << "\n";
    } else {
      ++failures;
      std::cout << "FAIL: " << name << (detail.empty() ? "" : "  (" + detail + ")") << "\n";
    }
  };

  {
    Rng r = Rng::from_raw({5, 6}, {2, 2, 3, 4});
    bool ok = r.next_u64() == 0x92ab6a0e75619263ull && r.next_u64() == 0xd8ff75bdc6bf8f60ull &&
              r.next_u64() == 0x450e124938725640ull && r.next_u64() == 0x94eb1a7cffd20cbbull;
    check("rng known-answer block", ok);
  }
  {
    WalkParams wp(0.5, 100);
    double worst = 0.0;
    for (std::uint64_t start : {0ull, 3ull}) {
      for (std::uint64_t m : {1ull, 4ull, 9ull}) {
        TransitionRow dp = rw_dp_transition_prob(wp, start, m);
        KacRow kac = kac_transition_row(wp, start, m);
        for (std::uint64_t k = 1; k < dp.probs.size(); ++k) {
          worst = std::max(worst, std::fabs(kac.value_at(k) - dp.probs[k]));
        }
      }
    }
    check("spectral row matches dp", worst < 1e-10, "worst " + csv_double(worst));
    KacDecomposition odd = kac_transition_prob(wp, 0, 2, 1);
    check("parity annihilation", odd.main_term == 0.0 && odd.remainder == 0.0);
  }
  {
    WalkParams wp(0.5, 100);
    Rng rng(7, 1);
    bool dominated = true, ordered = true;
    for (int rep = 0; rep < 200; ++rep) {
      auto [biased, simple] = coupled_biased_vs_reflected(wp, 0, 500, rng);
      for (std::size_t i = 0; i < biased.positions.size(); ++i) {
        if (biased.positions[i] > simple.positions[i]) dominated = false;
      }
      auto [lo, hi] = coupled_monotone_pair(wp, 0, 4, 500, rng);
      bool met = false;
      for (std::size_t i = 0; i < lo.positions.size(); ++i) {
        if (lo.positions[i] > hi.positions[i]) ordered = false;
        if (met && lo.positions[i] != hi.positions[i]) ordered = false;
        if (lo.positions[i] == hi.positions[i]) met = true;
      }
    }
    check("drift coupling dominance", dominated);
    check("monotone coupling order and coalescence", ordered);
  }
  {
    bool ok = true;
    for (const auto& law :
         {OffspringLaw::binary(), OffspringLaw::geometric_half(), OffspringLaw::poisson1()}) {
      if (std::fabs(law.pgf(1.0) - 1.0) > 1e-12) ok = false;
      double total = 0.0, mean = 0.0;
      for (std::uint64_t k = 0; k < 64; ++k) {
        total += law.pmf(k);
        mean += static_cast<double>(k) * law.pmf(k);
      }
      if (std::fabs(total - 1.0) > 1e-12 || std::fabs(mean - 1.0) > 1e-9) ok = false;
    }
    check("offspring pmf/pgf identities", ok);
    bool exact = true;
    for (std::uint64_t m = 1; m <= 50; ++m) {
      if (survival_probability(OffspringLaw::geometric_half(), m) !=
          1.0 / (static_cast<double>(m) + 1.0)) {
        exact = false;
      }
    }
    check("geometric survival closed form", exact);
  }
  {
    ExponentialProfile prof{0.5};
    double whole = profile_mass(prof, 0.0, 2.0);
    double split = profile_mass(prof, 0.0, 1.0) + profile_mass(prof, 1.0, 2.0);
    check("profile additivity", whole == split);
    SiteConfiguration cfg = SiteConfiguration::from_pairs({{0, 3}, {7, 2}});
    BinnedMass bm = occupation_measure(cfg, 10.0, {0.0, 0.5, 1.0});
    check("occupation binning example",
          bm.masses.size() == 2 && bm.masses[0] == 3.0 && bm.masses[1] == 2.0 &&
              bm.overflow == 0.0);
  }
  std::cout << (failures == 0 ? "validate: all ok\n" : "validate: failures\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and exact-computation lab for critical branching random walks "
               "with reflecting drift"};
  app.require_subcommand(1);

  std::vector<std::shared_ptr<ExperimentCli>> experiments;
  auto add_experiment = [&](const char* name, ExperimentKind kind, const char* desc) {
    auto state = std::make_shared<ExperimentCli>();
    state->kind = kind;
    state->cmd = app.add_subcommand(name, desc);
    state->add_flags();
    experiments.push_back(state);
  };
  add_experiment("max-displacement", ExperimentKind::max_displacement,
                 "rightmost-particle scaling conditioned on survival");
  add_experiment("profile", ExperimentKind::profile,
                 "spatial profile against the exponential limit shape");
  add_experiment("total-mass", ExperimentKind::total_mass,
                 "total-mass exceedance against the diffusion limit");
  add_experiment("survival-curve", ExperimentKind::survival_curve,
                 "exact survival curve and branching-simulation consistency");

  auto* sim = app.add_subcommand("simulate-brw", "run one branching random walk");
  double sim_beta = 0.5;
  std::uint64_t sim_n = 100, sim_particles = 1, sim_start = 0, sim_horizon = 0, sim_seed = 1;
  std::string sim_law = "geometric_half", sim_snapshots, sim_out;
  sim->add_option("--beta", sim_beta, "drift coefficient");
  sim->add_option("--n", sim_n, "lattice scale");
  sim->add_option("--law", sim_law, "offspring law");
  sim->add_option("--particles", sim_particles, "initial particles");
  sim->add_option("--start", sim_start, "initial site");
  sim->add_option("--horizon", sim_horizon, "generations (default floor(n^1.2))");
  sim->add_option("--snapshots", sim_snapshots, "comma-separated snapshot generations");
  sim->add_option("--seed", sim_seed, "seed");
  sim->add_option("--out", sim_out, "output directory");

  auto* exact = app.add_subcommand("exact-prob", "transition row: dp and spectral form");
  double ep_beta = 0.5;
  std::uint64_t ep_n = 100, ep_start = 0, ep_m = 4;
  std::string ep_out;
  exact->add_option("--beta", ep_beta, "drift coefficient");
  exact->add_option("--n", ep_n, "lattice scale");
  exact->add_option("--start", ep_start, "start site");
  exact->add_option("--m", ep_m, "steps");
  exact->add_option("--out", ep_out, "output directory");

  auto* gws = app.add_subcommand("gw-stats", "exact survival probabilities");
  std::string gw_law = "geometric_half", gw_mgrid, gw_out;
  gws->add_option("--law", gw_law, "offspring law");
  gws->add_option("--m-grid", gw_mgrid, "comma-separated generations");
  gws->add_option("--out", gw_out, "output directory");

  auto* fel = app.add_subcommand("feller", "sample diffusion marginals");
  double fe_y = 1.0, fe_t = 1.0, fe_sigma2 = 2.0, fe_dt = 0.0;
  std::uint64_t fe_replicates = 100000, fe_seed = 1;
  std::string fe_method = "exact", fe_out;
  fel->add_option("--y", fe_y, "initial mass");
  fel->add_option("--t", fe_t, "time");
  fel->add_option("--sigma2", fe_sigma2, "diffusion variance parameter");
  fel->add_option("--replicates", fe_replicates, "samples");
  fel->add_option("--method", fe_method, "exact|euler");
  fel->add_option("--dt", fe_dt, "euler step (default 1e-3*t)");
  fel->add_option("--seed", fe_seed, "seed");
  fel->add_option("--out", fe_out, "output directory");

  auto* val = app.add_subcommand("validate", "fast invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& state : experiments) {
      if (state->cmd->parsed()) return state->run();
    }
    if (sim->parsed()) {
      if (sim_horizon == 0) {
        sim_horizon = static_cast<std::uint64_t>(
            std::floor(std::pow(static_cast<double>(sim_n), 1.2) + 1e-9));
      }
      return run_simulate_brw(sim_beta, sim_n, sim_law, sim_particles, sim_start, sim_horizon,
                              sim_snapshots, sim_seed, sim_out);
    }
    if (exact->parsed()) return run_exact_prob(ep_beta, ep_n, ep_start, ep_m, ep_out);
    if (gws->parsed()) return run_gw_stats(gw_law, gw_mgrid, gw_out);
    if (fel->parsed()) {
      if (fe_dt <= 0.0) fe_dt = default_feller_dt(fe_t);
      return run_feller(fe_y, fe_t, fe_sigma2, fe_replicates, fe_method, fe_dt, fe_seed, fe_out);
    }
    if (val->parsed()) return run_validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
