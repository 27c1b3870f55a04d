#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "brwlab/config.hpp"
#include "brwlab/gw.hpp"
#include "brwlab/offspring.hpp"
#include "brwlab/report.hpp"
#include "brwlab/walk.hpp"

namespace brwlab {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind { max_displacement, profile, total_mass, survival_curve };

std::string experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);
OffspringLaw law_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::survival_curve;
  double beta = 0.5;
  std::vector<std::uint64_t> n_grid = {100};
  OffspringLaw law = OffspringLaw::geometric_half();
  double alpha = 1.2;
  double t = 1.0;
  double y = 1.0;
  double delta = 0.0;
  std::uint64_t replicates = 1000;
  std::uint64_t master_seed = 1;
  std::uint64_t survivor_minimum = kDefaultSurvivorMinimum;
  int workers = 1;
  bool record_wallclock = false;  // kept off so reruns are byte-identical

  void validate() const;
};

// Builds a config from flat key=value settings; unknown keys are errors.
ExperimentConfig config_from_kv(const KeyValueMap& kv);

struct EstimateCell {
  double value = 0.0;
  double stderr_of_mean = 0.0;
  std::uint64_t count = 0;
};

struct Verdict {
  bool pass = false;
  double tolerance = 0.0;
};

struct ReportCell {
  std::uint64_t n = 0;
  std::map<std::string, EstimateCell> estimates;
  std::map<std::string, double> theory;
  std::map<std::string, Verdict> verdicts;
};

struct RawRow {
  std::uint64_t replicate = 0;
  std::uint64_t n = 0;
  bool survived = false;
  std::string statistic;
  double value = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReportCell> cells;
  double wallclock_s = 0.0;
  std::map<std::string, std::uint64_t> events;
  std::vector<RawRow> raw;

  bool all_pass() const;
};

// Pilot-calibrated acceptance bands, versioned and checked in; the build
// stamps the default file location.
struct ToleranceBands {
  std::uint64_t version = 0;
  double max_displacement_median_center = 0.0;
  double max_displacement_median_halfwidth = 0.0;
  double profile_ks_mean_max = 0.0;
  double total_mass_finite_n_slack = 0.0;

  static ToleranceBands from_file(const std::string& path);
  static ToleranceBands load_default();
};

ExperimentReport run_max_displacement(const ExperimentConfig& config);
ExperimentReport run_profile(const ExperimentConfig& config);
ExperimentReport run_total_mass(const ExperimentConfig& config);
ExperimentReport run_survival_curve(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);

Json report_to_json(const ExperimentReport& report);
std::string raw_csv(const ExperimentReport& report);
// Writes report.json, raw.csv, and curves/*.csv under out_dir.
void write_report_files(const ExperimentReport& report, const std::string& out_dir);

}  // namespace brwlab
