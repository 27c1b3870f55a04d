#include "doctest.h"

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "brwlab/config.hpp"
#include "brwlab/errors.hpp"
#include "brwlab/experiments.hpp"
#include "brwlab/report.hpp"

using namespace brwlab;

namespace {

ExperimentConfig small_total_mass_config() {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::total_mass;
  cfg.beta = 0.5;
  cfg.n_grid = {30};
  cfg.law = OffspringLaw::geometric_half();
  cfg.alpha = 1.2;
  cfg.t = 1.0;
  cfg.y = 1.0;
  cfg.delta = 0.25;
  cfg.replicates = 2000;
  cfg.master_seed = 91;
  return cfg;
}

}  // namespace

TEST_CASE("total mass report is byte-identical across worker counts") {
  ExperimentConfig cfg = small_total_mass_config();
  cfg.workers = 1;
  ExperimentReport serial = run_total_mass(cfg);
  cfg.workers = 3;
  ExperimentReport threaded = run_total_mass(cfg);
  CHECK(report_to_json(serial).dump() == report_to_json(threaded).dump());
  CHECK(raw_csv(serial) == raw_csv(threaded));

  // Same seed and worker count replays the identical report.
  ExperimentReport replay = run_total_mass(cfg);
  CHECK(report_to_json(threaded).dump() == report_to_json(replay).dump());

  // The scaled mass is a martingale started from y, so the mean check holds.
  REQUIRE(serial.cells.size() == 1);
  CHECK(serial.cells[0].verdicts.at("mean_mass_matches").pass);
}

TEST_CASE("report json carries the full schema") {
  ExperimentConfig cfg = small_total_mass_config();
  ExperimentReport report = run_total_mass(cfg);
  nlohmann::json doc = nlohmann::json::parse(report_to_json(report).dump());

  REQUIRE(doc.contains("config"));
  REQUIRE(doc.contains("cells"));
  REQUIRE(doc.contains("meta"));
  CHECK(doc.size() == 3);

  const auto& jc = doc["config"];
  CHECK(jc["experiment"] == "total_mass");
  CHECK(jc["law"] == "geometric_half");
  CHECK(jc["beta"] == 0.5);
  CHECK(jc["n_grid"] == nlohmann::json::array({30}));
  CHECK(jc["replicates"] == 2000);
  CHECK(jc["master_seed"] == 91);
  CHECK(jc["delta"] == 0.25);

  REQUIRE(doc["cells"].is_array());
  REQUIRE(doc["cells"].size() == 1);
  const auto& cell = doc["cells"][0];
  CHECK(cell["n"] == 30);
  const auto& mean = cell["estimates"]["mean_mass_scaled"];
  CHECK(mean.contains("value"));
  CHECK(mean.contains("stderr"));
  CHECK(mean["count"] == 2000);
  // The configured delta joins the standard thresholds.
  for (const char* tag : {"0", "0.25", "0.5", "1"}) {
    CHECK(cell["estimates"].contains(std::string("exceedance_delta_") + tag));
    CHECK(cell["theory"].contains(std::string("feller_exceedance_delta_") + tag));
    const auto& verdict =
        cell["verdicts"][std::string("exceedance_delta_") + tag + "_matches"];
    CHECK(verdict.contains("pass"));
    CHECK(verdict["tolerance"].get<double>() > 0.0);
  }
  // The zero threshold is matched against a closed form, not reference draws.
  CHECK(cell["theory"]["feller_exceedance_delta_0_se"] == 0.0);

  const auto& meta = doc["meta"];
  CHECK(meta["rng"] == "philox4x64-10");
  CHECK(meta["version"] == "0.1.0");
  CHECK(meta["seed"] == 91);
  CHECK(meta["wallclock_s"] == 0.0);
  CHECK(meta["events"]["replicates_total"] == 2000);
  CHECK(meta["events"]["theory_draws_total"] == 1000000);
}

TEST_CASE("raw csv has one labelled row per replicate") {
  ExperimentConfig cfg = small_total_mass_config();
  cfg.replicates = 50;
  ExperimentReport report = run_total_mass(cfg);
  std::string csv = raw_csv(report);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    lines.push_back(csv.substr(pos, end - pos));
    pos = end + 1;
  }
  REQUIRE(lines.size() == 51);
  CHECK(lines[0] == "replicate,n,survived,statistic_name,value");
  CHECK(lines[1].rfind("0,30,", 0) == 0);
  CHECK(lines[1].find("total_mass_scaled") != std::string::npos);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i].find(",30,") != std::string::npos);
  }
}

TEST_CASE("survival curve verdicts hold at modest budgets") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::survival_curve;
  cfg.beta = 0.5;
  cfg.n_grid = {100};
  cfg.law = OffspringLaw::geometric_half();
  cfg.replicates = 2000;
  cfg.master_seed = 92;
  ExperimentReport report = run_survival_curve(cfg);
  REQUIRE(report.cells.size() == 1);
  const ReportCell& cell = report.cells[0];
  CHECK(cell.verdicts.at("kolmogorov_limit").pass);
  CHECK(cell.verdicts.at("geometric_closed_form").pass);
  CHECK(cell.verdicts.at("brw_survival_matches_pgf").pass);
  CHECK(report.all_pass());
  CHECK(cell.theory.at("rho_m_100000") == 1.0 / 100001.0);
  CHECK(cell.theory.at("kolmogorov_product_m_1") == doctest::Approx(0.5));
  CHECK(report.raw.size() == 2000);
  CHECK(report.raw.front().statistic == "brw_survived_m_1000");
}

TEST_CASE("report bundle lands in the expected files") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::survival_curve;
  cfg.n_grid = {50};
  cfg.law = OffspringLaw::binary();
  cfg.replicates = 20;
  cfg.master_seed = 93;
  ExperimentReport report = run_survival_curve(cfg);
  std::string dir = "/tmp/brwlab_test_bundle";
  write_report_files(report, dir);

  nlohmann::json doc = nlohmann::json::parse(read_text_file(dir + "/report.json"));
  CHECK(doc["config"]["experiment"] == "survival_curve");
  CHECK(doc["config"]["law"] == "binary");
  // The binary law has no bit-exact closed form, so that verdict is absent.
  CHECK(!doc["cells"][0]["verdicts"].contains("geometric_closed_form"));

  std::string csv = read_text_file(dir + "/raw.csv");
  CHECK(csv.rfind("replicate,n,survived,statistic_name,value\n", 0) == 0);

  std::string curve = read_text_file(dir + "/curves/survival_curve.csv");
  CHECK(curve.rfind("m,rho,kolmogorov_product\n", 0) == 0);
  CHECK(curve.find("\n100000,") != std::string::npos);
}

TEST_CASE("run_experiment dispatches on the configured kind") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::survival_curve;
  cfg.n_grid = {40};
  cfg.replicates = 10;
  cfg.master_seed = 94;
  ExperimentReport direct = run_survival_curve(cfg);
  ExperimentReport dispatched = run_experiment(cfg);
  CHECK(report_to_json(direct).dump() == report_to_json(dispatched).dump());
}
