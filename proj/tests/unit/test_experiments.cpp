#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "splab/error.hpp"
#include "splab/experiments.hpp"
#include "splab/metrics.hpp"

namespace {

using splab::ExperimentConfig;
using splab::ExperimentReport;

ExperimentConfig config(const std::string& text) {
  std::istringstream in(text);
  return splab::parse_config(in);
}

std::string csv(const ExperimentReport& rep) {
  std::ostringstream out;
  splab::write_report_csv(out, rep);
  return out.str();
}

std::size_t column(const ExperimentReport& rep, const std::string& name) {
  for (std::size_t c = 0; c < rep.columns.size(); ++c)
    if (rep.columns[c] == name) return c;
  ADD_FAILURE() << "no column " << name;
  return 0;
}

double number(const splab::Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  ADD_FAILURE() << "not a number";
  return 0.0;
}

const splab::Cell& summary(const ExperimentReport& rep, const std::string& key) {
  for (const auto& [k, v] : rep.summary)
    if (k == key) return v;
  throw std::runtime_error("no summary key " + key);
}

TEST(Config, ParsesCommentsAndValues) {
  const auto cfg = config("# comment\nexperiment = quantities\n\nmodel=poly-decay\n  a = 2.5 \nseed=7\n");
  EXPECT_EQ(cfg.experiment, splab::Experiment::kQuantities);
  EXPECT_EQ(cfg.get("model", ""), "poly-decay");
  EXPECT_DOUBLE_EQ(cfg.get_double("a", 0), 2.5);
  EXPECT_EQ(cfg.seed(), 7u);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(config("bogus=1\n"), splab::ConfigError);
  EXPECT_THROW(config("seed=1\nseed=2\n"), splab::ConfigError);
  EXPECT_THROW(config("seed\n"), splab::ConfigError);
  EXPECT_THROW(config("seed=\n"), splab::ConfigError);
  EXPECT_THROW(config("experiment=nope\n"), splab::ConfigError);
  EXPECT_THROW(config("a=abc\n").get_double("a", 0), splab::ConfigError);
  EXPECT_THROW(config("experiment=quantities\n").seed(), splab::ConfigError);
  EXPECT_THROW(splab::run_experiment(config("experiment=quantities\nseed=1\nn=1\n")), splab::ConfigError);
  EXPECT_THROW(splab::run_experiment(config("experiment=quantities\nseed=1\nlaw=cauchy\n")), splab::ConfigError);
  EXPECT_THROW(splab::load_config("/nonexistent/file.cfg"), splab::ConfigError);
}

TEST(Quantities, PolyDecayRelativeRankStable) {
  const auto rep = splab::run_experiment(
      config("experiment=quantities\nseed=1\nmodel=poly-decay\na=2\nd=1000\nblock_mode=leading\nj_grid=2,4,8,16\n"));
  ASSERT_EQ(rep.rows.size(), 4u);
  const auto rc = column(rep, "r_J");
  double lo = 1e300, hi = 0;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const double j = number(rep.rows[i][column(rep, "j2")]);
    const double ratio = number(rep.rows[i][rc]) / (j * std::log(j));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_LE(hi / lo, 2.0);
}

TEST(Quantities, ExpDecaySummariesStable) {
  const auto rep = splab::run_experiment(
      config("experiment=quantities\nseed=1\nmodel=exp-decay\na=1\nd=30\nblock_mode=leading\nj_grid=1,2,4,8\n"));
  for (const char* name : {"A_J", "B_J", "C_J"}) {
    double lo = 1e300, hi = 0;
    for (const auto& row : rep.rows) {
      lo = std::min(lo, number(row[column(rep, name)]));
      hi = std::max(hi, number(row[column(rep, name)]));
    }
    EXPECT_LE(hi / lo, 2.0) << name;
  }
}

TEST(Quantities, SpikedRatioRecordedAndMcColumns) {
  const auto rep = splab::run_experiment(config(
      "experiment=quantities\nseed=3\nmodel=spiked\nd=12\nspikes=2\ngap=0.5\nsigma_mc_draws=20000\ntail_replicates=200\nn=500\n"));
  ASSERT_EQ(rep.rows.size(), 1u);
  const double a = number(rep.rows[0][column(rep, "A_J")]);
  const double ratio = a / (12.0 * 2.0 / 0.25);
  EXPECT_TRUE(std::isfinite(ratio));
  EXPECT_GT(ratio, 0.0);
  const double s = number(rep.rows[0][column(rep, "sigma_J")]);
  EXPECT_NEAR(number(rep.rows[0][column(rep, "sigma_J_mc")]), s, 0.1 * s);
  EXPECT_GE(number(rep.rows[0][column(rep, "tail_freq_c1")]), number(rep.rows[0][column(rep, "tail_freq_c4")]));
}

TEST(PerturbationExperiment, ZeroViolationsAndLargeDeltaCovered) {
  const auto rep = splab::run_experiment(config("experiment=perturbation-check\nseed=5\ninstances=300\nmax_dim=30\n"));
  EXPECT_FALSE(rep.invariant_violation);
  EXPECT_EQ(number(summary(rep, "violations")), 0.0);
  EXPECT_LT(number(summary(rep, "max_ratio_eq0")), 1.0);
  EXPECT_LT(number(summary(rep, "max_ratio_eq2")), 1.0);
  EXPECT_GT(number(summary(rep, "instances_delta_ge_quarter")), 0.0);
}

TEST(CltDistance, IdenticalGeneratorControlWithinNoiseFloor) {
  const auto rep = splab::run_experiment(config(
      "experiment=clt-distance\nseed=9\nmodel=exp-decay\nd=10\nn=200\nmc_runs=1000\nlimit_draws=10000\n"
      "control_limit_draws=true\n"));
  ASSERT_EQ(rep.rows.size(), 1u);
  const double ks = number(rep.rows[0][column(rep, "ks")]);
  const double floor = number(rep.rows[0][column(rep, "noise_floor")]);
  EXPECT_LE(ks, 3.0 * floor);
}

TEST(CltDistance, WarnsWhenLimitDrawsTooFew) {
  const auto rep = splab::run_experiment(
      config("experiment=clt-distance\nseed=9\nd=6\nn=50\nmc_runs=100\nlimit_draws=500\n"));
  EXPECT_FALSE(rep.warnings.empty());
  const double cb3 = number(rep.rows[0][column(rep, "cb3")]);
  EXPECT_GT(cb3, 0.0);
  const double ksn = number(rep.rows[0][column(rep, "ks_normal")]);
  EXPECT_GE(ksn, 0.0);
  EXPECT_LE(ksn, 1.0);
}

TEST(Reproducibility, CsvIndependentOfThreads) {
  const char* configs[] = {
      "experiment=quantities\nseed=11\nmodel=poly-decay\nd=20\nblock_mode=leading\nj_grid=1,2,3\n"
      "sigma_mc_draws=10000\ntail_replicates=200\nn=300\n",
      "experiment=perturbation-check\nseed=12\ninstances=100\n",
      "experiment=clt-distance\nseed=13\nd=8\nn=100,200\nmc_runs=200\nlimit_draws=2000\n",
      "experiment=bootstrap-coverage\nseed=14\nd=8\nn=100\nB=49\nmc_runs=50\n",
      "experiment=model-relations\nseed=15\nmodel=exp-decay\nd=30\nblock_mode=leading\nj_grid=1,2,4\n",
  };
  for (const char* text : configs) {
    const auto cfg = config(text);
    const std::string one = csv(splab::run_experiment(cfg, {1}));
    const std::string again = csv(splab::run_experiment(cfg, {1}));
    const std::string three = csv(splab::run_experiment(cfg, {3}));
    EXPECT_EQ(one, again) << text;
    EXPECT_EQ(one, three) << text;
    EXPECT_GT(one.size(), 10u);
  }
}

TEST(Report, JsonCarriesVersionAndWallTime) {
  const auto rep = splab::run_experiment(config("experiment=perturbation-check\nseed=1\ninstances=5\n"));
  std::ostringstream out;
  splab::write_report_json(out, rep);
  const std::string s = out.str();
  EXPECT_NE(s.find("\"version\""), std::string::npos);
  EXPECT_NE(s.find("\"wall_time_s\""), std::string::npos);
  EXPECT_NE(s.find("\"summary\""), std::string::npos);
  EXPECT_EQ(splab::format_cell(std::nan("")), "nan");
}

class Cli : public ::testing::Test {
 protected:
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "splab_cli_test";
  void SetUp() override { std::filesystem::create_directories(dir); }
  void TearDown() override { std::filesystem::remove_all(dir); }

  std::filesystem::path write(const std::string& name, const std::string& text) {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p;
  }
  static int run(const std::string& args) {
    const int status = std::system((std::string(SPLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  }
};

TEST_F(Cli, ExitCodes) {
  const auto ok = write("ok.cfg", "experiment=perturbation-check\ninstances=20\n");
  const auto out = dir / "out.csv";
  EXPECT_EQ(run("perturbation-check --config " + ok.string() + " --seed 3 --out " + out.string()), 0);
  EXPECT_TRUE(std::filesystem::exists(out));
  EXPECT_EQ(run("perturbation-check --config " + ok.string()), 2);  // no seed anywhere
  EXPECT_EQ(run("quantities --config " + ok.string() + " --seed 3"), 2);  // experiment mismatch
  const auto bad = write("bad.cfg", "experiment=perturbation-check\nseed=1\ncolour=blue\n");
  EXPECT_EQ(run("perturbation-check --config " + bad.string()), 2);
  EXPECT_EQ(run("perturbation-check --config " + (dir / "missing.cfg").string()), 2);
  EXPECT_EQ(run("perturbation-check --config " + ok.string() + " --seed 3 --format xml"), 2);
}

TEST_F(Cli, JsonOutput) {
  const auto ok = write("ok.cfg", "experiment=perturbation-check\ninstances=5\nseed=4\n");
  const auto out = dir / "out.json";
  ASSERT_EQ(run("perturbation-check --config " + ok.string() + " --format json --out " + out.string()), 0);
  std::ifstream in(out);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text.front(), '{');
  EXPECT_NE(text.find("\"violations\""), std::string::npos);
}

}  // namespace
