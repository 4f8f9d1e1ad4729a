// splab <experiment> --config <path> [--seed N] [--out <path>] [--format csv|json] [--threads K]

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "splab/error.hpp"
#include "splab/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo harness for relative perturbation bounds of spectral projectors"};
  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format;
  int threads = 0;

  app.add_option("experiment", experiment,
                 "quantities | perturbation-check | clt-distance | bootstrap-coverage | model-relations")
      ->required();
  app.add_option("--config", config_path, "flat key=value config file")->required();
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--out", out_path, "output path (default: config 'out' or stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  splab::ExperimentReport report;
  std::string fmt;
  try {
    splab::ExperimentConfig cfg = splab::load_config(config_path);
    const auto selected = splab::experiment_from_name(experiment);
    if (cfg.experiment && *cfg.experiment != selected) {
      throw splab::ConfigError("config names experiment '" + splab::experiment_name(*cfg.experiment) +
                               "' but '" + experiment + "' was requested");
    }
    cfg.experiment = selected;
    if (seed) cfg.values["seed"] = std::to_string(*seed);
    if (!format.empty()) cfg.values["format"] = format;
    if (!out_path.empty()) cfg.values["out"] = out_path;
    fmt = cfg.get("format", "csv");
    if (fmt != "csv" && fmt != "json") throw splab::ConfigError("format must be csv or json");
    out_path = cfg.get("out", "");
    // Output location and format never change the payload.
    cfg.values.erase("out");
    cfg.values.erase("format");
    report = splab::run_experiment(cfg, {threads});
  } catch (const splab::Error& e) {
    std::cerr << "splab: " << e.what() << '\n';
    return kExitConfig;
  }

  for (const auto& w : report.warnings) std::cerr << "splab: warning: " << w << '\n';

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "splab: cannot write '" << out_path << "'\n";
      return kExitConfig;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  if (fmt == "json") {
    splab::write_report_json(out, report);
  } else {
    splab::write_report_csv(out, report);
  }

  if (report.invariant_violation) {
    std::cerr << "splab: invariant violation detected\n";
    return kExitInvariant;
  }
  return 0;
}
