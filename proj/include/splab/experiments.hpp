#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace splab {

inline constexpr const char* kVersion = "0.1.0";

enum class Experiment { kQuantities, kPerturbationCheck, kCltDistance, kBootstrapCoverage, kModelRelations };

Experiment experiment_from_name(const std::string& name);
std::string experiment_name(Experiment experiment);

/// Parsed flat key=value configuration. Lines starting with '#' and blank
/// lines are ignored; unknown keys raise ConfigError.
struct ExperimentConfig {
  std::optional<Experiment> experiment;
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::int64_t> get_int_list(const std::string& key,
                                         const std::vector<std::int64_t>& fallback) const;
  std::uint64_t seed() const;
};

/// Keys accepted in a config file.
const std::vector<std::string>& config_keys();

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

using Cell = std::variant<std::int64_t, double, std::string>;

struct ExperimentReport {
  Experiment experiment = Experiment::kQuantities;
  std::map<std::string, std::string> config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> warnings;
  /// Set when a checked inequality failed (CLI exit code 3).
  bool invariant_violation = false;
  double wall_time_s = 0.0;

  void add_row(std::vector<Cell> row);
};

struct RunOptions {
  int threads = 0;
};

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Header row plus one line per record; numbers printed with %.12g.
void write_report_csv(std::ostream& out, const ExperimentReport& report);
/// Nested JSON including summary, warnings, wall time and version.
void write_report_json(std::ostream& out, const ExperimentReport& report);

std::string format_cell(const Cell& cell);

}  // namespace splab
