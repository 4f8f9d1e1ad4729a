#include "splab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "splab/bootstrap.hpp"
#include "splab/error.hpp"
#include "splab/kl_law.hpp"
#include "splab/limit_law.hpp"
#include "splab/mc_checks.hpp"
#include "splab/metrics.hpp"
#include "splab/models.hpp"
#include "splab/parallel.hpp"
#include "splab/perturbation.hpp"
#include "splab/sampling.hpp"
#include "splab/spectral.hpp"

namespace splab {

namespace {

const std::vector<std::pair<Experiment, std::string>>& experiment_names() {
  static const std::vector<std::pair<Experiment, std::string>> names{
      {Experiment::kQuantities, "quantities"},
      {Experiment::kPerturbationCheck, "perturbation-check"},
      {Experiment::kCltDistance, "clt-distance"},
      {Experiment::kBootstrapCoverage, "bootstrap-coverage"},
      {Experiment::kModelRelations, "model-relations"},
  };
  return names;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Experiment experiment_from_name(const std::string& name) {
  for (const auto& [e, n] : experiment_names()) {
    if (n == name) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string experiment_name(Experiment experiment) {
  for (const auto& [e, n] : experiment_names()) {
    if (e == experiment) return n;
  }
  return "unknown";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "experiment", "model", "a", "d", "spikes", "factors", "gap", "spread", "separation",
      "law", "p", "nu", "h", "multiplier", "j1", "j2", "block_mode", "j_grid", "d_grid", "i2",
      "n", "B", "mc_runs", "limit_draws", "alpha", "s", "q", "seed", "out", "format",
      "sigma_mc_draws", "tail_replicates", "instances", "max_dim", "norm_scale", "use_min_delta",
      "control_limit_draws", "unit_multipliers", "statistic_inflation",
  };
  return keys;
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size() || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + it->second + "'");
  }
  return v;
}

namespace {

std::int64_t parse_int(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

}  // namespace

std::int64_t ExperimentConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : parse_int(key, it->second);
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + it->second + "'");
}

std::vector<std::int64_t> ExperimentConfig::get_int_list(
    const std::string& key, const std::vector<std::int64_t>& fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  std::vector<std::int64_t> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(key, trim(item)));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::uint64_t ExperimentConfig::seed() const {
  if (!has("seed")) throw ConfigError("missing 'seed' (set it in the config or pass --seed)");
  const std::int64_t s = get_int("seed", 0);
  if (s < 0) throw ConfigError("'seed' must be non-negative");
  return static_cast<std::uint64_t>(s);
}

ExperimentConfig parse_config(std::istream& in) {
  const auto& keys = config_keys();
  const std::set<std::string> allowed(keys.begin(), keys.end());
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!allowed.count(key)) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (cfg.values.count(key)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    cfg.values[key] = value;
  }
  if (cfg.has("experiment")) cfg.experiment = experiment_from_name(cfg.get("experiment", ""));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void ExperimentReport::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw Error("report row has " + std::to_string(row.size()) + " cells for " +
                std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  const double v = std::get<double>(cell);
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  for (std::size_t c = 0; c < report.columns.size(); ++c) out << (c ? "," : "") << report.columns[c];
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
    out << '\n';
  }
}

namespace {

nlohmann::ordered_json cell_json(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  const double v = std::get<double>(cell);
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

void write_report_json(std::ostream& out, const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["experiment"] = experiment_name(report.experiment);
  j["version"] = kVersion;
  j["wall_time_s"] = report.wall_time_s;
  j["config"] = report.config;
  j["columns"] = report.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    for (std::size_t c = 0; c < row.size(); ++c) r[report.columns[c]] = cell_json(row[c]);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.summary) summary[k] = cell_json(v);
  j["summary"] = std::move(summary);
  j["invariant_violation"] = report.invariant_violation;
  j["warnings"] = report.warnings;
  j["note"] = "bound_* columns use constant 1 per term and natural logs; shape and trend only";
  out << j.dump(2) << '\n';
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Index require_n(std::int64_t n) {
  if (n < 2) throw ConfigError("n must be >= 2, got " + std::to_string(n));
  return static_cast<Index>(n);
}

Index positive(const ExperimentConfig& cfg, const std::string& key, std::int64_t fallback) {
  const std::int64_t v = cfg.get_int(key, fallback);
  if (v < 1) throw ConfigError("'" + key + "' must be >= 1");
  return static_cast<Index>(v);
}

std::string model_name(const ExperimentConfig& cfg) { return cfg.get("model", "exp-decay"); }

bool block_follows_spikes(const ExperimentConfig& cfg) {
  const std::string m = model_name(cfg);
  return m == "spiked" || m == "pervasive";
}

// The profile for a grid point; for spiked and pervasive models J is the
// number of spikes or factors.
EigenProfile make_profile(const ExperimentConfig& cfg, Index d, Index spikes) {
  const std::string m = model_name(cfg);
  if (m == "exp-decay") return ExpDecay{cfg.get_double("a", 1.0), d};
  if (m == "poly-decay") return PolyDecay{cfg.get_double("a", 2.0), d};
  if (m == "spiked") return Spiked{spikes, cfg.get_double("gap", 0.5), cfg.get_double("spread", 2.0), d};
  if (m == "pervasive") {
    return Pervasive{spikes, cfg.get_double("separation", 0.5), cfg.get_double("spread", 2.0), d};
  }
  throw ConfigError("unknown model '" + m + "'");
}

Index default_dim(const ExperimentConfig& cfg) {
  const std::string m = model_name(cfg);
  if (m == "poly-decay") return 50;
  if (m == "spiked") return 12;
  return 20;
}

KLLaw make_law(const ExperimentConfig& cfg) {
  std::optional<double> nu;
  std::optional<double> h;
  if (cfg.has("nu")) nu = cfg.get_double("nu", 0.0);
  if (cfg.has("h")) h = cfg.get_double("h", 0.5);
  const std::string name = cfg.get("law", "gaussian");
  if (name != "gaussian" && name != "student" && name != "rademacher-product" && name != "two-point") {
    throw ConfigError("unknown law '" + name + "'");
  }
  return KLLaw::from_name(name, cfg.get_double("p", 4.0), nu, h);
}

MultiplierLaw make_multiplier(const ExperimentConfig& cfg) {
  const std::string name = cfg.get("multiplier", "gaussian");
  if (name != "gaussian" && name != "sqrt-exponential") throw ConfigError("unknown multiplier '" + name + "'");
  return MultiplierLaw::from_name(name);
}

struct GridPoint {
  EigenProfile profile;
  IndexBlock block;
};

std::vector<GridPoint> model_grid(const ExperimentConfig& cfg) {
  const auto d_grid = cfg.get_int_list("d_grid", {cfg.get_int("d", default_dim(cfg))});
  const std::string mode = cfg.get("block_mode", "fixed");
  if (mode != "fixed" && mode != "leading" && mode != "single") {
    throw ConfigError("block_mode must be fixed, leading or single");
  }
  std::vector<GridPoint> grid;
  for (std::int64_t d : d_grid) {
    if (d < 1) throw ConfigError("d must be >= 1");
    if (block_follows_spikes(cfg)) {
      const std::string key = model_name(cfg) == "spiked" ? "spikes" : "factors";
      for (std::int64_t j : cfg.get_int_list("j_grid", {cfg.get_int(key, 1)})) {
        if (j < 1) throw ConfigError("block size must be >= 1");
        grid.push_back({make_profile(cfg, d, j), IndexBlock::leading(j)});
      }
      continue;
    }
    if (cfg.has("j_grid")) {
      if (mode == "fixed") throw ConfigError("j_grid needs block_mode = leading or single");
      for (std::int64_t j : cfg.get_int_list("j_grid", {})) {
        if (j < 1) throw ConfigError("j_grid entries must be >= 1");
        const IndexBlock b = mode == "leading" ? IndexBlock::leading(j) : IndexBlock::single(j);
        grid.push_back({make_profile(cfg, d, 0), b});
      }
    } else {
      const std::int64_t j1 = cfg.get_int("j1", 1);
      const std::int64_t j2 = cfg.get_int("j2", j1);
      if (j1 < 1 || j2 < j1) throw ConfigError("need 1 <= j1 <= j2");
      grid.push_back({make_profile(cfg, d, 0), IndexBlock(j1, j2)});
    }
  }
  for (const auto& g : grid) {
    if (g.block.covers(profile_dim(g.profile)) || g.block.j2() > profile_dim(g.profile)) {
      throw ConfigError("block " + g.block.to_string() + " invalid for d = " +
                        std::to_string(profile_dim(g.profile)));
    }
  }
  return grid;
}

Truncation make_truncation(const ExperimentConfig& cfg, Index d) {
  if (!cfg.has("i2")) return std::nullopt;
  const std::int64_t i2 = cfg.get_int("i2", 0);
  if (i2 < 1 || i2 > d) throw ConfigError("i2 must lie in [1, d]");
  return IndexBlock::leading(i2);
}

std::vector<Index> n_grid(const ExperimentConfig& cfg, std::int64_t fallback) {
  std::vector<Index> out;
  for (std::int64_t n : cfg.get_int_list("n", {fallback})) out.push_back(require_n(n));
  return out;
}

double alpha_of(const ExperimentConfig& cfg) {
  const double alpha = cfg.get_double("alpha", 0.10);
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  return alpha;
}

// Bound shape total, or NaN when the theorem needs a quantity the spectrum lacks.
double try_bound(Theorem t, const BoundInputs& in) {
  try {
    return bound_shape(t, in).total;
  } catch (const InvalidInput&) {
    return kNaN;
  }
}

ExperimentReport run_quantities(const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentReport rep;
  rep.columns = {"model", "d", "j1", "j2", "n", "g_J", "r_J", "sigma_J", "sigma_J_mc",
                 "psi_max", "psi_min", "A_J", "B_J", "C_J", "cb3", "lambda_12", "lambda_16",
                 "qprob", "A_trunc", "tail_freq_c1", "tail_freq_c2", "tail_freq_c4"};
  const std::uint64_t seed = cfg.seed();
  const KLLaw law = make_law(cfg);
  const Index sigma_draws = cfg.get_int("sigma_mc_draws", 0);
  const Index tail_reps = cfg.get_int("tail_replicates", 0);
  if (sigma_draws != 0 && sigma_draws < 10000) throw ConfigError("sigma_mc_draws must be 0 or >= 10000");
  if (tail_reps != 0 && tail_reps < 200) throw ConfigError("tail_replicates must be 0 or >= 200");
  const auto ns = n_grid(cfg, 1000);

  std::uint64_t point = 0;
  for (const auto& g : model_grid(cfg)) {
    check_block(g.profile, g.block);
    const SpectralModel model = build_model(g.profile);
    const Truncation trunc = make_truncation(cfg, model.dim());
    const PsiSpectrum psi = psi_spectrum(model, g.block, law);
    const LimitLawSummary sum = limit_summary(psi);
    const double sigma = sigma_J_analytic(model, g.block, law);
    const double sigma_mc =
        sigma_draws > 0 ? sigma_J_mc(model, g.block, law, sigma_draws, derive_seed(seed, StreamRole::kSigma, point))
                        : kNaN;
    const double r = relative_rank(model, g.block);
    const auto sorted = psi.sorted_values();
    for (Index n : ns) {
      double f1 = kNaN, f2 = kNaN, f4 = kNaN;
      if (tail_reps > 0) {
        const auto tail = delta_tail_check(model, g.block, law, n, tail_reps,
                                           derive_seed(seed, StreamRole::kData, point, static_cast<std::uint64_t>(n)),
                                           opt.threads, {cfg.get_bool("use_min_delta", false)});
        f1 = tail.frequency[0];
        f2 = tail.frequency[1];
        f4 = tail.frequency[2];
      }
      rep.add_row({profile_name(g.profile), static_cast<std::int64_t>(model.dim()),
                   static_cast<std::int64_t>(g.block.j1()), static_cast<std::int64_t>(g.block.j2()),
                   static_cast<std::int64_t>(n), gap(model, g.block), r, sigma, sigma_mc, sorted.front(),
                   sorted.back(), sum.a, sum.b, sum.c, std::pow(sum.c / sum.b, 3),
                   sorted.size() >= 2 ? sum.lambda_12() : kNaN, sorted.size() >= 6 ? sum.lambda_16() : kNaN,
                   qprob(n, law.moment_order(), r, sigma),
                   a_J_truncation_remainder(model, g.block, law, trunc), f1, f2, f4});
    }
    ++point;
  }
  return rep;
}

struct Ratio {
  std::string name;
  double value;
};

std::vector<Ratio> declared_ratios(const EigenProfile& profile, const SpectralModel& model, const IndexBlock& block,
                                   bool singletons, double r, double sigma, const LimitLawSummary& s) {
  // J is the last index of the block: {1..J} or {J}.
  const double j = static_cast<double>(block.j2());
  const double d = static_cast<double>(model.dim());
  const double sigma2 = sigma * sigma;
  if (std::holds_alternative<ExpDecay>(profile)) {
    return {{"r_over_J", r / j}, {"sigma2_over_J", sigma2 / j}, {"A", s.a}, {"B", s.b}, {"C", s.c}};
  }
  if (std::holds_alternative<PolyDecay>(profile)) {
    const double jl = j * std::log(j);
    const double jjl = j * j * std::log(j);
    std::vector<Ratio> out{{"r_over_JlogJ", jl > 0 ? r / jl : kNaN},
                           {"sigma2_over_J2logJ", jjl > 0 ? sigma2 / jjl : kNaN}};
    if (singletons) {
      out.push_back({"A_over_J2", s.a / (j * j)});
      out.push_back({"B_over_J2", s.b / (j * j)});
      out.push_back({"C_over_J2", s.c / (j * j)});
    } else {
      out.push_back({"A_over_J2logJ", jjl > 0 ? s.a / jjl : kNaN});
      out.push_back({"B_over_J2", s.b / (j * j)});
      out.push_back({"C_over_J2", s.c / (j * j)});
    }
    return out;
  }
  if (const auto* sp = std::get_if<Spiked>(&profile)) {
    const double g = sp->gap;
    return {{"A_over_dJ_g2", s.a / (d * j / (g * g))}, {"B2_over_dJ_g4", s.b * s.b / (d * j / std::pow(g, 4))}};
  }
  const IndexBlock tail(block.j2() + 1, model.dim());
  const double scale = j * subset_trace(model, tail) / model.lambda(block.last());
  return {{"A_over_J_trJc_lambdaJ", s.a / scale}};
}

ExperimentReport run_model_relations(const ExperimentConfig& cfg, const RunOptions&) {
  ExperimentReport rep;
  const KLLaw law = make_law(cfg);
  const bool singletons = cfg.get("block_mode", "fixed") == "single";
  std::vector<std::vector<Ratio>> all;
  std::vector<std::vector<Cell>> base;
  for (const auto& g : model_grid(cfg)) {
    check_block(g.profile, g.block);
    const SpectralModel model = build_model(g.profile);
    const LimitLawSummary s = limit_summary(psi_spectrum(model, g.block, law));
    const double r = relative_rank(model, g.block);
    const double sigma = sigma_J_analytic(model, g.block, law);
    all.push_back(declared_ratios(g.profile, model, g.block, singletons, r, sigma, s));
    base.push_back({profile_name(g.profile), static_cast<std::int64_t>(model.dim()),
                    static_cast<std::int64_t>(g.block.j1()), static_cast<std::int64_t>(g.block.j2()), r,
                    sigma * sigma, s.a, s.b, s.c});
  }
  rep.columns = {"model", "d", "j1", "j2", "r_J", "sigma2_J", "A_J", "B_J", "C_J"};
  for (const auto& ratio : all.front()) rep.columns.push_back("ratio_" + ratio.name);
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto row = base[i];
    for (const auto& ratio : all[i]) row.emplace_back(ratio.value);
    rep.add_row(std::move(row));
  }
  bool all_within = true;
  for (std::size_t k = 0; k < all.front().size(); ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& ratios : all) {
      if (!std::isfinite(ratios[k].value)) continue;
      lo = std::min(lo, ratios[k].value);
      hi = std::max(hi, ratios[k].value);
    }
    const double band = hi > 0.0 ? hi / lo : kNaN;
    rep.summary.emplace_back("band_" + all.front()[k].name, band);
    all_within = all_within && band <= 2.0;
  }
  rep.summary.emplace_back("all_within_factor_2", std::string(all_within ? "true" : "false"));
  return rep;
}

// One randomized perturbation instance, keyed by its index.
struct PerturbationInstance {
  EigenProfile profile;
  IndexBlock block;
  SymOperatord e;
};

PerturbationInstance random_instance(std::uint64_t seed, std::uint64_t index, Index max_dim, double norm_scale) {
  Engine rng = make_stream(seed, StreamRole::kOperator, index);
  auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto integer = [&rng](Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng); };

  const int kind = static_cast<int>(index % 4);
  Index d = integer(kind == 2 ? 6 : 2, std::max<Index>(max_dim, kind == 2 ? 6 : 2));
  EigenProfile profile = ExpDecay{uniform(0.1, 1.0), d};
  std::optional<IndexBlock> block;
  switch (kind) {
    case 0: break;
    case 1: profile = PolyDecay{uniform(1.1, 3.0), d}; break;
    case 2: {
      const Index spikes = integer(1, d / 2);
      profile = Spiked{spikes, uniform(0.05, 1.0), uniform(1.5, 3.0), d};
      const Index j1 = integer(1, spikes);
      block = IndexBlock(j1, integer(j1, spikes));
      break;
    }
    default: {
      const Index factors = integer(1, std::min<Index>(5, d - 1));
      profile = Pervasive{factors, uniform(0.1, 0.9), uniform(1.5, 4.0), d};
      break;
    }
  }
  if (!block) {
    Index j1 = integer(1, d);
    Index j2 = integer(j1, d);
    if (j1 == 1 && j2 == d) j2 = d - 1;
    block = IndexBlock(j1, j2);
  }

  const SpectralModel model = build_model(profile);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index k = 0; k <= i; ++k) g(i, k) = g(k, i) = normal(rng);
  }
  const double target = uniform(0.0, 1.0) * norm_scale * model.lambda(d - 1);
  const double norm = schatten_norm(SymOperatord(g), kSchattenInf);
  SymOperatord e(g * (norm > 0.0 ? target / norm : 0.0));
  return {profile, *block, std::move(e)};
}

ExperimentReport run_perturbation_check(const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentReport rep;
  rep.columns = {"instance", "model", "d", "j1", "j2", "norm_E", "delta", "lhs0", "rhs0",
                 "lhs2", "rhs2", "lhs_cor", "rhs_cor", "pass"};
  const std::uint64_t seed = cfg.seed();
  const Index instances = positive(cfg, "instances", 1000);
  const Index max_dim = positive(cfg, "max_dim", 30);
  const double norm_scale = cfg.get_double("norm_scale", 1.0);
  if (max_dim < 2) throw ConfigError("max_dim must be >= 2");
  if (!(norm_scale >= 0.0)) throw ConfigError("norm_scale must be >= 0");

  struct Out {
    std::vector<Cell> row;
    PerturbationRecord rec;
  };
  std::vector<Out> outs(static_cast<std::size_t>(instances));
  parallel_for(outs.size(), opt.threads, [&](std::size_t i) {
    const auto inst = random_instance(seed, i, max_dim, norm_scale);
    const SpectralModel model = build_model(inst.profile);
    const auto rec = perturbation_check(model, inst.block, inst.e);
    outs[i] = {{static_cast<std::int64_t>(i), profile_name(inst.profile), static_cast<std::int64_t>(model.dim()),
                static_cast<std::int64_t>(inst.block.j1()), static_cast<std::int64_t>(inst.block.j2()),
                schatten_norm(inst.e, kSchattenInf), rec.delta, rec.lhs0, rec.rhs0, rec.lhs2, rec.rhs2,
                rec.lhs_cor, rec.rhs_cor, std::string(rec.pass ? "true" : "false")},
               rec};
  });

  std::int64_t violations = 0;
  std::int64_t large = 0;
  double max0 = 0.0, max2 = 0.0;
  for (auto& o : outs) {
    violations += o.rec.pass ? 0 : 1;
    large += o.rec.delta >= 0.25 ? 1 : 0;
    max0 = std::max(max0, o.rec.ratio0());
    max2 = std::max(max2, o.rec.ratio2());
    rep.add_row(std::move(o.row));
  }
  rep.summary.emplace_back("violations", violations);
  rep.summary.emplace_back("max_ratio_eq0", max0);
  rep.summary.emplace_back("max_ratio_eq2", max2);
  rep.summary.emplace_back("instances_delta_ge_quarter", large);
  rep.invariant_violation = violations > 0;
  return rep;
}

ExperimentReport run_clt_distance(const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentReport rep;
  rep.columns = {"n", "mc_runs", "limit_draws", "mean_stat", "A_J", "B_J", "ks", "w1", "noise_floor",
                 "ks_normal", "cb3", "bound_clt_I", "bound_clt_II_a", "bound_clt_III"};
  const std::uint64_t seed = cfg.seed();
  const KLLaw law = make_law(cfg);
  const Index mc_runs = positive(cfg, "mc_runs", 2000);
  const Index limit_draws = positive(cfg, "limit_draws", 100000);
  const bool control = cfg.get_bool("control_limit_draws", false);
  const double s = cfg.get_double("s", 0.5);
  const double q = cfg.get_double("q", 3.0);
  const auto ns = n_grid(cfg, 1000);
  const auto grid = model_grid(cfg);
  if (grid.size() != 1) throw ConfigError("clt-distance takes a single model and block (no grids)");
  if (limit_draws < 10 * mc_runs) rep.warnings.push_back("limit_draws < 10 * mc_runs");

  const auto& g = grid.front();
  check_block(g.profile, g.block);
  const SpectralModel model = build_model(g.profile);
  const PsiSpectrum psi = psi_spectrum(model, g.block, law);
  const LimitLawSummary sum = limit_summary(psi);
  const SampleVector limit(sample_limit_stat(psi, limit_draws, seed));

  for (Index n : ns) {
    const std::uint64_t n_seed = derive_seed(seed, StreamRole::kData, static_cast<std::uint64_t>(n));
    std::vector<double> stats;
    if (control) {
      stats = sample_limit_stat(psi, mc_runs, n_seed);
    } else {
      stats.resize(static_cast<std::size_t>(mc_runs));
      parallel_for(stats.size(), opt.threads, [&](std::size_t r) {
        stats[r] = projector_statistic(sample_dataset(model, law, n, n_seed, r), g.block);
      });
    }
    double mean = 0.0;
    for (double x : stats) mean += x;
    mean /= static_cast<double>(stats.size());
    std::vector<double> standardized(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) standardized[i] = (stats[i] - sum.a) / sum.b;
    const SampleVector sample(std::move(stats));
    const BoundInputs in = bound_inputs(model, g.block, law, n, s, q);
    rep.add_row({static_cast<std::int64_t>(n), static_cast<std::int64_t>(mc_runs),
                 static_cast<std::int64_t>(limit_draws), mean, sum.a, sum.b, ks_two_sample(sample, limit),
                 wasserstein1(sample, limit), ks_noise_floor(sample.size(), limit.size()),
                 ks_vs_normal(SampleVector(std::move(standardized))), std::pow(sum.c / sum.b, 3),
                 try_bound(Theorem::kCltI, in), try_bound(Theorem::kCltIIa, in), try_bound(Theorem::kCltIII, in)});
  }
  return rep;
}

ExperimentReport run_bootstrap_coverage(const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentReport rep;
  rep.columns = {"n", "B", "mc_runs", "alpha", "rejection_rate", "binomial_se", "abs_error",
                 "bound_boot_A", "bound_boot_B"};
  const std::uint64_t seed = cfg.seed();
  const auto grid = model_grid(cfg);
  if (grid.size() != 1) throw ConfigError("bootstrap-coverage takes a single model and block (no grids)");
  const auto& g = grid.front();
  const double alpha = alpha_of(cfg);
  const Index mc_runs = positive(cfg, "mc_runs", 400);
  if (mc_runs < 50) throw ConfigError("mc_runs must be >= 50");
  const double s = cfg.get_double("s", 0.5);
  const double q = cfg.get_double("q", 3.0);
  const double inflation = cfg.get_double("statistic_inflation", 1.0);
  if (!(inflation > 0.0)) throw ConfigError("statistic_inflation must be > 0");

  for (Index n : n_grid(cfg, 1000)) {
    CoverageSpec spec{g.profile, make_law(cfg), make_multiplier(cfg), g.block, n,
                      positive(cfg, "B", 499), mc_runs, alpha,
                      derive_seed(seed, StreamRole::kModel, static_cast<std::uint64_t>(n)),
                      {cfg.get_bool("unit_multipliers", false), inflation}};
    const auto rec = coverage_experiment(spec, opt.threads);
    const SpectralModel model = build_model(g.profile);
    const BoundInputs in = bound_inputs(model, g.block, spec.law, n, s, q, make_truncation(cfg, model.dim()));
    rep.add_row({static_cast<std::int64_t>(n), static_cast<std::int64_t>(spec.replicates),
                 static_cast<std::int64_t>(mc_runs), alpha, rec.rejection_rate, rec.binomial_se,
                 std::abs(rec.rejection_rate - alpha), try_bound(Theorem::kBootA, in),
                 try_bound(Theorem::kBootB, in)});
  }
  return rep;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  if (!config.experiment) throw ConfigError("no experiment selected");
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  switch (*config.experiment) {
    case Experiment::kQuantities: rep = run_quantities(config, options); break;
    case Experiment::kPerturbationCheck: rep = run_perturbation_check(config, options); break;
    case Experiment::kCltDistance: rep = run_clt_distance(config, options); break;
    case Experiment::kBootstrapCoverage: rep = run_bootstrap_coverage(config, options); break;
    case Experiment::kModelRelations: rep = run_model_relations(config, options); break;
  }
  rep.experiment = *config.experiment;
  rep.config = config.values;
  rep.config["experiment"] = experiment_name(*config.experiment);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace splab
