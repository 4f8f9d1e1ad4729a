#include "splab/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "splab/error.hpp"
#include "splab/parallel.hpp"

namespace splab {

MultiplierLaw MultiplierLaw::from_name(const std::string& name) {
  if (name == "gaussian") return gaussian();
  if (name == "sqrt-exponential") return sqrt_exponential();
  throw InvalidInput("unknown multiplier law '" + name + "'");
}

std::string MultiplierLaw::name() const {
  return kind_ == Kind::kGaussian ? "gaussian" : "sqrt-exponential";
}

double MultiplierLaw::draw(Engine& rng) const {
  if (kind_ == Kind::kGaussian) return std::normal_distribution<double>()(rng);
  return std::sqrt(std::exponential_distribution<double>(1.0)(rng));
}

namespace {

// (1/n) sum w_i^2 X_i X_i^T through the same rank update as Sigma-hat.
SymOperatord weighted_covariance(const Eigen::MatrixXd& rows, const Eigen::VectorXd& w) {
  const Index d = rows.cols();
  const Eigen::MatrixXd scaled = w.asDiagonal() * rows;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
  s.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose(), 1.0 / static_cast<double>(rows.rows()));
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return SymOperatord(s);
}

double quantile_from_sorted(const std::vector<double>& sorted, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("bootstrap_quantile: alpha must be in (0, 1)");
  if (sorted.empty()) throw InvalidInput("bootstrap_quantile: empty replicate vector");
  const double m = static_cast<double>(sorted.size());
  auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * m - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

}  // namespace

BootstrapContext::BootstrapContext(const Dataset& data, const IndexBlock& block)
    : rows_(data.rows), block_(block) {
  if (data.n() < 1) throw InvalidInput("BootstrapContext: empty dataset");
  block.check(data.dim());
  p_hat_ = splab::projector(eigh(weighted_covariance(rows_, Eigen::VectorXd::Ones(data.n()))), block);
}

double bootstrap_distance(const BootstrapContext& ctx, const Eigen::VectorXd& w) {
  if (w.size() != ctx.n()) throw InvalidInput("bootstrap_distance: need one multiplier per row");
  const SymOperatord p_tilde = projector(eigh(weighted_covariance(ctx.rows(), w)), ctx.block());
  return hs_distance_sq(p_tilde, ctx.projector());
}

double bootstrap_replicate(const BootstrapContext& ctx, const MultiplierLaw& law, std::uint64_t seed,
                           std::uint64_t replicate, const BootstrapHooks& hooks) {
  Eigen::VectorXd w(ctx.n());
  if (hooks.unit_multipliers) {
    w.setOnes();
  } else {
    Engine rng = make_stream(seed, StreamRole::kMultiplier, replicate);
    for (Index i = 0; i < w.size(); ++i) w(i) = law.draw(rng);
  }
  const double n = static_cast<double>(ctx.n());
  return hooks.statistic_inflation * n / law.sigma_w2() * bootstrap_distance(ctx, w);
}

BootstrapRun bootstrap_run(const BootstrapContext& ctx, const MultiplierLaw& law, Index replicates,
                           std::uint64_t seed, int threads, const BootstrapHooks& hooks) {
  if (replicates < 1) throw InvalidInput("bootstrap_run: need at least one replicate");
  BootstrapRun run;
  run.seed = seed;
  run.statistics.resize(static_cast<std::size_t>(replicates));
  parallel_for(run.statistics.size(), threads, [&](std::size_t b) {
    run.statistics[b] = bootstrap_replicate(ctx, law, seed, b, hooks);
  });
  return run;
}

double bootstrap_quantile(const BootstrapRun& run, double alpha) {
  auto sorted = run.statistics;
  std::sort(sorted.begin(), sorted.end());
  return quantile_from_sorted(sorted, alpha);
}

double CoverageRecord::rejection_rate_at(double level) const {
  if (runs.empty()) return 0.0;
  std::size_t rejected = 0;
  for (const auto& r : runs) rejected += r.statistic > quantile_from_sorted(r.bootstrap_sorted, level) ? 1 : 0;
  return static_cast<double>(rejected) / static_cast<double>(runs.size());
}

CoverageRecord coverage_experiment(const CoverageSpec& spec, int threads) {
  if (spec.mc_runs < 50) throw InvalidInput("coverage_experiment: need mc_runs >= 50");
  if (spec.n < 2) throw InvalidInput("coverage_experiment: need n >= 2");
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw InvalidInput("coverage_experiment: alpha must be in (0, 1)");
  check_block(spec.profile, spec.block);
  const SpectralModel model = build_model(spec.profile);

  CoverageRecord rec;
  rec.alpha = spec.alpha;
  rec.runs.resize(static_cast<std::size_t>(spec.mc_runs));
  parallel_for(rec.runs.size(), threads, [&](std::size_t r) {
    const Dataset data = sample_dataset(model, spec.law, spec.n, spec.seed, r);
    const BootstrapContext ctx(data, spec.block);
    CoverageRun& out = rec.runs[r];
    out.statistic = static_cast<double>(spec.n) *
                    hs_distance_sq(ctx.projector(), coordinate_projector<double>(model.dim(), spec.block));
    const std::uint64_t run_seed = derive_seed(spec.seed, StreamRole::kMultiplier, r);
    out.bootstrap_sorted = bootstrap_run(ctx, spec.multiplier, spec.replicates, run_seed, 1, spec.hooks).statistics;
    std::sort(out.bootstrap_sorted.begin(), out.bootstrap_sorted.end());
  });

  rec.rejection_rate = rec.rejection_rate_at(spec.alpha);
  rec.binomial_se = std::sqrt(spec.alpha * (1.0 - spec.alpha) / static_cast<double>(spec.mc_runs));
  return rec;
}

}  // namespace splab
