#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "splab/index_block.hpp"
#include "splab/kl_law.hpp"
#include "splab/models.hpp"
#include "splab/operator_core.hpp"
#include "splab/rng.hpp"
#include "splab/sampling.hpp"

namespace splab {

/// Law of the bootstrap multipliers w_i, normalized so E w^2 = 1.
class MultiplierLaw {
 public:
  enum class Kind { kGaussian, kSqrtExponential };

  static MultiplierLaw gaussian() { return MultiplierLaw(Kind::kGaussian); }
  /// w = sqrt(eps) with eps standard exponential.
  static MultiplierLaw sqrt_exponential() { return MultiplierLaw(Kind::kSqrtExponential); }
  static MultiplierLaw from_name(const std::string& name);

  Kind kind() const { return kind_; }
  std::string name() const;
  /// sigma_w^2 = E (w^2 - 1)^2.
  double sigma_w2() const { return kind_ == Kind::kGaussian ? 2.0 : 1.0; }

  double draw(Engine& rng) const;

 private:
  explicit MultiplierLaw(Kind kind) : kind_(kind) {}
  Kind kind_;
};

/// Test hooks. Both default to the plain procedure.
struct BootstrapHooks {
  /// Force every w_i = 1, so Sigma-tilde = Sigma-hat.
  bool unit_multipliers = false;
  /// Multiplies every bootstrap statistic; stands in for a grossly inflated
  /// multiplier variance that is still normalized by the nominal sigma_w^2.
  double statistic_inflation = 1.0;
};

/// Data and P-hat_J fixed across bootstrap replicates.
class BootstrapContext {
 public:
  BootstrapContext(const Dataset& data, const IndexBlock& block);

  const Eigen::MatrixXd& rows() const { return rows_; }
  const IndexBlock& block() const { return block_; }
  const SymOperatord& projector() const { return p_hat_; }
  Index n() const { return rows_.rows(); }

 private:
  Eigen::MatrixXd rows_;
  IndexBlock block_;
  SymOperatord p_hat_;
};

/// ||P-tilde_J - P-hat_J||_2^2 for explicit multipliers, Sigma-tilde = (1/n) sum w_i^2 X_i X_i^T.
double bootstrap_distance(const BootstrapContext& ctx, const Eigen::VectorXd& w);

/// (n / sigma_w^2) ||P-tilde_J - P-hat_J||_2^2 with multipliers drawn from
/// the substream (seed, kMultiplier, replicate).
double bootstrap_replicate(const BootstrapContext& ctx, const MultiplierLaw& law, std::uint64_t seed,
                           std::uint64_t replicate = 0, const BootstrapHooks& hooks = {});

struct BootstrapRun {
  std::vector<double> statistics;
  std::uint64_t seed = 0;
};

BootstrapRun bootstrap_run(const BootstrapContext& ctx, const MultiplierLaw& law, Index replicates,
                           std::uint64_t seed, int threads = 1, const BootstrapHooks& hooks = {});

/// ceil((1 - alpha) B)-th order statistic of the replicate vector.
double bootstrap_quantile(const BootstrapRun& run, double alpha);

struct CoverageSpec {
  EigenProfile profile;
  KLLaw law = KLLaw::gaussian();
  MultiplierLaw multiplier = MultiplierLaw::gaussian();
  IndexBlock block{1, 1};
  Index n = 1000;
  Index replicates = 499;
  Index mc_runs = 400;
  double alpha = 0.10;
  std::uint64_t seed = 0;
  BootstrapHooks hooks;
};

/// One Monte Carlo run: the true statistic and its bootstrap replicates (sorted).
struct CoverageRun {
  double statistic = 0.0;
  std::vector<double> bootstrap_sorted;
};

struct CoverageRecord {
  double alpha = 0.0;
  double rejection_rate = 0.0;
  double binomial_se = 0.0;
  std::vector<CoverageRun> runs;

  /// Rejection rate for another level, reusing the stored replicates.
  double rejection_rate_at(double alpha) const;
};

/// Data for run r come from (seed, kData, r). Run r bootstraps with the seed
/// derive_seed(seed, kMultiplier, r), so replicate b uses its own substream b.
CoverageRecord coverage_experiment(const CoverageSpec& spec, int threads = 1);

}  // namespace splab
