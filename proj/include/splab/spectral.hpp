#pragma once

#include <optional>

#include <Eigen/Core>

#include "splab/index_block.hpp"
#include "splab/operator_core.hpp"

namespace splab {

class KLLaw;

/// Population covariance in its own eigenbasis: lambda_1 > ... > lambda_d > 0,
/// eigenvectors are the standard basis vectors.
class SpectralModel {
 public:
  explicit SpectralModel(Eigen::VectorXd lambdas);

  Index dim() const { return lambdas_.size(); }
  const Eigen::VectorXd& lambdas() const { return lambdas_; }
  /// 0-based access.
  double lambda(Index k) const { return lambdas_(k); }

  SymOperatord covariance() const { return SymOperatord::diagonal(lambdas_); }

  /// Same model with every eigenvalue multiplied by c > 0.
  SpectralModel scaled(double c) const;

 private:
  Eigen::VectorXd lambdas_;
};

/// Optional truncation set I = {1, ..., i2}; std::nullopt means "full".
using Truncation = std::optional<IndexBlock>;

/// Spectral gap g_J; one-sided at the ends of the index range.
double gap(const SpectralModel& model, const IndexBlock& block);

/// Diagonal of |R_{J^c}|^{1/2} + g_J^{-1/2} P_J.
Eigen::VectorXd congruence_weights(const SpectralModel& model, const IndexBlock& block);

/// First-order term L_J A (or L_{J,I} A when a truncation is given).
SymOperatord linear_term(const SpectralModel& model, const IndexBlock& block, const SymOperatord& a,
                         const Truncation& truncation = std::nullopt);

struct DeltaOptions {
  /// Report min(delta_J, delta_{J^c}) when J^c is itself an interval.
  bool use_min_delta = false;
};

/// Relative perturbation size delta_J(E).
double delta_J(const SpectralModel& model, const IndexBlock& block, const SymOperatord& e,
               const DeltaOptions& options = {});

/// Relative rank r_J.
double relative_rank(const SpectralModel& model, const IndexBlock& block);

/// Eigenvalues of the covariance of the transformed vector used in sigma_J.
/// For j1 = 1 the transform is built around J^c instead of J.
Eigen::VectorXd transformed_eigenvalues(const SpectralModel& model, const IndexBlock& block);

/// Closed-form sigma_J under fourth-order cumulant uncorrelatedness.
double sigma_J_analytic(const SpectralModel& model, const IndexBlock& block, const KLLaw& law);

/// Subset trace tr_I(Sigma) over a 1-based inclusive block.
double subset_trace(const SpectralModel& model, const IndexBlock& block, int power = 1);

namespace detail {
/// Congruence weights used by sigma_J and r_J: those of J, or of J^c = {j2+1..d} when j1 = 1.
Eigen::VectorXd sigma_weights(const SpectralModel& model, const IndexBlock& block);
void require_complement(const SpectralModel& model, const IndexBlock& block);
void check_truncation(const Truncation& truncation, Index dim);
}  // namespace detail

}  // namespace splab
