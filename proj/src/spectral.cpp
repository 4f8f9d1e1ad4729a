#include "splab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splab/kl_law.hpp"

namespace splab {

SpectralModel::SpectralModel(Eigen::VectorXd lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.size() < 1) throw InvalidInput("SpectralModel: need at least one eigenvalue");
  for (Index k = 0; k < lambdas_.size(); ++k) {
    if (!std::isfinite(lambdas_(k)) || lambdas_(k) <= 0.0) {
      throw InvalidInput("SpectralModel: eigenvalues must be finite and positive");
    }
    if (k > 0 && !(lambdas_(k) < lambdas_(k - 1))) {
      throw InvalidInput("SpectralModel: eigenvalues must be strictly decreasing (index " +
                         std::to_string(k + 1) + ")");
    }
  }
}

SpectralModel SpectralModel::scaled(double c) const {
  if (!(c > 0.0)) throw InvalidInput("SpectralModel::scaled: factor must be positive");
  return SpectralModel(c * lambdas_);
}

namespace detail {

void require_complement(const SpectralModel& model, const IndexBlock& block) {
  block.check(model.dim());
  if (block.covers(model.dim())) {
    throw NoComplement("block " + block.to_string() + " covers all " + std::to_string(model.dim()) +
                       " indices");
  }
}

void check_truncation(const Truncation& truncation, Index dim) {
  if (!truncation) return;
  if (truncation->j1() != 1) throw InvalidInput("truncation set must be of the form {1..i2}");
  truncation->check(dim);
}

}  // namespace detail

double gap(const SpectralModel& model, const IndexBlock& block) {
  detail::require_complement(model, block);
  const auto& l = model.lambdas();
  const Index a = block.first();
  const Index b = block.last();
  double g = std::numeric_limits<double>::infinity();
  if (a > 0) g = std::min(g, l(a - 1) - l(a));
  if (b + 1 < model.dim()) g = std::min(g, l(b) - l(b + 1));
  return g;
}

Eigen::VectorXd congruence_weights(const SpectralModel& model, const IndexBlock& block) {
  const double g = gap(model, block);
  const auto& l = model.lambdas();
  const Index a = block.first();
  const Index b = block.last();
  Eigen::VectorXd t(model.dim());
  for (Index k = 0; k < model.dim(); ++k) {
    if (k < a) {
      t(k) = 1.0 / std::sqrt(l(k) - l(a));
    } else if (k > b) {
      t(k) = 1.0 / std::sqrt(l(b) - l(k));
    } else {
      t(k) = 1.0 / std::sqrt(g);
    }
  }
  return t;
}

SymOperatord linear_term(const SpectralModel& model, const IndexBlock& block, const SymOperatord& a,
                         const Truncation& truncation) {
  detail::require_complement(model, block);
  detail::check_truncation(truncation, model.dim());
  if (a.dim() != model.dim()) throw InvalidInput("linear_term: operator dimension mismatch");

  const Index d = model.dim();
  const Index k_end = truncation ? truncation->last() + 1 : d;
  const auto& l = model.lambdas();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (Index j = block.first(); j <= block.last(); ++j) {
    for (Index k = 0; k < k_end; ++k) {
      if (block.contains(k)) continue;
      const double v = a(j, k) / (l(j) - l(k));
      out(j, k) = v;
      out(k, j) = v;
    }
  }
  return SymOperatord(out);
}

namespace {

double congruence_norm(const SpectralModel& model, const IndexBlock& block, const SymOperatord& e) {
  const Eigen::VectorXd t = congruence_weights(model, block);
  const Eigen::MatrixXd m = t.asDiagonal() * e.matrix() * t.asDiagonal();
  return schatten_norm(SymOperatord(m), kSchattenInf);
}

}  // namespace

double delta_J(const SpectralModel& model, const IndexBlock& block, const SymOperatord& e,
               const DeltaOptions& options) {
  detail::require_complement(model, block);
  if (e.dim() != model.dim()) throw InvalidInput("delta_J: operator dimension mismatch");
  double delta = congruence_norm(model, block, e);
  if (options.use_min_delta) {
    if (const auto comp = block.complement_interval(model.dim())) {
      delta = std::min(delta, congruence_norm(model, *comp, e));
    }
  }
  return delta;
}

Eigen::VectorXd detail::sigma_weights(const SpectralModel& model, const IndexBlock& block) {
  require_complement(model, block);
  if (block.j1() == 1) return congruence_weights(model, IndexBlock(block.j2() + 1, model.dim()));
  return congruence_weights(model, block);
}

Eigen::VectorXd transformed_eigenvalues(const SpectralModel& model, const IndexBlock& block) {
  return model.lambdas().cwiseProduct(detail::sigma_weights(model, block).cwiseAbs2());
}

double relative_rank(const SpectralModel& model, const IndexBlock& block) {
  return transformed_eigenvalues(model, block).sum();
}

double sigma_J_analytic(const SpectralModel& model, const IndexBlock& block, const KLLaw& law) {
  if (!law.cumulant_uncorrelated(4)) {
    throw UnsupportedLaw("sigma_J_analytic: law '" + law.name() +
                         "' lacks fourth-order cumulant uncorrelatedness; use sigma_J_mc");
  }
  const Eigen::VectorXd theta = transformed_eigenvalues(model, block);
  const double alpha = law.cross_moment();
  const double kappa = law.excess_fourth();
  const double total = theta.sum();
  double best = 0.0;
  for (Index j = 0; j < theta.size(); ++j) {
    const double v = theta(j) * theta(j) * kappa + theta(j) * (total - theta(j)) * alpha;
    best = std::max(best, v);
  }
  return std::sqrt(best);
}

double subset_trace(const SpectralModel& model, const IndexBlock& block, int power) {
  block.check(model.dim());
  return model.lambdas().segment(block.first(), block.size()).array().pow(power).sum();
}

}  // namespace splab
