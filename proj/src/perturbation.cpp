#include "splab/perturbation.hpp"

#include <algorithm>
#include <cmath>

namespace splab {

PerturbationRecord perturbation_check(const SpectralModel& model, const IndexBlock& block,
                                      const SymOperatord& e) {
  detail::require_complement(model, block);
  const Index d = model.dim();
  const SymOperatord p = coordinate_projector<double>(d, block);
  const SymOperatord p_hat = projector(eigh(model.covariance() + e), block);
  const SymOperatord le = linear_term(model, block, e);

  PerturbationRecord r;
  r.delta = delta_J(model, block, e);
  const double m = static_cast<double>(std::min(block.size(), d - block.size()));
  const double root2 = std::sqrt(2.0);

  const Eigen::MatrixXd diff = p_hat.matrix() - p.matrix();
  r.lhs0 = diff.norm();
  r.rhs0 = 4.0 * root2 * std::sqrt(m) * r.delta;
  r.lhs2 = (diff - le.matrix()).norm();
  r.rhs2 = 20.0 * root2 * m * r.delta * r.delta;
  r.lhs_cor = std::abs(diff.squaredNorm() - le.matrix().squaredNorm());
  r.rhs_cor = 80.0 * std::pow(m, 1.5) * std::pow(r.delta, 3) + 800.0 * m * m * std::pow(r.delta, 4);

  r.pass = r.lhs0 <= r.rhs0 + kPerturbationSlack && r.lhs2 <= r.rhs2 + kPerturbationSlack &&
           r.lhs_cor <= r.rhs_cor + kPerturbationSlack;
  return r;
}

}  // namespace splab
