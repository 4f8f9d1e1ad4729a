#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "splab/rng.hpp"

namespace splab {

/// Joint law of the Karhunen-Loeve coefficients eta_1, ..., eta_d.
///
/// Every law here has E eta_j = 0 and E eta_j^2 = 1. The moment order p is
/// the exponent in sup_j E|eta_j|^{2p} <= C_eta and is carried along so the
/// bound calculators and p_{J,n,p} can use it.
///
///   gaussian            independent N(0,1)
///   student             independent t_nu scaled to unit variance, nu > 2p
///   rademacher-product  eta_j = eps_j * V, eps_j iid signs, one shared scale V
///                       with V^2 in {1-h, 1+h} equally likely
///   two-point           independent signs
class KLLaw {
 public:
  enum class Kind { kGaussian, kStudent, kRademacherProduct, kTwoPoint };

  static KLLaw gaussian(double p = 4.0);
  /// Default nu = 4p + 1.
  static KLLaw student(double p = 4.0, std::optional<double> nu = std::nullopt);
  static KLLaw rademacher_product(double h = 0.5, double p = 4.0);
  static KLLaw two_point(double p = 4.0);

  /// Parses "gaussian", "student", "rademacher-product" or "two-point".
  static KLLaw from_name(const std::string& name, double p, std::optional<double> nu,
                         std::optional<double> h);

  Kind kind() const { return kind_; }
  std::string name() const;
  double moment_order() const { return p_; }
  double nu() const { return nu_; }
  double scale_spread() const { return h_; }

  /// alpha_jk = E eta_j^2 eta_k^2 for j != k.
  double cross_moment() const;
  /// E (eta_j^2 - 1)^2.
  double excess_fourth() const;
  /// sup_j E|eta_j|^{2p}.
  double moment_bound() const;
  /// Lower bound c_eta of E eta_j^2 eta_k^2.
  double c_eta() const { return cross_moment(); }
  /// m-th cumulant uncorrelatedness (needs finite m-th moments).
  bool cumulant_uncorrelated(int m) const;

  /// Fills eta with one joint draw.
  void draw(Engine& rng, Eigen::Ref<Eigen::VectorXd> eta) const;

 private:
  KLLaw(Kind kind, double p, double nu, double h) : kind_(kind), p_(p), nu_(nu), h_(h) {}

  Kind kind_;
  double p_;
  double nu_;
  double h_;
};

}  // namespace splab
