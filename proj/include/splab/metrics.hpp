#pragma once

#include <vector>

namespace splab {

/// Finite sample of reals, kept sorted ascending.
class SampleVector {
 public:
  explicit SampleVector(std::vector<double> values);

  const std::vector<double>& sorted() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

/// sup_x |F_a(x) - F_b(x)| over the merged jump points.
double ks_two_sample(const SampleVector& a, const SampleVector& b);

/// sup_x |F_a(x) - Phi(x)|, checking both one-sided limits at each jump.
double ks_vs_normal(const SampleVector& a);

/// Integral of |F_a^{-1}(u) - F_b^{-1}(u)| du over (0, 1), exact for empirical measures.
double wasserstein1(const SampleVector& a, const SampleVector& b);

/// ceil(beta m)-th order statistic, beta in (0, 1).
double empirical_quantile(const SampleVector& a, double beta);

/// Two-sample DKW-scale floor 1.36 sqrt(1/m_a + 1/m_b).
double ks_noise_floor(std::size_t m_a, std::size_t m_b);

/// Standard normal CDF via erfc.
double normal_cdf(double x);

}  // namespace splab
