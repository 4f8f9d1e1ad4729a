#include "splab/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "splab/error.hpp"

namespace splab {

SampleVector::SampleVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("SampleVector: empty sample");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("SampleVector: non-finite value");
  }
  std::sort(values_.begin(), values_.end());
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_two_sample(const SampleVector& a, const SampleVector& b) {
  const auto& x = a.sorted();
  const auto& y = b.sorted();
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < x.size() || j < y.size()) {
    const double t = j == y.size() || (i < x.size() && x[i] <= y[j]) ? x[i] : y[j];
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double ks_vs_normal(const SampleVector& a) {
  const auto& x = a.sorted();
  const double m = static_cast<double>(x.size());
  double best = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t k = i;
    while (k < x.size() && x[k] == x[i]) ++k;
    const double phi = normal_cdf(x[i]);
    best = std::max({best, std::abs(static_cast<double>(k) / m - phi),
                     std::abs(phi - static_cast<double>(i) / m)});
    i = k;
  }
  return best;
}

double wasserstein1(const SampleVector& a, const SampleVector& b) {
  const auto& x = a.sorted();
  const auto& y = b.sorted();
  const auto na = x.size();
  const auto nb = y.size();
  // Walk the merged breakpoints i/na and j/nb of the two quantile functions.
  std::size_t i = 0;
  std::size_t j = 0;
  double u = 0.0;
  double total = 0.0;
  while (i < na && j < nb) {
    const std::size_t lhs = (i + 1) * nb;
    const std::size_t rhs = (j + 1) * na;
    const double next = lhs <= rhs ? static_cast<double>(i + 1) / static_cast<double>(na)
                                   : static_cast<double>(j + 1) / static_cast<double>(nb);
    total += (next - u) * std::abs(x[i] - y[j]);
    u = next;
    if (lhs <= rhs) ++i;
    if (rhs <= lhs) ++j;
  }
  return total;
}

double empirical_quantile(const SampleVector& a, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidInput("empirical_quantile: beta must be in (0, 1)");
  const auto& x = a.sorted();
  auto k = static_cast<std::size_t>(std::ceil(beta * static_cast<double>(x.size()) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, x.size());
  return x[k - 1];
}

double ks_noise_floor(std::size_t m_a, std::size_t m_b) {
  if (m_a == 0 || m_b == 0) throw InvalidInput("ks_noise_floor: sample sizes must be positive");
  return 1.36 * std::sqrt(1.0 / static_cast<double>(m_a) + 1.0 / static_cast<double>(m_b));
}

}  // namespace splab
