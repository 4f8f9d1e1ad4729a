#include "splab/models.hpp"

#include <cmath>

#include "splab/error.hpp"

namespace splab {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidInput(message);
}

// Linear interpolation from `top` at index 0 to `bottom` at index count-1.
double ramp(double top, double bottom, Index i, Index count) {
  if (count == 1) return bottom;
  return top - (top - bottom) * static_cast<double>(i) / static_cast<double>(count - 1);
}

Eigen::VectorXd lambdas_for(const ExpDecay& m) {
  require(m.a > 0.0, "exp-decay: need a > 0");
  require(m.d >= 1, "exp-decay: need d >= 1");
  Eigen::VectorXd l(m.d);
  for (Index j = 0; j < m.d; ++j) l(j) = std::exp(-m.a * static_cast<double>(j + 1));
  return l;
}

Eigen::VectorXd lambdas_for(const PolyDecay& m) {
  require(m.a > 1.0, "poly-decay: need a > 1");
  require(m.d >= 1, "poly-decay: need d >= 1");
  Eigen::VectorXd l(m.d);
  for (Index j = 0; j < m.d; ++j) l(j) = std::pow(static_cast<double>(j + 1), -m.a);
  return l;
}

Eigen::VectorXd lambdas_for(const Spiked& m) {
  require(m.d >= 6, "spiked: need d >= 6");
  require(m.spikes >= 1 && m.spikes <= m.d - m.spikes, "spiked: need 1 <= J <= d - J");
  require(m.gap > 0.0 && m.gap <= 1.0, "spiked: need 0 < g_J <= 1");
  require(m.spread >= 1.0, "spiked: need C >= 1");
  require(m.spikes == 1 || m.spread > 1.0, "spiked: J > 1 needs C > 1 for distinct spikes");
  Eigen::VectorXd l(m.d);
  for (Index i = 0; i < m.spikes; ++i) l(i) = 1.0 + m.gap * ramp(m.spread, 1.0, i, m.spikes);
  for (Index i = 1; i <= m.d - m.spikes; ++i) {
    l(m.spikes + i - 1) = 1.0 + kSpikedTailStagger * static_cast<double>(m.d - m.spikes - i);
  }
  return l;
}

Eigen::VectorXd lambdas_for(const Pervasive& m) {
  require(m.factors >= 1 && m.factors < m.d, "pervasive: need 1 <= J < d");
  require(m.separation > 0.0 && m.separation < 1.0, "pervasive: need 0 < c < 1");
  require(m.spread >= 1.0, "pervasive: need C >= 1");
  require(m.factors == 1 || m.spread > 1.0, "pervasive: J > 1 needs C > 1 for distinct factors");
  Eigen::VectorXd l(m.d);
  for (Index i = 0; i < m.factors; ++i) l(i) = ramp(m.spread, 1.0, i, m.factors);
  double inv_sq = 0.0;
  for (Index i = 1; i <= m.d - m.factors; ++i) inv_sq += 1.0 / static_cast<double>(i * i);
  const double tau = std::min(1.0 - m.separation, m.spread * l(0) / inv_sq);
  for (Index i = 1; i <= m.d - m.factors; ++i) {
    l(m.factors + i - 1) = tau / static_cast<double>(i * i);
  }
  return l;
}

}  // namespace

SpectralModel build_model(const EigenProfile& profile) {
  return SpectralModel(std::visit([](const auto& m) { return lambdas_for(m); }, profile));
}

std::string profile_name(const EigenProfile& profile) {
  struct {
    std::string operator()(const ExpDecay&) const { return "exp-decay"; }
    std::string operator()(const PolyDecay&) const { return "poly-decay"; }
    std::string operator()(const Spiked&) const { return "spiked"; }
    std::string operator()(const Pervasive&) const { return "pervasive"; }
  } visitor;
  return std::visit(visitor, profile);
}

Index profile_dim(const EigenProfile& profile) {
  return std::visit([](const auto& m) { return m.d; }, profile);
}

void check_block(const EigenProfile& profile, const IndexBlock& block) {
  block.check(profile_dim(profile));
  if (const auto* s = std::get_if<Spiked>(&profile)) {
    if (block.j2() > s->spikes) {
      throw InvalidInput("spiked: block " + block.to_string() +
                         " reaches into the staggered tail; only blocks within {1.." +
                         std::to_string(s->spikes) + "} are supported");
    }
  }
}

}  // namespace splab
