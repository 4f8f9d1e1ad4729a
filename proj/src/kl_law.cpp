#include "splab/kl_law.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "splab/error.hpp"
#include "splab/index_block.hpp"

namespace splab {

KLLaw KLLaw::gaussian(double p) {
  if (!(p > 0.0)) throw InvalidInput("KLLaw: moment order p must be positive");
  return KLLaw(Kind::kGaussian, p, std::numeric_limits<double>::infinity(), 0.0);
}

KLLaw KLLaw::student(double p, std::optional<double> nu) {
  if (!(p > 0.0)) throw InvalidInput("KLLaw: moment order p must be positive");
  const double v = nu.value_or(4.0 * p + 1.0);
  if (!(v > 2.0 * p) || !(v > 2.0)) {
    throw InvalidInput("KLLaw::student: need nu > max(2p, 2), got nu = " + std::to_string(v));
  }
  return KLLaw(Kind::kStudent, p, v, 0.0);
}

KLLaw KLLaw::rademacher_product(double h, double p) {
  if (!(p > 0.0)) throw InvalidInput("KLLaw: moment order p must be positive");
  if (!(h >= 0.0 && h < 1.0)) throw InvalidInput("KLLaw::rademacher_product: need 0 <= h < 1");
  return KLLaw(Kind::kRademacherProduct, p, std::numeric_limits<double>::infinity(), h);
}

KLLaw KLLaw::two_point(double p) {
  if (!(p > 0.0)) throw InvalidInput("KLLaw: moment order p must be positive");
  return KLLaw(Kind::kTwoPoint, p, std::numeric_limits<double>::infinity(), 0.0);
}

KLLaw KLLaw::from_name(const std::string& name, double p, std::optional<double> nu,
                       std::optional<double> h) {
  if (name == "gaussian") return gaussian(p);
  if (name == "student") return student(p, nu);
  if (name == "rademacher-product") return rademacher_product(h.value_or(0.5), p);
  if (name == "two-point") return two_point(p);
  throw InvalidInput("unknown law '" + name + "'");
}

std::string KLLaw::name() const {
  switch (kind_) {
    case Kind::kGaussian: return "gaussian";
    case Kind::kStudent: return "student";
    case Kind::kRademacherProduct: return "rademacher-product";
    case Kind::kTwoPoint: return "two-point";
  }
  return "unknown";
}

double KLLaw::cross_moment() const {
  return kind_ == Kind::kRademacherProduct ? 1.0 + h_ * h_ : 1.0;
}

double KLLaw::excess_fourth() const {
  switch (kind_) {
    case Kind::kGaussian: return 2.0;
    case Kind::kStudent:
      if (nu_ <= 4.0) return std::numeric_limits<double>::infinity();
      return 3.0 * (nu_ - 2.0) / (nu_ - 4.0) - 1.0;
    case Kind::kRademacherProduct: return h_ * h_;
    case Kind::kTwoPoint: return 0.0;
  }
  return 0.0;
}

double KLLaw::moment_bound() const {
  const double k = 2.0 * p_;
  switch (kind_) {
    case Kind::kGaussian:
      return std::exp(0.5 * k * std::log(2.0) + std::lgamma(0.5 * (k + 1.0)) - 0.5 * std::log(M_PI));
    case Kind::kStudent: {
      // E|T|^k for t_nu, then rescaled to unit variance.
      const double raw = 0.5 * k * std::log(nu_) + std::lgamma(0.5 * (k + 1.0)) +
                         std::lgamma(0.5 * (nu_ - k)) - 0.5 * std::log(M_PI) - std::lgamma(0.5 * nu_);
      return std::exp(raw + 0.5 * k * std::log((nu_ - 2.0) / nu_));
    }
    case Kind::kRademacherProduct:
      return 0.5 * (std::pow(1.0 - h_, p_) + std::pow(1.0 + h_, p_));
    case Kind::kTwoPoint: return 1.0;
  }
  return 1.0;
}

bool KLLaw::cumulant_uncorrelated(int m) const {
  if (kind_ == Kind::kStudent) return nu_ > static_cast<double>(m);
  return true;
}

void KLLaw::draw(Engine& rng, Eigen::Ref<Eigen::VectorXd> eta) const {
  auto sign = [&rng] { return (rng() >> 63) != 0 ? 1.0 : -1.0; };
  switch (kind_) {
    case Kind::kGaussian: {
      std::normal_distribution<double> normal;
      for (Index j = 0; j < eta.size(); ++j) eta(j) = normal(rng);
      return;
    }
    case Kind::kStudent: {
      std::student_t_distribution<double> t(nu_);
      const double scale = std::sqrt((nu_ - 2.0) / nu_);
      for (Index j = 0; j < eta.size(); ++j) eta(j) = scale * t(rng);
      return;
    }
    case Kind::kRademacherProduct: {
      const double v = std::sqrt(sign() > 0 ? 1.0 + h_ : 1.0 - h_);
      for (Index j = 0; j < eta.size(); ++j) eta(j) = v * sign();
      return;
    }
    case Kind::kTwoPoint:
      for (Index j = 0; j < eta.size(); ++j) eta(j) = sign();
      return;
  }
}

}  // namespace splab
