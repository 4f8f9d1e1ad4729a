#include "splab/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "splab/error.hpp"
#include "splab/kl_law.hpp"

namespace splab {

std::vector<double> PsiSpectrum::values() const {
  std::vector<double> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) v.push_back(p.value);
  return v;
}

std::vector<double> PsiSpectrum::sorted_values() const {
  auto v = values();
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

namespace {

double need_top(const std::vector<double>& top, std::size_t count, const char* what) {
  if (top.size() < count) {
    throw InvalidInput(std::string(what) + " needs at least " + std::to_string(count) +
                       " Psi eigenvalues, spectrum has " + std::to_string(top.size()));
  }
  return top[count - 1];
}

double psi_value(const SpectralModel& model, const KLLaw& law, Index j, Index k) {
  const double lj = model.lambda(j);
  const double lk = model.lambda(k);
  const double diff = lk - lj;
  return 2.0 * law.cross_moment() * lj * lk / (diff * diff);
}

void require_m4(const KLLaw& law) {
  if (!law.cumulant_uncorrelated(4)) {
    throw UnsupportedLaw("Psi spectrum: law '" + law.name() +
                         "' lacks fourth-order cumulant uncorrelatedness");
  }
}

}  // namespace

double LimitLawSummary::lambda_12() const {
  need_top(top_values, 2, "lambda_{1,2}(Psi)");
  return lambda_products[1];
}

double LimitLawSummary::lambda_16() const {
  need_top(top_values, 6, "lambda_{1,6}(Psi)");
  return lambda_products[5];
}

double LimitLawSummary::lambda_6() const { return need_top(top_values, 6, "lambda_6(Psi)"); }

PsiSpectrum psi_spectrum(const SpectralModel& model, const IndexBlock& block, const KLLaw& law,
                         const Truncation& truncation) {
  detail::require_complement(model, block);
  detail::check_truncation(truncation, model.dim());
  require_m4(law);
  const Index k_end = truncation ? truncation->last() + 1 : model.dim();

  PsiSpectrum out;
  out.truncation = truncation;
  for (Index j = block.first(); j <= block.last(); ++j) {
    for (Index k = 0; k < k_end; ++k) {
      if (block.contains(k)) continue;
      out.pairs.push_back({j + 1, k + 1, psi_value(model, law, j, k)});
    }
  }
  return out;
}

LimitLawSummary limit_summary(const PsiSpectrum& spectrum) {
  if (spectrum.empty()) throw InvalidInput("limit_summary: empty Psi spectrum");
  const auto sorted = spectrum.sorted_values();
  LimitLawSummary s;
  double sum2 = 0.0;
  double sum3 = 0.0;
  for (double v : sorted) {
    s.a += v;
    sum2 += v * v;
    sum3 += v * v * v;
    s.trace_sqrt += std::sqrt(v);
  }
  s.b = std::sqrt(2.0) * std::sqrt(sum2);
  s.c = 2.0 * std::cbrt(sum3);
  double running = 1.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(6, sorted.size()); ++i) {
    running *= sorted[i];
    s.lambda_products.push_back(running);
    s.top_values.push_back(sorted[i]);
  }
  return s;
}

double a_J_truncation_remainder(const SpectralModel& model, const IndexBlock& block, const KLLaw& law,
                                const Truncation& truncation) {
  detail::require_complement(model, block);
  detail::check_truncation(truncation, model.dim());
  require_m4(law);
  if (!truncation) return 0.0;
  double total = 0.0;
  for (Index j = block.first(); j <= block.last(); ++j) {
    for (Index k = truncation->last() + 1; k < model.dim(); ++k) {
      if (block.contains(k)) continue;
      total += psi_value(model, law, j, k);
    }
  }
  return total;
}

double qprob(Index n, double p, double r_J, double sigma_J) {
  if (n < 2) throw InvalidInput("qprob: need n >= 2");
  if (!(p > 0.0) || !(r_J > 0.0) || !(sigma_J > 0.0)) {
    throw InvalidInput("qprob: need p, r_J, sigma_J > 0");
  }
  const double nn = static_cast<double>(n);
  const double log_n = std::log(nn);
  return std::exp((1.0 - 0.5 * p) * std::log(nn) + 0.5 * p * std::log(log_n) +
                  p * std::log(r_J / sigma_J));
}

Theorem theorem_from_name(const std::string& name) {
  if (name == "clt-I") return Theorem::kCltI;
  if (name == "clt-II-a") return Theorem::kCltIIa;
  if (name == "clt-II-b") return Theorem::kCltIIb;
  if (name == "clt-III") return Theorem::kCltIII;
  if (name == "boot-A") return Theorem::kBootA;
  if (name == "boot-B") return Theorem::kBootB;
  throw InvalidInput("unknown theorem '" + name + "'");
}

std::string theorem_name(Theorem theorem) {
  switch (theorem) {
    case Theorem::kCltI: return "clt-I";
    case Theorem::kCltIIa: return "clt-II-a";
    case Theorem::kCltIIb: return "clt-II-b";
    case Theorem::kCltIII: return "clt-III";
    case Theorem::kBootA: return "boot-A";
    case Theorem::kBootB: return "boot-B";
  }
  return "unknown";
}

namespace {

double need(const std::optional<double>& v, const char* name, Theorem t) {
  if (!v) throw InvalidInput("bound_shape(" + theorem_name(t) + "): missing input '" + name + "'");
  return *v;
}

}  // namespace

BoundShape bound_shape(Theorem theorem, const BoundInputs& in) {
  const double n = need(in.n, "n", theorem);
  if (n < 2.0) throw InvalidInput("bound_shape: need n >= 2");
  const double log_n = std::log(n);
  const double root_n = std::sqrt(n);

  auto p_qprob = [&] {
    if (in.qprob_override) return *in.qprob_override;
    return qprob(static_cast<Index>(n), need(in.p, "p", theorem), need(in.r_J, "r_J", theorem),
                 need(in.sigma_J, "sigma_J", theorem));
  };
  // (log n)^{3/2} n^{-1/2} sigma_J^3 |J|^{3/2}, divided by the theorem's scale.
  auto sigma_term = [&](double scale) {
    const double sigma = need(in.sigma_J, "sigma_J", theorem);
    const double size = need(in.block_size, "block_size", theorem);
    return std::pow(log_n, 1.5) / root_n * std::pow(sigma, 3) * std::pow(size, 1.5) / scale;
  };

  BoundShape out{theorem, {}, 0.0};
  auto& t = out.terms;
  switch (theorem) {
    case Theorem::kCltI: {
      const double a = need(in.a, "A", theorem);
      const double size = need(in.block_size, "block_size", theorem);
      const double s = need(in.s, "s", theorem);
      t.push_back(std::pow(n, -1.0 / 12.0));
      t.push_back(sigma_term(a));
      t.push_back(n * size / a * p_qprob());
      t.push_back(std::pow(a / (n * size), s));
      break;
    }
    case Theorem::kCltIIa: {
      const double a = need(in.a, "A", theorem);
      const double root_l12 = std::sqrt(need(in.lambda_12, "lambda_12", theorem));
      t.push_back(std::pow(n, -0.2) * std::pow(a / root_l12, 0.6));
      t.push_back(sigma_term(root_l12));
      t.push_back(p_qprob());
      break;
    }
    case Theorem::kCltIIb: {
      const double a = need(in.a, "A", theorem);
      const double b = need(in.b, "B", theorem);
      const double c = need(in.c, "C", theorem);
      const double l6 = need(in.lambda_6, "lambda_6", theorem);
      const double l16 = need(in.lambda_16, "lambda_16", theorem);
      const double root_l12 = std::sqrt(need(in.lambda_12, "lambda_12", theorem));
      const double cb3 = std::pow(c / b, 3);
      t.push_back(std::pow(std::pow(a / l6, 3) * cb3 / root_n, 1.1));
      t.push_back(std::pow(a, 6) / l16 * cb3 / root_n);
      t.push_back(sigma_term(root_l12));
      t.push_back(p_qprob());
      break;
    }
    case Theorem::kCltIII: {
      const double a = need(in.a, "A", theorem);
      const double b = need(in.b, "B", theorem);
      const double c = need(in.c, "C", theorem);
      const double p = need(in.p, "p", theorem);
      t.push_back(std::pow(n, 0.25 - std::min(p, 3.0) / 8.0) * std::pow(a / b, 0.75));
      t.push_back(std::pow(c / b, 3));
      t.push_back(sigma_term(b));
      t.push_back(p_qprob());
      break;
    }
    case Theorem::kBootA: {
      const double a = need(in.a, "A", theorem);
      const double b = need(in.b, "B", theorem);
      const double c = need(in.c, "C", theorem);
      const double q = need(in.q, "q", theorem);
      const double s = need(in.s, "s", theorem);
      t.push_back(std::pow(n, 0.25 - q / 8.0) * std::pow(a / b, 0.75));
      t.push_back(std::pow(c / b, 3));
      t.push_back(std::sqrt(log_n / n) * a / b);
      t.push_back(sigma_term(b));
      t.push_back(std::pow(p_qprob(), s));
      break;
    }
    case Theorem::kBootB: {
      const double a = need(in.a, "A", theorem);
      const double p = need(in.p, "p", theorem);
      const double s = need(in.s, "s", theorem);
      const double root_l12 = std::sqrt(need(in.lambda_12, "lambda_12", theorem));
      const double tr = need(in.trace_sqrt_psi, "trace_sqrt_psi", theorem);
      const double rem = need(in.a_trunc_remainder, "a_trunc_remainder", theorem);
      t.push_back(std::pow(n, -0.2) * std::pow(a / root_l12, 0.6));
      t.push_back(sigma_term(root_l12));
      t.push_back(std::sqrt(log_n / n) * std::sqrt(a) * tr / root_l12);
      t.push_back(rem * log_n / root_l12);
      t.push_back(std::pow(p_qprob() + std::pow(n, 1.0 - p / 6.0), s));
      break;
    }
  }
  for (double v : t) out.total += v;
  return out;
}

BoundInputs bound_inputs(const SpectralModel& model, const IndexBlock& block, const KLLaw& law,
                         Index n, double s, double q, const Truncation& truncation) {
  const LimitLawSummary full = limit_summary(psi_spectrum(model, block, law));
  BoundInputs in;
  in.n = static_cast<double>(n);
  in.p = law.moment_order();
  in.s = s;
  in.q = q;
  in.block_size = static_cast<double>(block.size());
  in.sigma_J = sigma_J_analytic(model, block, law);
  in.r_J = relative_rank(model, block);
  in.a = full.a;
  in.b = full.b;
  in.c = full.c;
  if (full.top_values.size() >= 2) in.lambda_12 = full.lambda_12();
  if (full.top_values.size() >= 6) {
    in.lambda_16 = full.lambda_16();
    in.lambda_6 = full.lambda_6();
  }
  in.a_trunc_remainder = a_J_truncation_remainder(model, block, law, truncation);
  const PsiSpectrum truncated = psi_spectrum(model, block, law, truncation);
  double tr = 0.0;
  for (double v : truncated.values()) tr += std::sqrt(v);
  in.trace_sqrt_psi = tr;
  return in;
}

}  // namespace splab
