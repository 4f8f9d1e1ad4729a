#pragma once

#include <optional>
#include <string>
#include <vector>

#include "splab/index_block.hpp"
#include "splab/spectral.hpp"

namespace splab {

class KLLaw;

/// One eigenvalue of Psi_J, attached to the pair (j, k), j in J, k in J^c (1-based).
struct PsiPair {
  Index j;
  Index k;
  double value;
};

/// Spectrum of the covariance of L_J Z (or of L_{J,I} Z when truncated).
struct PsiSpectrum {
  std::vector<PsiPair> pairs;
  Truncation truncation;

  bool empty() const { return pairs.empty(); }
  std::vector<double> values() const;
  /// Values sorted non-increasing.
  std::vector<double> sorted_values() const;
};

/// A = ||Psi||_1, B = sqrt(2) ||Psi||_2, C = 2 ||Psi||_3 and the running
/// products lambda_{1,j}(Psi) for j up to 6.
struct LimitLawSummary {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::vector<double> lambda_products;
  /// Largest eigenvalues of Psi, up to 6 of them.
  std::vector<double> top_values;
  /// tr(Psi^{1/2}).
  double trace_sqrt = 0.0;

  double lambda_12() const;
  double lambda_16() const;
  double lambda_6() const;
};

PsiSpectrum psi_spectrum(const SpectralModel& model, const IndexBlock& block, const KLLaw& law,
                         const Truncation& truncation = std::nullopt);

LimitLawSummary limit_summary(const PsiSpectrum& spectrum);

/// A_{J,I^c} = ||Psi_J - Psi_{J,I}||_1.
double a_J_truncation_remainder(const SpectralModel& model, const IndexBlock& block, const KLLaw& law,
                                const Truncation& truncation);

/// p_{J,n,p} = n^{1-p/2} (log n)^{p/2} (r_J / sigma_J)^p.
double qprob(Index n, double p, double r_J, double sigma_J);

enum class Theorem { kCltI, kCltIIa, kCltIIb, kCltIII, kBootA, kBootB };

Theorem theorem_from_name(const std::string& name);
std::string theorem_name(Theorem theorem);

/// Inputs to the bound-shape calculators. Only the fields a theorem uses
/// need to be set; a missing one raises InvalidInput.
struct BoundInputs {
  std::optional<double> n;
  std::optional<double> p;
  std::optional<double> s;
  std::optional<double> q;
  std::optional<double> block_size;
  std::optional<double> sigma_J;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> c;
  std::optional<double> lambda_12;
  std::optional<double> lambda_16;
  std::optional<double> lambda_6;
  std::optional<double> r_J;
  std::optional<double> a_trunc_remainder;
  std::optional<double> trace_sqrt_psi;
  /// Overrides p_{J,n,p} computed from (n, p, r_J, sigma_J).
  std::optional<double> qprob_override;
};

/// Terms of the displayed bound with every unspecified constant set to 1.
/// Shape and trend comparison only; never an absolute guarantee.
struct BoundShape {
  Theorem theorem;
  std::vector<double> terms;
  double total = 0.0;
};

BoundShape bound_shape(Theorem theorem, const BoundInputs& inputs);

/// BoundInputs filled from a model, block and law (p from the law; s, q as given).
BoundInputs bound_inputs(const SpectralModel& model, const IndexBlock& block, const KLLaw& law,
                         Index n, double s, double q, const Truncation& truncation = std::nullopt);

}  // namespace splab
