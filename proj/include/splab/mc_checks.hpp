#pragma once

#include <array>
#include <cstdint>

#include "splab/index_block.hpp"
#include "splab/kl_law.hpp"
#include "splab/spectral.hpp"

namespace splab {

/// Monte Carlo estimate of sigma_J straight from its defining expectation,
/// ||E M^2||_inf^{1/2} with M = T (X X^T - Sigma) T and T the congruence
/// weights (built around J^c when j1 = 1). Needs n_draws >= 10^4.
double sigma_J_mc(const SpectralModel& model, const IndexBlock& block, const KLLaw& law,
                  Index n_draws, std::uint64_t seed);

/// Empirical exceedance frequencies of sqrt(n) delta_J(E) > C sqrt(sigma_J^2 log n)
/// for C in {1, 2, 4}. Report-only: the reference constant is unspecified.
struct DeltaTailRecord {
  static constexpr std::array<double, 3> kMultipliers{1.0, 2.0, 4.0};
  std::array<double, 3> frequency{};
  std::array<double, 3> threshold{};
  double sigma_J = 0.0;
  double qprob = 0.0;
  Index replicates = 0;
};

DeltaTailRecord delta_tail_check(const SpectralModel& model, const IndexBlock& block,
                                 const KLLaw& law, Index n, Index replicates, std::uint64_t seed,
                                 int threads = 0, const DeltaOptions& delta_options = {});

}  // namespace splab
