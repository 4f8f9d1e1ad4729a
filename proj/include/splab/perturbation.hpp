#pragma once

#include "splab/index_block.hpp"
#include "splab/operator_core.hpp"
#include "splab/spectral.hpp"

namespace splab {

/// Both sides of the three relative perturbation inequalities for
/// Sigma-hat = diag(lambda) + E, m = min(|J|, |J^c|), delta = delta_J(E):
///
///   ||P-hat - P||_2                         <= 4 sqrt(2) sqrt(m) delta
///   ||P-hat - P - L_J E||_2                 <= 20 sqrt(2) m delta^2
///   | ||P-hat - P||_2^2 - ||L_J E||_2^2 |   <= 80 m^{3/2} delta^3 + 800 m^2 delta^4
struct PerturbationRecord {
  double delta = 0.0;
  double lhs0 = 0.0;
  double rhs0 = 0.0;
  double lhs2 = 0.0;
  double rhs2 = 0.0;
  double lhs_cor = 0.0;
  double rhs_cor = 0.0;
  bool pass = true;

  /// lhs / (rhs + slack), so round-off on a near-zero E does not read as a large ratio.
  double ratio0() const;
  double ratio2() const;
};

/// Absolute slack granted to every inequality (round-off at E close to 0).
inline constexpr double kPerturbationSlack = 1e-10;

inline double PerturbationRecord::ratio0() const { return lhs0 / (rhs0 + kPerturbationSlack); }
inline double PerturbationRecord::ratio2() const { return lhs2 / (rhs2 + kPerturbationSlack); }

PerturbationRecord perturbation_check(const SpectralModel& model, const IndexBlock& block,
                                      const SymOperatord& e);

}  // namespace splab
