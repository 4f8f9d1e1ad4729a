#pragma once

#include <string>
#include <variant>

#include "splab/index_block.hpp"
#include "splab/spectral.hpp"

namespace splab {

/// lambda_j = exp(-a j).
struct ExpDecay {
  double a;
  Index d;
};

/// lambda_j = j^{-a}.
struct PolyDecay {
  double a;
  Index d;
};

/// J spikes over a unit-level tail: lambda_J = 1 + g, lambda_1 = 1 + C g.
/// The tail is staggered by kSpikedTailStagger to keep eigenvalues distinct.
struct Spiked {
  Index spikes;
  double gap;
  double spread;
  Index d;
};

/// Pervasive factor model: lambda_1 <= C lambda_J, lambda_J - lambda_{J+1} >= c lambda_J,
/// tr_{J^c}(Sigma) / lambda_1 <= C, with an inverse-square tail.
struct Pervasive {
  Index factors;
  double separation;
  double spread;
  Index d;
};

using EigenProfile = std::variant<ExpDecay, PolyDecay, Spiked, Pervasive>;

inline constexpr double kSpikedTailStagger = 1e-9;

SpectralModel build_model(const EigenProfile& profile);

std::string profile_name(const EigenProfile& profile);
Index profile_dim(const EigenProfile& profile);

/// Rejects blocks the profile cannot support (spiked: blocks reaching into
/// the staggered tail).
void check_block(const EigenProfile& profile, const IndexBlock& block);

}  // namespace splab
