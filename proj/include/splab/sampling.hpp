#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "splab/index_block.hpp"
#include "splab/kl_law.hpp"
#include "splab/limit_law.hpp"
#include "splab/operator_core.hpp"
#include "splab/rng.hpp"
#include "splab/spectral.hpp"

namespace splab {

/// n observations X_i = sum_j sqrt(lambda_j) eta_ij e_j, one per row.
struct Dataset {
  Eigen::MatrixXd rows;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  StreamRole role = StreamRole::kData;
  std::uint64_t lambda_hash = 0;

  Index n() const { return rows.rows(); }
  Index dim() const { return rows.cols(); }
};

/// FNV-1a over the bit patterns of the eigenvalues, for audit trails.
std::uint64_t hash_lambdas(const Eigen::VectorXd& lambdas);

/// Deterministic in (seed, replicate, role). Independent copies X' use role kPrime.
Dataset sample_dataset(const SpectralModel& model, const KLLaw& law, Index n, std::uint64_t seed,
                       std::uint64_t replicate = 0, StreamRole role = StreamRole::kData);

/// Uncentered estimator (1/n) sum X_i X_i^T.
SymOperatord empirical_covariance(const Dataset& data);

struct EmpiricalProjection {
  SymOperatord projector;
  SymOperatord covariance;
  SymOperatord perturbation;
};

/// P-hat_J from eigh of Sigma-hat, and E = Sigma-hat - diag(lambda).
EmpiricalProjection empirical_projector(const Dataset& data, const SpectralModel& model,
                                        const IndexBlock& block);

/// n ||P-hat_J - P_J||_2^2 for one dataset.
double projector_statistic(const Dataset& data, const IndexBlock& block);

/// Draws of ||L_J Z||_2^2 = sum_pairs value * g^2 with independent standard normal g.
std::vector<double> sample_limit_stat(const PsiSpectrum& spectrum, Index draws, std::uint64_t seed);

void write_csv(std::ostream& out, const Dataset& data);
/// Reads the CSV written by write_csv (header x1..xd).
Dataset read_csv(std::istream& in);

}  // namespace splab
