#include "splab/mc_checks.hpp"

#include <cmath>

#include "splab/error.hpp"
#include "splab/limit_law.hpp"
#include "splab/parallel.hpp"
#include "splab/rng.hpp"
#include "splab/sampling.hpp"

namespace splab {

double sigma_J_mc(const SpectralModel& model, const IndexBlock& block, const KLLaw& law,
                  Index n_draws, std::uint64_t seed) {
  if (n_draws < 10000) throw InvalidInput("sigma_J_mc: need n_draws >= 10^4");
  const Index d = model.dim();
  const Eigen::VectorXd t = detail::sigma_weights(model, block);
  // y = T x has covariance D = diag(theta); M = y y^T - D, so
  // sum M^2 = sum |y|^2 y y^T - (S1 D + D S1) + N D^2 with S1 = sum y y^T.
  const Eigen::VectorXd scale = t.cwiseProduct(model.lambdas().cwiseSqrt());
  const Eigen::VectorXd theta = model.lambdas().cwiseProduct(t.cwiseAbs2());

  constexpr Index kChunk = 8192;
  Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd y(kChunk, d);
  Eigen::VectorXd eta(d);
  for (Index start = 0, chunk = 0; start < n_draws; start += kChunk, ++chunk) {
    const Index rows = std::min(kChunk, n_draws - start);
    Engine rng = make_stream(seed, StreamRole::kSigma, static_cast<std::uint64_t>(chunk));
    for (Index i = 0; i < rows; ++i) {
      law.draw(rng, eta);
      y.row(i) = scale.cwiseProduct(eta).transpose();
    }
    const auto block_rows = y.topRows(rows);
    s1.noalias() += block_rows.transpose() * block_rows;
    const Eigen::MatrixXd weighted = block_rows.rowwise().norm().asDiagonal() * block_rows;
    s2.noalias() += weighted.transpose() * weighted;
  }

  const Eigen::MatrixXd dm = theta.asDiagonal();
  Eigen::MatrixXd sum = s2 - s1 * dm - dm * s1 + static_cast<double>(n_draws) * dm * dm;
  sum /= static_cast<double>(n_draws);
  sum = 0.5 * (sum + sum.transpose()).eval();
  return std::sqrt(schatten_norm(SymOperatord(sum), kSchattenInf));
}

DeltaTailRecord delta_tail_check(const SpectralModel& model, const IndexBlock& block,
                                 const KLLaw& law, Index n, Index replicates, std::uint64_t seed,
                                 int threads, const DeltaOptions& delta_options) {
  if (replicates < 200) throw InvalidInput("delta_tail_check: need replicates >= 200");
  if (n < 2) throw InvalidInput("delta_tail_check: need n >= 2");

  DeltaTailRecord rec;
  rec.replicates = replicates;
  rec.sigma_J = law.cumulant_uncorrelated(4) ? sigma_J_analytic(model, block, law)
                                             : sigma_J_mc(model, block, law, 100000, seed);
  rec.qprob = qprob(n, law.moment_order(), relative_rank(model, block), rec.sigma_J);
  const double nn = static_cast<double>(n);
  for (std::size_t c = 0; c < rec.threshold.size(); ++c) {
    rec.threshold[c] = DeltaTailRecord::kMultipliers[c] * std::sqrt(rec.sigma_J * rec.sigma_J * std::log(nn) / nn);
  }

  std::vector<double> deltas(static_cast<std::size_t>(replicates));
  parallel_for(deltas.size(), threads, [&](std::size_t r) {
    const Dataset data = sample_dataset(model, law, n, seed, r);
    const SymOperatord e = empirical_covariance(data) - model.covariance();
    deltas[r] = delta_J(model, block, e, delta_options);
  });

  for (std::size_t c = 0; c < rec.threshold.size(); ++c) {
    Index hits = 0;
    for (double dl : deltas) hits += dl > rec.threshold[c] ? 1 : 0;
    rec.frequency[c] = static_cast<double>(hits) / static_cast<double>(replicates);
  }
  return rec;
}

}  // namespace splab
