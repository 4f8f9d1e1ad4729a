#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "splab/kl_law.hpp"
#include "splab/mc_checks.hpp"
#include "splab/models.hpp"
#include "splab/spectral.hpp"
#include "support/oracles.hpp"

namespace {

using splab::IndexBlock;
using splab::KLLaw;
using splab::SpectralModel;
using splab::SymOperatord;

SpectralModel model(std::initializer_list<double> l) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(l.size()));
  Eigen::Index i = 0;
  for (double x : l) v(i++) = x;
  return SpectralModel(v);
}

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int d, double scale) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = scale * normal(rng);
  return m;
}

SpectralModel random_model(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::VectorXd l(d);
  double cur = 2.0 + 3.0 * u(rng);
  for (int k = 0; k < d; ++k) {
    l(k) = cur;
    cur -= u(rng) * cur / (d + 1.0);
  }
  return SpectralModel(l);
}

TEST(SpectralModel, RejectsTiesAndNonPositive) {
  EXPECT_THROW(model({2, 2, 1}), splab::InvalidInput);
  EXPECT_THROW(model({2, 1, 0}), splab::InvalidInput);
  EXPECT_THROW(model({1, 2}), splab::InvalidInput);
}

TEST(Gap, Examples) {
  EXPECT_DOUBLE_EQ(splab::gap(model({5, 3, 2, 1}), IndexBlock(2, 3)), 1.0);
  EXPECT_DOUBLE_EQ(splab::gap(model({2, 1}), IndexBlock(1, 1)), 1.0);
  EXPECT_THROW(splab::gap(model({2, 1}), IndexBlock(1, 2)), splab::NoComplement);
}

TEST(LinearTerm, Examples) {
  Eigen::Matrix2d swap;
  swap << 0, 1, 1, 0;
  const auto l = splab::linear_term(model({2, 1}), IndexBlock(1, 1), SymOperatord(swap));
  EXPECT_TRUE(l.matrix().isApprox(swap, 1e-15));

  const auto m3 = model({2, 1, 0.5});
  const auto lt = splab::linear_term(m3, IndexBlock(1, 1), SymOperatord(Eigen::Matrix3d(Eigen::Matrix3d::Ones())),
                                     IndexBlock(1, 2));
  Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
  expected(0, 1) = expected(1, 0) = 1.0;
  EXPECT_LE((lt.matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(splab::linear_term(model({2, 1}), IndexBlock(1, 2), SymOperatord(swap)), splab::NoComplement);
}

TEST(LinearTerm, AnnihilatesTheCovariance) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 20);
    const auto m = random_model(rng, d);
    const int j1 = 1 + static_cast<int>(rng() % (d - 1));
    const IndexBlock block(j1, j1 + static_cast<int>(rng() % (d - j1)));
    const auto l = splab::linear_term(m, block, m.covariance());
    EXPECT_EQ(l.matrix().cwiseAbs().maxCoeff(), 0.0);
    const auto lt = splab::linear_term(m, block, m.covariance(), IndexBlock(1, d));
    EXPECT_EQ(lt.matrix().cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(LinearTerm, BlockSupportAndEntries) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 3 + static_cast<int>(rng() % 15);
    const auto m = random_model(rng, d);
    const int j1 = 1 + static_cast<int>(rng() % (d - 1));
    const IndexBlock block(j1, j1 + static_cast<int>(rng() % (d - j1)));
    const int i2 = 1 + static_cast<int>(rng() % d);
    const IndexBlock trunc(1, i2);
    const Eigen::MatrixXd a = random_symmetric(rng, d, 1.0);
    const Eigen::MatrixXd l = splab::linear_term(m, block, SymOperatord(a), trunc).matrix();
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        const bool jin = block.contains(j);
        const bool kin = block.contains(k);
        const bool cross = jin != kin;
        const int outer = jin ? k : j;
        if (!cross || outer >= i2) {
          ASSERT_EQ(l(j, k), 0.0);
        } else {
          const double denom = jin ? m.lambda(j) - m.lambda(k) : m.lambda(k) - m.lambda(j);
          ASSERT_NEAR(l(j, k), a(j, k) / denom, 1e-12 * (1 + std::abs(l(j, k))));
        }
      }
    }
  }
}

TEST(LinearTerm, RolesAreAntisymmetric) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 20);
    const auto m = random_model(rng, d);
    const IndexBlock block(1, 1 + static_cast<int>(rng() % (d - 1)));
    const SymOperatord e(random_symmetric(rng, d, 1.0));
    const auto lj = splab::linear_term(m, block, e).matrix();
    const auto ljc = splab::linear_term(m, *block.complement_interval(d), e).matrix();
    EXPECT_LE((lj + ljc).cwiseAbs().maxCoeff(), 1e-12 * (1 + lj.cwiseAbs().maxCoeff()));
  }
}

TEST(Delta, Examples) {
  const auto m = model({2, 1});
  EXPECT_EQ(splab::delta_J(m, IndexBlock(1, 1), SymOperatord::zero(2)), 0.0);
  Eigen::Matrix2d swap;
  swap << 0, 1, 1, 0;
  EXPECT_NEAR(splab::delta_J(m, IndexBlock(1, 1), SymOperatord(swap)), 1.0, 1e-14);
  EXPECT_NEAR(splab::delta_J(m, IndexBlock(1, 1), SymOperatord::diagonal(Eigen::Vector2d(0, 3))), 3.0, 1e-14);
}

TEST(Delta, BoundedByNormOverGapAndMinOption) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 25);
    const auto m = random_model(rng, d);
    const int j1 = 1 + static_cast<int>(rng() % (d - 1));
    const IndexBlock block(j1, j1 + static_cast<int>(rng() % (d - j1)));
    const SymOperatord e(random_symmetric(rng, d, 0.1));
    const double delta = splab::delta_J(m, block, e);
    const double bound = splab::schatten_norm(e, splab::kSchattenInf) / splab::gap(m, block);
    EXPECT_LE(delta, bound * (1 + 1e-12));
    EXPECT_LE(splab::delta_J(m, block, e, {true}), delta * (1 + 1e-12));
  }
}

TEST(RelativeRank, Examples) {
  EXPECT_NEAR(splab::relative_rank(model({2, 1}), IndexBlock(1, 1)), 3.0, 1e-14);
  EXPECT_NEAR(splab::relative_rank(model({4, 2, 1}), IndexBlock(2, 2)), 5.0, 1e-14);
}

TEST(ScaleInvariance, DeltaRankSigma) {
  std::mt19937_64 rng(25);
  const auto law = KLLaw::gaussian();
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 3 + static_cast<int>(rng() % 15);
    const auto m = random_model(rng, d);
    const double c = 0.01 + 10.0 * std::uniform_real_distribution<double>()(rng);
    const auto mc = m.scaled(c);
    const int j1 = 1 + static_cast<int>(rng() % (d - 1));
    const IndexBlock block(j1, j1 + static_cast<int>(rng() % (d - j1)));
    const Eigen::MatrixXd e = random_symmetric(rng, d, 0.1);
    EXPECT_NEAR(splab::delta_J(mc, block, SymOperatord(c * e)), splab::delta_J(m, block, SymOperatord(e)),
                1e-10 * (1 + splab::delta_J(m, block, SymOperatord(e))));
    const double r = splab::relative_rank(m, block);
    EXPECT_NEAR(splab::relative_rank(mc, block), r, 1e-10 * r);
    const double s = splab::sigma_J_analytic(m, block, law);
    EXPECT_NEAR(splab::sigma_J_analytic(mc, block, law), s, 1e-10 * s);
  }
}

TEST(SigmaAnalytic, GaussianExample) {
  EXPECT_NEAR(splab::sigma_J_analytic(model({2, 1}), IndexBlock(1, 1), KLLaw::gaussian()), std::sqrt(10.0),
              1e-14);
}

TEST(SigmaAnalytic, UnchangedUnderScalingWithOneComplementIndex) {
  const auto m = model({3, 2, 1.5, 1});
  for (double c : {0.1, 2.0, 50.0}) {
    EXPECT_NEAR(splab::sigma_J_analytic(m.scaled(c), IndexBlock(1, 3), KLLaw::gaussian()),
                splab::sigma_J_analytic(m, IndexBlock(1, 3), KLLaw::gaussian()), 1e-12);
  }
}

TEST(SigmaAnalytic, RejectsLawWithoutFourthCumulantStructure) {
  const auto heavy = KLLaw::student(1.5, 3.5);
  EXPECT_THROW(splab::sigma_J_analytic(model({2, 1}), IndexBlock(1, 1), heavy), splab::UnsupportedLaw);
}

TEST(SigmaAnalytic, MatchesExplicitMatrixOracle) {
  // Brute force forms every M_i = T (x x^T - Sigma) T; only feasible for tiny d.
  const Eigen::Vector4d l(4, 2, 1, 0.5);
  const SpectralModel m(l);
  for (auto [a, b] : {std::pair{0, 0}, std::pair{1, 2}, std::pair{0, 1}}) {
    const double analytic = splab::sigma_J_analytic(m, IndexBlock(a + 1, b + 1), KLLaw::gaussian());
    const double brute = oracle::sigma_brute(l, a, b, 200000, 99 + a, oracle::gaussian_draw());
    EXPECT_NEAR(brute, analytic, 0.03 * analytic) << a << "," << b;
  }
}

TEST(SigmaAnalytic, SandwichEnvelope) {
  // sigma^2 lies between alpha theta_max (r - theta_max) and theta_max r max(kappa, alpha).
  std::mt19937_64 rng(26);
  for (const auto& law : {KLLaw::gaussian(), KLLaw::rademacher_product(0.5), KLLaw::two_point()}) {
    for (int trial = 0; trial < 40; ++trial) {
      const int d = 2 + static_cast<int>(rng() % 15);
      const auto m = random_model(rng, d);
      const int j1 = 1 + static_cast<int>(rng() % (d - 1));
      const IndexBlock block(j1, j1 + static_cast<int>(rng() % (d - j1)));
      const Eigen::VectorXd theta = splab::transformed_eigenvalues(m, block);
      const double r = theta.sum();
      const double tmax = theta.maxCoeff();
      const double s2 = std::pow(splab::sigma_J_analytic(m, block, law), 2);
      EXPECT_NEAR(r, splab::relative_rank(m, block), 1e-10 * r);
      EXPECT_GE(s2, law.cross_moment() * tmax * (r - tmax) * (1 - 1e-12));
      EXPECT_LE(s2, tmax * r * std::max(law.excess_fourth(), law.cross_moment()) * (1 + 1e-12));
    }
  }
}

TEST(SigmaMc, TwoPointLawIsExact) {
  const double s = splab::sigma_J_mc(model({2, 1}), IndexBlock(1, 1), KLLaw::two_point(), 10000, 5);
  EXPECT_NEAR(s, std::sqrt(2.0), 1e-12);
}

TEST(SigmaMc, GaussianConvergesAndIsStable) {
  const auto m = model({2, 1});
  const double s1 = splab::sigma_J_mc(m, IndexBlock(1, 1), KLLaw::gaussian(), 1000000, 7);
  EXPECT_NEAR(s1, std::sqrt(10.0), 0.05 * std::sqrt(10.0));
  const double s2 = splab::sigma_J_mc(m, IndexBlock(1, 1), KLLaw::gaussian(), 2000000, 8);
  EXPECT_LE(std::abs(s1 - s2), 10.0 / std::sqrt(1e6) * std::sqrt(10.0));
  EXPECT_THROW(splab::sigma_J_mc(m, IndexBlock(1, 1), KLLaw::gaussian(), 100, 1), splab::InvalidInput);
}

TEST(DeltaTail, MonotoneInMultiplier) {
  const auto m = splab::build_model(splab::ExpDecay{1.0, 20});
  const auto rec = splab::delta_tail_check(m, IndexBlock(1, 1), KLLaw::gaussian(), 1000, 200, 3, 1);
  EXPECT_GE(rec.frequency[0], rec.frequency[1]);
  EXPECT_GE(rec.frequency[1], rec.frequency[2]);
  // Regression baseline, soft: exceedance at C = 4 below 5%.
  EXPECT_LT(rec.frequency[2], 0.05);
  EXPECT_THROW(splab::delta_tail_check(m, IndexBlock(1, 1), KLLaw::gaussian(), 1000, 50, 3, 1),
               splab::InvalidInput);
}

TEST(DeltaTail, ThreadCountDoesNotChangeResult) {
  const auto m = splab::build_model(splab::ExpDecay{1.0, 10});
  const auto a = splab::delta_tail_check(m, IndexBlock(1, 2), KLLaw::gaussian(), 200, 200, 9, 1);
  const auto b = splab::delta_tail_check(m, IndexBlock(1, 2), KLLaw::gaussian(), 200, 200, 9, 3);
  EXPECT_EQ(a.frequency, b.frequency);
}

TEST(DeltaTail, QuadruplingNDoesNotIncreaseExceedance) {
  const auto m = splab::build_model(splab::ExpDecay{1.0, 10});
  const auto small = splab::delta_tail_check(m, IndexBlock(1, 1), KLLaw::gaussian(), 250, 400, 4, 1);
  const auto large = splab::delta_tail_check(m, IndexBlock(1, 1), KLLaw::gaussian(), 1000, 400, 4, 1);
  for (std::size_t c = 0; c < 3; ++c) {
    const double f = small.frequency[c];
    const double se = std::sqrt(std::max(f * (1 - f), 1.0 / 400) / 400);
    EXPECT_LE(large.frequency[c], f + 2 * se);
  }
}

TEST(DeltaTail, MinDeltaOptionNeverRaisesExceedance) {
  const auto m = splab::build_model(splab::ExpDecay{1.0, 10});
  const auto plain = splab::delta_tail_check(m, IndexBlock(1, 2), KLLaw::gaussian(), 200, 200, 10, 1);
  const auto min = splab::delta_tail_check(m, IndexBlock(1, 2), KLLaw::gaussian(), 200, 200, 10, 1, {true});
  for (std::size_t c = 0; c < 3; ++c) EXPECT_LE(min.frequency[c], plain.frequency[c]);
}

}  // namespace
