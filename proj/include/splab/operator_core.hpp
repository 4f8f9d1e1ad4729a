#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "splab/error.hpp"
#include "splab/index_block.hpp"

namespace splab {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Real symmetric d x d operator expressed in the model eigenbasis.
///
/// Symmetry is exact: the constructor accepts inputs that are symmetric up to
/// round-off and then mirrors the lower triangle onto the upper one.
template <typename Scalar>
class SymOperator {
 public:
  using MatrixType = Matrix<Scalar>;

  SymOperator() = default;

  template <typename Derived>
  explicit SymOperator(const Eigen::MatrixBase<Derived>& m) : data_(m) {
    if (data_.rows() != data_.cols()) {
      throw InvalidInput("SymOperator: matrix is " + std::to_string(data_.rows()) + "x" +
                         std::to_string(data_.cols()) + ", not square");
    }
    if (data_.rows() < 1) throw InvalidInput("SymOperator: dimension must be >= 1");
    const Scalar scale = Scalar(1) + data_.cwiseAbs().maxCoeff();
    const Scalar asym = (data_ - data_.transpose()).cwiseAbs().maxCoeff();
    if (asym > Scalar(1e-9) * scale) {
      throw InvalidInput("SymOperator: matrix is not symmetric (max asymmetry " +
                         std::to_string(static_cast<double>(asym)) + ")");
    }
    const MatrixType lower = data_;
    data_.template triangularView<Eigen::StrictlyUpper>() = lower.transpose();
  }

  static SymOperator zero(Index d) { return SymOperator(MatrixType::Zero(d, d)); }
  static SymOperator identity(Index d) { return SymOperator(MatrixType::Identity(d, d)); }

  template <typename Derived>
  static SymOperator diagonal(const Eigen::MatrixBase<Derived>& diag) {
    return SymOperator(MatrixType(diag.asDiagonal()));
  }

  Index dim() const { return data_.rows(); }
  const MatrixType& matrix() const { return data_; }
  Scalar operator()(Index i, Index j) const { return data_(i, j); }

  Scalar trace() const { return data_.trace(); }

  friend SymOperator operator+(const SymOperator& a, const SymOperator& b) {
    check_same_dim(a, b);
    return SymOperator(a.data_ + b.data_);
  }
  friend SymOperator operator-(const SymOperator& a, const SymOperator& b) {
    check_same_dim(a, b);
    return SymOperator(a.data_ - b.data_);
  }
  friend SymOperator operator*(Scalar c, const SymOperator& a) { return SymOperator(c * a.data_); }

  static void check_same_dim(const SymOperator& a, const SymOperator& b) {
    if (a.dim() != b.dim()) {
      throw InvalidInput("SymOperator: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
    }
  }

 private:
  MatrixType data_;
};

/// Spectral decomposition with eigenvalues sorted non-increasing.
///
/// Eigenvector columns follow a fixed sign convention: the first coordinate
/// whose magnitude exceeds 1e-12 is positive.
template <typename Scalar>
struct EigenSystem {
  Vector<Scalar> values;
  Matrix<Scalar> vectors;

  Index dim() const { return values.size(); }
};

namespace detail {

template <typename Scalar>
void fix_sign(Eigen::Ref<Vector<Scalar>> v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > Scalar(1e-12)) {
      if (v(i) < Scalar(0)) v = -v;
      return;
    }
  }
}

}  // namespace detail

template <typename Scalar>
EigenSystem<Scalar> eigh(const SymOperator<Scalar>& op) {
  const auto& m = op.matrix();
  if (!m.allFinite()) throw InvalidInput("eigh: operator has non-finite entries");

  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw InvalidInput("eigh: eigensolver did not converge");

  const Index d = op.dim();
  EigenSystem<Scalar> es;
  es.values = solver.eigenvalues().reverse();
  es.vectors = solver.eigenvectors().rowwise().reverse();
  for (Index j = 0; j < d; ++j) detail::fix_sign<Scalar>(es.vectors.col(j));
  return es;
}

/// Orthogonal projector onto span{u_j : j in J}.
template <typename Scalar>
SymOperator<Scalar> projector(const EigenSystem<Scalar>& es, const IndexBlock& block) {
  block.check(es.dim());
  const auto cols = es.vectors.middleCols(block.first(), block.size());
  return SymOperator<Scalar>(cols * cols.transpose());
}

/// Coordinate projector P_J = sum_{j in J} e_j e_j^T in the model basis.
template <typename Scalar>
SymOperator<Scalar> coordinate_projector(Index dim, const IndexBlock& block) {
  block.check(dim);
  Vector<Scalar> diag = Vector<Scalar>::Zero(dim);
  diag.segment(block.first(), block.size()).setOnes();
  return SymOperator<Scalar>::diagonal(diag);
}

inline constexpr double kSchattenInf = std::numeric_limits<double>::infinity();

/// Schatten q-norm for q in {1, 2, 3, inf}.
template <typename Scalar>
Scalar schatten_norm(const SymOperator<Scalar>& op, double q) {
  const bool supported = q == 1.0 || q == 2.0 || q == 3.0 || q == kSchattenInf;
  if (!supported) throw InvalidInput("schatten_norm: unsupported q = " + std::to_string(q));

  if (q == 2.0) return op.matrix().norm();

  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(op.matrix(), Eigen::EigenvaluesOnly);
  const Vector<Scalar> abs_values = solver.eigenvalues().cwiseAbs();
  if (q == kSchattenInf) return abs_values.maxCoeff();
  if (q == 1.0) return abs_values.sum();
  return std::cbrt(abs_values.array().cube().sum());
}

/// Squared Hilbert-Schmidt distance ||a - b||_2^2.
template <typename Scalar>
Scalar hs_distance_sq(const SymOperator<Scalar>& a, const SymOperator<Scalar>& b) {
  SymOperator<Scalar>::check_same_dim(a, b);
  return (a.matrix() - b.matrix()).squaredNorm();
}

/// Trace inner product tr(a b).
template <typename Scalar>
Scalar trace_inner(const SymOperator<Scalar>& a, const SymOperator<Scalar>& b) {
  SymOperator<Scalar>::check_same_dim(a, b);
  return a.matrix().cwiseProduct(b.matrix()).sum();
}

using SymOperatord = SymOperator<double>;
using EigenSystemd = EigenSystem<double>;

}  // namespace splab
