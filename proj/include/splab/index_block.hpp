#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "splab/error.hpp"

namespace splab {

using Index = Eigen::Index;

/// Contiguous index interval J = {j1, ..., j2}, 1-based and inclusive.
///
/// Accessors named j1()/j2() speak the 1-based convention; first()/last()
/// and contains() speak 0-based storage offsets.
class IndexBlock {
 public:
  IndexBlock(Index j1, Index j2) : j1_(j1), j2_(j2) {
    if (j1 < 1 || j2 < j1) {
      throw InvalidInput("IndexBlock: need 1 <= j1 <= j2, got {" + std::to_string(j1) + ", " +
                         std::to_string(j2) + "}");
    }
  }

  static IndexBlock single(Index j) { return {j, j}; }
  static IndexBlock leading(Index j2) { return {1, j2}; }

  Index j1() const { return j1_; }
  Index j2() const { return j2_; }
  Index first() const { return j1_ - 1; }
  Index last() const { return j2_ - 1; }
  Index size() const { return j2_ - j1_ + 1; }

  bool contains(Index k) const { return k >= first() && k <= last(); }

  void check(Index dim) const {
    if (j2_ > dim) {
      throw InvalidInput("IndexBlock {" + std::to_string(j1_) + ".." + std::to_string(j2_) +
                         "} exceeds dimension " + std::to_string(dim));
    }
  }

  bool covers(Index dim) const { return j1_ == 1 && j2_ == dim; }

  Index complement_size(Index dim) const { return dim - size(); }

  /// J^c as an interval, when it is one (j1 == 1 or j2 == dim).
  std::optional<IndexBlock> complement_interval(Index dim) const {
    check(dim);
    if (covers(dim)) return std::nullopt;
    if (j1_ == 1) return IndexBlock(j2_ + 1, dim);
    if (j2_ == dim) return IndexBlock(1, j1_ - 1);
    return std::nullopt;
  }

  std::string to_string() const {
    return "{" + std::to_string(j1_) + ".." + std::to_string(j2_) + "}";
  }

  friend bool operator==(const IndexBlock&, const IndexBlock&) = default;

 private:
  Index j1_;
  Index j2_;
};

}  // namespace splab
