#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hddcor {

using Index = Eigen::Index;

// n observations of a d-dimensional vector, one observation per row.
// Construction rejects empty shapes and non-finite entries, so every
// SampleMatrix in circulation is valid.
class SampleMatrix {
 public:
  explicit SampleMatrix(Eigen::MatrixXd values);

  static SampleMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  // A single coordinate observed n times.
  static SampleMatrix from_column(std::span<const double> column);

  Index n() const { return values_.rows(); }
  Index dim() const { return values_.cols(); }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(Index row, Index col) const { return values_(row, col); }

  SampleMatrix column(Index j) const;
  // Row k of the result is row perm[k] of this matrix.
  SampleMatrix permute_rows(std::span<const Index> perm) const;
  SampleMatrix row_block(Index first, Index count) const;

 private:
  Eigen::MatrixXd values_;
};

// Pairwise Euclidean distances: symmetric, zero diagonal, nonnegative.
class DistanceMatrix {
 public:
  // Checks symmetry, zero diagonal and nonnegativity.
  explicit DistanceMatrix(Eigen::MatrixXd values);

  Index n() const { return values_.rows(); }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(Index k, Index l) const { return values_(k, l); }

 private:
  struct Trusted {};
  DistanceMatrix(Eigen::MatrixXd values, Trusted) : values_(std::move(values)) {}
  friend DistanceMatrix pairwise_distances(const SampleMatrix& x);

  Eigen::MatrixXd values_;
};

enum class CenteringKind { DoubleCentered, UCentered };

class CenteredDistanceMatrix {
 public:
  CenteredDistanceMatrix(Eigen::MatrixXd values, CenteringKind kind)
      : values_(std::move(values)), kind_(kind) {}

  Index n() const { return values_.rows(); }
  CenteringKind kind() const { return kind_; }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(Index k, Index l) const { return values_(k, l); }

 private:
  Eigen::MatrixXd values_;
  CenteringKind kind_;
};

}  // namespace hddcor
