#include "hddcor/sample.hpp"

#include "hddcor/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hddcor {

SampleMatrix::SampleMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw InputError("sample matrix must have at least one row and one column");
  }
  for (Index j = 0; j < values_.cols(); ++j) {
    for (Index i = 0; i < values_.rows(); ++i) {
      if (!std::isfinite(values_(i, j))) {
        throw InputError("non-finite entry at row " + std::to_string(i) + ", column " +
                         std::to_string(j));
      }
    }
  }
}

SampleMatrix SampleMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Index>(rows.size());
  const auto d = n > 0 ? static_cast<Index>(rows.begin()->size()) : 0;
  Eigen::MatrixXd m(n, d);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != d) throw InputError("ragged rows");
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return SampleMatrix(std::move(m));
}

SampleMatrix SampleMatrix::from_column(std::span<const double> column) {
  Eigen::MatrixXd m(static_cast<Index>(column.size()), 1);
  for (std::size_t i = 0; i < column.size(); ++i) m(static_cast<Index>(i), 0) = column[i];
  return SampleMatrix(std::move(m));
}

SampleMatrix SampleMatrix::column(Index j) const {
  if (j < 0 || j >= dim()) throw InputError("column index out of range");
  return SampleMatrix(values_.col(j));
}

SampleMatrix SampleMatrix::permute_rows(std::span<const Index> perm) const {
  if (static_cast<Index>(perm.size()) != n()) throw InputError("permutation length differs from n");
  Eigen::MatrixXd m(n(), dim());
  for (Index k = 0; k < n(); ++k) {
    const Index src = perm[static_cast<std::size_t>(k)];
    if (src < 0 || src >= n()) throw InputError("permutation index out of range");
    m.row(k) = values_.row(src);
  }
  return SampleMatrix(std::move(m));
}

SampleMatrix SampleMatrix::row_block(Index first, Index count) const {
  if (first < 0 || count < 1 || first + count > n()) throw InputError("row block out of range");
  return SampleMatrix(values_.middleRows(first, count));
}

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols() || values_.rows() < 1) {
    throw InputError("distance matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
  for (Index k = 0; k < n(); ++k) {
    if (values_(k, k) != 0.0) throw InputError("distance matrix diagonal must be zero");
    for (Index l = 0; l < n(); ++l) {
      if (!std::isfinite(values_(k, l)) || values_(k, l) < 0.0) {
        throw InputError("distance entries must be finite and nonnegative");
      }
      if (std::abs(values_(k, l) - values_(l, k)) > 1e-12 * scale) {
        throw InputError("distance matrix must be symmetric");
      }
    }
  }
}

}  // namespace hddcor
