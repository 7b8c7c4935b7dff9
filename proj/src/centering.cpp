#include "hddcor/centering.hpp"

#include "hddcor/error.hpp"
#include "hddcor/summation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hddcor {

namespace {

// Below this fraction of ||x_k||^2 + ||x_l||^2 the Gram expansion has lost
// too many digits; those pairs are recomputed from the original coordinates.
constexpr double kGramRefineFraction = 1e-6;

Eigen::VectorXd row_sums(const Eigen::MatrixXd& m) {
  const Index n = m.rows();
  Eigen::VectorXd sums(n);
  // Distance matrices are symmetric, so column sums are row sums and the
  // column-major storage is walked contiguously.
  for (Index l = 0; l < n; ++l) {
    const double* col = m.col(l).data();
    sums(l) = tree_sum(0, n, [col](std::ptrdiff_t k) { return col[k]; });
  }
  return sums;
}

}  // namespace

DistanceMatrix pairwise_distances(const SampleMatrix& x) {
  const Index n = x.n();
  // Distances are translation invariant; centering the columns first keeps
  // the Gram entries small and the cancellation mild.
  const Eigen::MatrixXd centered = x.values().rowwise() - x.values().colwise().mean();
  Eigen::MatrixXd gram(n, n);
  gram.setZero();
  gram.selfadjointView<Eigen::Upper>().rankUpdate(centered);
  const Eigen::VectorXd sq = gram.diagonal();

  Eigen::MatrixXd dist(n, n);
  for (Index l = 0; l < n; ++l) {
    dist(l, l) = 0.0;
    for (Index k = 0; k < l; ++k) {
      const double norms = sq(k) + sq(l);
      double d2 = norms - 2.0 * gram(k, l);
      if (d2 < kGramRefineFraction * norms) {
        d2 = (x.values().row(k) - x.values().row(l)).squaredNorm();
      }
      const double d = std::sqrt(std::max(0.0, d2));
      dist(k, l) = d;
      dist(l, k) = d;
    }
  }
  return DistanceMatrix(std::move(dist), DistanceMatrix::Trusted{});
}

CenteredDistanceMatrix double_center(const DistanceMatrix& d) {
  const Index n = d.n();
  const Eigen::VectorXd sums = row_sums(d.values());
  const double grand = tree_sum(std::span<const double>(sums.data(), static_cast<std::size_t>(n)));
  const double inv_n = 1.0 / static_cast<double>(n);
  const Eigen::VectorXd means = sums * inv_n;
  const double grand_mean = grand * inv_n * inv_n;

  Eigen::MatrixXd c(n, n);
  for (Index l = 0; l < n; ++l) {
    for (Index k = 0; k < n; ++k) c(k, l) = d(k, l) - means(k) - means(l) + grand_mean;
  }
  return CenteredDistanceMatrix(std::move(c), CenteringKind::DoubleCentered);
}

CenteredDistanceMatrix u_center(const DistanceMatrix& d) {
  const Index n = d.n();
  if (n < 4) throw InputError("sample size below 4");
  const Eigen::VectorXd sums = row_sums(d.values());
  const double grand = tree_sum(std::span<const double>(sums.data(), static_cast<std::size_t>(n)));
  const double nn = static_cast<double>(n);
  const Eigen::VectorXd means = sums / (nn - 2.0);
  const double grand_mean = grand / ((nn - 1.0) * (nn - 2.0));

  Eigen::MatrixXd c(n, n);
  for (Index l = 0; l < n; ++l) {
    for (Index k = 0; k < n; ++k) {
      c(k, l) = k == l ? 0.0 : d(k, l) - means(k) - means(l) + grand_mean;
    }
  }
  return CenteredDistanceMatrix(std::move(c), CenteringKind::UCentered);
}

double centering_residual(const CenteredDistanceMatrix& c) {
  const Index n = c.n();
  const double scale = std::max(1.0, c.values().cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (Index k = 0; k < n; ++k) {
    double row = 0.0;
    double col = 0.0;
    for (Index l = 0; l < n; ++l) {
      if (c.kind() == CenteringKind::UCentered && l == k) continue;
      row += c(k, l);
      col += c(l, k);
    }
    worst = std::max({worst, std::abs(row), std::abs(col)});
  }
  return worst / scale;
}

}  // namespace hddcor
