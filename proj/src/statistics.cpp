#include "hddcor/statistics.hpp"

#include "hddcor/centering.hpp"
#include "hddcor/error.hpp"
#include "hddcor/summation.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace hddcor {

namespace {

void require_paired(const SampleMatrix& x, const SampleMatrix& y) {
  if (x.n() != y.n()) {
    throw InputError("X has " + std::to_string(x.n()) + " rows but Y has " +
                     std::to_string(y.n()));
  }
}

// Tree-summed sum_{k,l} a_kl b_kl, optionally skipping the diagonal.
double frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, bool skip_diagonal) {
  const Index n = a.rows();
  std::vector<double> cols(static_cast<std::size_t>(n));
  for (Index l = 0; l < n; ++l) {
    const double* ca = a.col(l).data();
    const double* cb = b.col(l).data();
    double s = tree_sum(0, n, [=](std::ptrdiff_t k) { return ca[k] * cb[k]; });
    if (skip_diagonal) s -= ca[l] * cb[l];
    cols[static_cast<std::size_t>(l)] = s;
  }
  return tree_sum(cols);
}

double off_diagonal_mean(const DistanceMatrix& d) {
  const Index n = d.n();
  if (n < 2) return 0.0;
  // The diagonal is zero, so the full sum is the off-diagonal sum.
  std::vector<double> cols(static_cast<std::size_t>(n));
  for (Index l = 0; l < n; ++l) {
    const double* c = d.values().col(l).data();
    cols[static_cast<std::size_t>(l)] = tree_sum(0, n, [c](std::ptrdiff_t k) { return c[k]; });
  }
  const double total = tree_sum(cols);
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// Cauchy-Schwarz bounds the ratio by 1 in magnitude; values within a few ulps
// of +-1 are roundoff and are snapped, so Y = X gives exactly 1.
double guarded_ratio(double xy, double xx, double yy) {
  const double prod = xx * yy;
  if (!(prod > 0.0)) return 0.0;
  const double r = xy / std::sqrt(prod);
  constexpr double kSnap = 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
  if (std::abs(r) >= kSnap) return r > 0.0 ? 1.0 : -1.0;
  return r;
}

}  // namespace

double vstar(const CenteredDistanceMatrix& a, const CenteredDistanceMatrix& b) {
  if (a.kind() != CenteringKind::UCentered || b.kind() != CenteringKind::UCentered) {
    throw InputError("vstar needs U-centered matrices");
  }
  if (a.n() != b.n()) throw InputError("centered matrices differ in size");
  const double n = static_cast<double>(a.n());
  return frobenius(a.values(), b.values(), true) / (n * (n - 3.0));
}

DcovEstimates dcov_estimates(const SampleMatrix& x, const SampleMatrix& y) {
  require_paired(x, y);
  if (x.n() < 4) throw InputError("sample size below 4");
  const DistanceMatrix dx = pairwise_distances(x);
  const DistanceMatrix dy = pairwise_distances(y);
  const CenteredDistanceMatrix a = u_center(dx);
  const CenteredDistanceMatrix b = u_center(dy);

  DcovEstimates est;
  est.n = x.n();
  est.vstar_xy = vstar(a, b);
  est.vstar_x = vstar(a, a);
  est.vstar_y = vstar(b, b);
  est.rstar = guarded_ratio(est.vstar_xy, est.vstar_x, est.vstar_y);
  est.mean_dist_x = off_diagonal_mean(dx);
  est.mean_dist_y = off_diagonal_mean(dy);
  return est;
}

PluginEstimates plugin_estimates(const SampleMatrix& x, const SampleMatrix& y) {
  require_paired(x, y);
  const CenteredDistanceMatrix a = double_center(pairwise_distances(x));
  const CenteredDistanceMatrix b = double_center(pairwise_distances(y));
  const double n2 = static_cast<double>(x.n()) * static_cast<double>(x.n());
  PluginEstimates est;
  est.n = x.n();
  est.vn2_xy = frobenius(a.values(), b.values(), false) / n2;
  const double vx = frobenius(a.values(), a.values(), false) / n2;
  const double vy = frobenius(b.values(), b.values(), false) / n2;
  est.rn2 = guarded_ratio(est.vn2_xy, vx, vy);
  return est;
}

double vstar(const SampleMatrix& x, const SampleMatrix& y) {
  require_paired(x, y);
  if (x.n() < 4) throw InputError("sample size below 4");
  return vstar(u_center(pairwise_distances(x)), u_center(pairwise_distances(y)));
}

double rstar(const SampleMatrix& x, const SampleMatrix& y) { return dcov_estimates(x, y).rstar; }

double plugin_vn2(const SampleMatrix& x, const SampleMatrix& y) {
  return plugin_estimates(x, y).vn2_xy;
}

double t_n_from(const DcovEstimates& est) {
  const double n = static_cast<double>(est.n);
  return std::sqrt(n * (n - 1.0) / 2.0) * est.rstar;
}

double t_n(const SampleMatrix& x, const SampleMatrix& y) { return t_n_from(dcov_estimates(x, y)); }

double t_r_from(const DcovEstimates& est) {
  const double r = est.rstar;
  if (std::abs(r) >= 1.0) throw NumericalError("studentization undefined at |R*| = 1");
  const double n = static_cast<double>(est.n);
  return std::sqrt(n * (n - 3.0) / 2.0 - 1.0) * r / std::sqrt(1.0 - r * r);
}

double t_r(const SampleMatrix& x, const SampleMatrix& y) { return t_r_from(dcov_estimates(x, y)); }

double kernel_h_from_pairs(const FourByFour& ax, const FourByFour& ay) {
  double cross = 0.0;
  double total_x = 0.0;
  double total_y = 0.0;
  double row_products = 0.0;
  for (int i = 0; i < 4; ++i) {
    double row_x = 0.0;
    double row_y = 0.0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      cross += ax[i][j] * ay[i][j];
      row_x += ax[i][j];
      row_y += ay[i][j];
    }
    row_products += row_x * row_y;
    total_x += row_x;
    total_y += row_y;
  }
  return cross / 4.0 - row_products / 4.0 + total_x * total_y / 24.0;
}

double kernel_h(const std::array<Eigen::VectorXd, 4>& xs, const std::array<Eigen::VectorXd, 4>& ys) {
  for (int i = 1; i < 4; ++i) {
    if (xs[i].size() != xs[0].size() || ys[i].size() != ys[0].size()) {
      throw InputError("kernel_h points disagree in dimension");
    }
  }
  FourByFour ax{};
  FourByFour ay{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      ax[i][j] = i == j ? 0.0 : (xs[i] - xs[j]).norm();
      ay[i][j] = i == j ? 0.0 : (ys[i] - ys[j]).norm();
    }
  }
  return kernel_h_from_pairs(ax, ay);
}

double vstar_via_ustat(const SampleMatrix& x, const SampleMatrix& y, Index max_n) {
  require_paired(x, y);
  const Index n = x.n();
  if (n < 4) throw InputError("sample size below 4");
  if (n > max_n) {
    throw InputError("brute-force U-statistic refused for n = " + std::to_string(n) +
                     " (cap " + std::to_string(max_n) + "; cost grows as n^4)");
  }
  // Every pairwise distance is needed many times; compute them once directly.
  Eigen::MatrixXd a(n, n);
  Eigen::MatrixXd b(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      a(k, l) = (x.values().row(k) - x.values().row(l)).norm();
      b(k, l) = (y.values().row(k) - y.values().row(l)).norm();
    }
  }
  double sum = 0.0;
  long long subsets = 0;
  std::array<Index, 4> idx{};
  for (idx[0] = 0; idx[0] < n; ++idx[0])
    for (idx[1] = idx[0] + 1; idx[1] < n; ++idx[1])
      for (idx[2] = idx[1] + 1; idx[2] < n; ++idx[2])
        for (idx[3] = idx[2] + 1; idx[3] < n; ++idx[3]) {
          FourByFour ax{};
          FourByFour ay{};
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
              ax[i][j] = a(idx[i], idx[j]);
              ay[i][j] = b(idx[i], idx[j]);
            }
          sum += kernel_h_from_pairs(ax, ay);
          ++subsets;
        }
  return sum / static_cast<double>(subsets);
}

}  // namespace hddcor
