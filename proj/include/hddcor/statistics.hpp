#pragma once

#include "hddcor/sample.hpp"

#include <array>

namespace hddcor {

// Unbiased squared distance covariances and the bias-corrected distance
// correlation of one (X, Y) sample, computed from a single pair of
// U-centered matrices.
struct DcovEstimates {
  double vstar_xy = 0.0;
  double vstar_x = 0.0;
  double vstar_y = 0.0;
  // vstar_xy / sqrt(vstar_x * vstar_y), or exactly 0 when that product is <= 0.
  double rstar = 0.0;
  // Mean off-diagonal distance (1/(n(n-1))) sum_{i != j} a_ij, and the same for Y.
  double mean_dist_x = 0.0;
  double mean_dist_y = 0.0;
  Index n = 0;
};

struct PluginEstimates {
  double vn2_xy = 0.0;
  double rn2 = 0.0;
  Index n = 0;
};

DcovEstimates dcov_estimates(const SampleMatrix& x, const SampleMatrix& y);
PluginEstimates plugin_estimates(const SampleMatrix& x, const SampleMatrix& y);

double vstar(const SampleMatrix& x, const SampleMatrix& y);
double rstar(const SampleMatrix& x, const SampleMatrix& y);
double plugin_vn2(const SampleMatrix& x, const SampleMatrix& y);

// Frobenius inner product over k != l of two U-centered matrices, divided by
// n(n-3).
double vstar(const CenteredDistanceMatrix& a, const CenteredDistanceMatrix& b);

// sqrt(n(n-1)/2) * rstar.
double t_n(const SampleMatrix& x, const SampleMatrix& y);
double t_n_from(const DcovEstimates& est);

// sqrt(n(n-3)/2 - 1) * rstar / sqrt(1 - rstar^2). Throws NumericalError when
// |rstar| >= 1.
double t_r(const SampleMatrix& x, const SampleMatrix& y);
double t_r_from(const DcovEstimates& est);

// The symmetric four-point kernel whose average over 4-subsets is vstar.
// ax and ay hold the six pairwise quantities of the four points (any
// symmetric 4x4 with zero diagonal); the combination is linear in each.
using FourByFour = std::array<std::array<double, 4>, 4>;
double kernel_h_from_pairs(const FourByFour& ax, const FourByFour& ay);

double kernel_h(const std::array<Eigen::VectorXd, 4>& xs, const std::array<Eigen::VectorXd, 4>& ys);

constexpr Index kUStatisticDefaultCap = 12;

// Average of kernel_h over every 4-subset of the rows. O(n^4); refuses
// n > max_n.
double vstar_via_ustat(const SampleMatrix& x, const SampleMatrix& y,
                       Index max_n = kUStatisticDefaultCap);

}  // namespace hddcor
