#pragma once

#include <span>
#include <vector>

namespace hddcor {

// Sample quantile with linear interpolation between order statistics
// (the "type 7" definition). prob in [0, 1].
double quantile_linear(std::vector<double> values, double prob);

// 0.9 * min(sd, IQR / 1.34) * R^(-1/5). Falls back to the sd (or 1) when the
// IQR or sd is zero.
double silverman_bandwidth(std::span<const double> samples);

// Gaussian-kernel density estimate evaluated at each grid point.
std::vector<double> gaussian_kde(std::span<const double> samples, double bandwidth,
                                 std::span<const double> grid);

// Evenly spaced points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

// max over a 512-point grid on [-4, 4] of |KDE(x) - phi(x)|, with the
// Silverman bandwidth.
double kde_max_gap_to_standard_normal(std::span<const double> samples);

}  // namespace hddcor
