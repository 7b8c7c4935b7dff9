#include "hddcor/kde.hpp"

#include "hddcor/error.hpp"
#include "hddcor/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace hddcor {

double quantile_linear(std::vector<double> values, double prob) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw InputError("quantile probability outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double silverman_bandwidth(std::span<const double> samples) {
  const std::size_t r = samples.size();
  if (r < 2) throw InputError("bandwidth needs at least two samples");
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(r);
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(r - 1));
  std::vector<double> copy(samples.begin(), samples.end());
  const double iqr = quantile_linear(copy, 0.75) - quantile_linear(copy, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd > 0.0 ? sd : (iqr > 0.0 ? iqr / 1.34 : 1.0);
  return 0.9 * spread * std::pow(static_cast<double>(r), -0.2);
}

std::vector<double> gaussian_kde(std::span<const double> samples, double bandwidth,
                                 std::span<const double> grid) {
  if (samples.empty()) throw InputError("density estimate of an empty sample");
  if (!(bandwidth > 0.0)) throw InputError("bandwidth must be positive");
  const double norm = 1.0 / (static_cast<double>(samples.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double s = 0.0;
    for (double v : samples) {
      const double z = (grid[g] - v) / bandwidth;
      s += std::exp(-0.5 * z * z);
    }
    out[g] = s * norm;
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw InputError("grid needs at least two points");
  std::vector<double> g(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

double kde_max_gap_to_standard_normal(std::span<const double> samples) {
  const std::vector<double> grid = linear_grid(-4.0, 4.0, 512);
  const std::vector<double> density = gaussian_kde(samples, silverman_bandwidth(samples), grid);
  double gap = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) gap = std::max(gap, std::abs(density[i] - normal_pdf(grid[i])));
  return gap;
}

}  // namespace hddcor
