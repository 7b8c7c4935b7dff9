#pragma once

#include <cstddef>
#include <span>

namespace hddcor {

// Pairwise (cascade) summation of term(first) .. term(first + count - 1).
// Roundoff grows as O(log count) instead of O(count).
template <typename Term>
double tree_sum(std::ptrdiff_t first, std::ptrdiff_t count, const Term& term) {
  if (count <= 16) {
    double s = 0.0;
    for (std::ptrdiff_t i = first; i < first + count; ++i) s += term(i);
    return s;
  }
  const std::ptrdiff_t half = count / 2;
  return tree_sum(first, half, term) + tree_sum(first + half, count - half, term);
}

inline double tree_sum(std::span<const double> values) {
  return tree_sum(0, static_cast<std::ptrdiff_t>(values.size()),
                  [&](std::ptrdiff_t i) { return values[static_cast<std::size_t>(i)]; });
}

}  // namespace hddcor
