#pragma once

#include "hddcor/oracle.hpp"
#include "hddcor/pipeline.hpp"
#include "hddcor/sample.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hddcor::testing {

using TestRng = std::mt19937_64;

SampleMatrix gaussian_sample(Index n, Index dim, TestRng& rng);
// Small integers in [-3, 3], so distance ties and exact zeros occur.
SampleMatrix integer_sample(Index n, Index dim, TestRng& rng);

// Random joint with `atoms` atoms, integer coordinates and random weights.
DiscreteJoint random_joint(std::size_t atoms, Index px, Index py, TestRng& rng);
// X and Y independent: product of two random marginals.
DiscreteJoint random_product_joint(std::size_t x_atoms, std::size_t y_atoms, Index px, Index py, TestRng& rng);
// X uniform on {0, 1} with Y = X.
DiscreteJoint bernoulli_self_pair();

// Consecutive calendar dates starting 2015-01-01, as ISO-8601 strings.
std::vector<std::string> iso_dates(Index count);

std::string to_csv(const TimeSeriesTable& t);

struct PlantedFixture {
  TimeSeriesTable x;
  TimeSeriesTable y;
  Index signal_begin = 0;  // rows [signal_begin, signal_end) carry dependence
  Index signal_end = 0;
};

enum class SignalKind { None, Quadratic, Cosine, Linear };

// X has i.i.d. N(0,1) columns. Outside the signal rows Y is independent
// noise. Inside, Quadratic sets Y_j = (row-sum of X / sqrt(cols))^2 - 1 + noise,
// Cosine sets Y_j = sqrt(2) (cos(2 X_j) - e^-2) + noise and Linear sets
// Y = X B + noise. The first two have no linear correlation with X.
PlantedFixture planted_fixture(SignalKind kind, std::uint64_t seed, Index rows = 400, Index x_cols = 20,
                               Index y_cols = 5, Index signal_begin = 150, Index signal_end = 300,
                               double noise = 0.5);

// 755 dates, 500 X columns and 22 Y columns. The Y file has 10 extra dates
// not present in X, and a handful of columns in each file have blank cells.
struct WideFixture {
  std::string x_csv;
  std::string y_csv;
  std::vector<std::string> blank_x_columns;
  std::vector<std::string> blank_y_columns;
};
WideFixture wide_fixture(std::uint64_t seed);

}  // namespace hddcor::testing
