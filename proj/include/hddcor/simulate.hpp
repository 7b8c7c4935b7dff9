#pragma once

#include "hddcor/hypothesis_tests.hpp"
#include "hddcor/sample.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hddcor {

using Rng = std::mt19937_64;

// Data-generating recipes. Sigma(rho) denotes the AR(1) correlation matrix
// with entries rho^|i-j|.
//   Ex1: X, Y independent N(0, Sigma(0.7))                       (null)
//   Ex2: X, Y independent N(0, Sigma(0.5))                       (null)
//   Ex3: X ~ N(0, Sigma(0.5)), Y_i = 0.2 (X_i + X_i^2) + t4 noise
//   Ex4: X ~ N(0, I), Y_i = X_i^2
//   Ex5: X ~ N(0, Sigma(0.5)), Y_i = X_i^2
//   Ex6: X ~ N(0, Sigma(0.7)), Y = (sum_i X_i)^2 / p              (q = 1)
enum class Example { Ex1 = 1, Ex2, Ex3, Ex4, Ex5, Ex6 };

std::string_view example_name(Example e);  // "ex1" .. "ex6"
Example parse_example(std::string_view name);
bool is_null_example(Example e);

struct SimConfig {
  Example example = Example::Ex2;
  Index n = 100;
  Index p = 10;
  Index q = 0;  // 0 selects the recipe's natural dimension (p, or 1 for Ex6)
  Index replicates = 2000;
  double alpha = 0.05;
  Method method = Method::NormalTn;
  std::uint64_t seed = 1;
  unsigned threads = 1;  // 0 = default_thread_count()
  Index permutations = kDefaultPermutations;
};

constexpr Index kMinReplicates = 100;

// Fills in q and checks every field; throws InputError on violation.
SimConfig validated(SimConfig cfg);

struct MCReport {
  SimConfig config;
  Index rejections = 0;
  double rate = 0.0;
  double std_error = 0.0;  // sqrt(rate (1 - rate) / replicates)
  std::optional<std::vector<double>> statistic_samples;
  std::optional<double> kde_max_gap;
};

// Draws rows from N(0, Sigma(rho)) using the lower Cholesky factor of
// Sigma(rho), computed once at construction.
class ArNormalSampler {
 public:
  ArNormalSampler(Index dim, double rho);
  SampleMatrix sample(Index n, Rng& rng) const;
  const Eigen::MatrixXd& factor() const { return lower_; }

 private:
  Eigen::MatrixXd lower_;
};

SampleMatrix sample_ar_normal(Index n, Index dim, double rho, Rng& rng);

// Holds the samplers for one configuration so they are factored once.
class ExampleGenerator {
 public:
  explicit ExampleGenerator(const SimConfig& cfg);
  std::pair<SampleMatrix, SampleMatrix> generate(Rng& rng) const;
  const SimConfig& config() const { return cfg_; }

 private:
  SimConfig cfg_;
  ArNormalSampler x_sampler_;
  std::optional<ArNormalSampler> y_sampler_;
};

std::pair<SampleMatrix, SampleMatrix> generate_example(const SimConfig& cfg, Rng& rng);

// Per-replicate decisions of several methods evaluated on the same data.
struct MCDecisions {
  SimConfig config;
  std::vector<Method> methods;
  std::vector<std::vector<char>> reject;        // [method][replicate]
  std::vector<std::vector<double>> statistic;   // [method][replicate]
};

// Replicate r draws its data from an RNG seeded with stream_seed(seed, r);
// results are identical for any thread count.
MCDecisions simulate_decisions(const SimConfig& cfg, const std::vector<Method>& methods);

MCReport summarize(const MCDecisions& d, std::size_t method_index);
// Fraction of replicates on which methods i and j reach the same decision.
double decision_agreement(const MCDecisions& d, std::size_t i, std::size_t j);

MCReport mc_rejection_rate(const SimConfig& cfg);

// T_n over the replicates of a null recipe, with the KDE gap to phi.
MCReport null_distribution_report(const SimConfig& cfg);

// One report per (grid point, method); all methods at a grid point share
// replicates. Every grid point must use the same example.
std::vector<MCReport> power_curve(const std::vector<SimConfig>& grid, const std::vector<Method>& methods);

// Plot-ready serialisations, one row/object per report.
std::string reports_to_csv(const std::vector<MCReport>& reports);
std::string reports_to_json(const std::vector<MCReport>& reports);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace hddcor
