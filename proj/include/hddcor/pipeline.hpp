#pragma once

#include "hddcor/hypothesis_tests.hpp"
#include "hddcor/sample.hpp"

#include <span>
#include <string>
#include <vector>

namespace hddcor {

// Date-keyed numeric series. Dates are opaque strings ordered
// lexicographically (ISO-8601 sorts correctly); rows are strictly increasing
// by date. Missing cells are NaN before cleaning and absent after.
struct TimeSeriesTable {
  std::vector<std::string> dates;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // n_rows x n_cols

  Index n_rows() const { return static_cast<Index>(dates.size()); }
  Index n_cols() const { return static_cast<Index>(columns.size()); }

  // Rows [last - length + 1, last] as a sample.
  SampleMatrix window(Index last, Index length) const;
};

// Parses a CSV whose first column is "date"; empty cells become NaN.
// Rows are sorted by date; duplicate dates are rejected.
TimeSeriesTable parse_time_series(const std::string& csv_text);
TimeSeriesTable read_time_series(const std::string& path);

struct AlignedTables {
  TimeSeriesTable x;
  TimeSeriesTable y;
  std::vector<std::string> dropped_x;  // columns removed for missing cells
  std::vector<std::string> dropped_y;
};

// Inner join on dates, then drop every column that still has a missing cell.
AlignedTables align_tables(const TimeSeriesTable& x, const TimeSeriesTable& y);
AlignedTables load_and_align(const std::string& file_x, const std::string& file_y);

struct PValueRecord {
  std::string date;
  double statistic = 0.0;
  double p_value = 1.0;
};

struct PValueSeries {
  std::vector<PValueRecord> records;
  Index window = 0;
  Method method = Method::NormalTn;
};

struct RollingOptions {
  Index permutations = kDefaultPermutations;  // rv / mdcor only
  std::uint64_t seed = 0;                     // window t uses stream_seed(seed, t)
  unsigned threads = 1;                       // 0 = default_thread_count()
};

// One record per date t with at least `window` rows up to and including t,
// computed on exactly those trailing rows.
PValueSeries rolling_pvalues(const TimeSeriesTable& x, const TimeSeriesTable& y, Index window, Method method,
                             const RollingOptions& opts = {});

// Benjamini-Hochberg step-up: the largest sorted p_(k) with p_(k) <= k q / m,
// or 0 when no k qualifies.
double bh_cutoff(std::span<const double> pvalues, double q);

constexpr double kDefaultFdrLevel = 0.10;

struct ComparisonRow {
  std::string date;
  double tn_statistic = 0.0;
  double tn_p_value = 1.0;
  double rv_statistic = 0.0;
  double rv_p_value = 1.0;
};

struct RollingComparison {
  std::vector<ComparisonRow> rows;
  Index window = 0;
  double q = kDefaultFdrLevel;
  double tn_cutoff = 0.0;
  double rv_cutoff = 0.0;
};

// Per-date T_n (normal) and RV (permutation) p-values with each method's BH
// cutoff at level q.
RollingComparison rolling_compare(const TimeSeriesTable& x, const TimeSeriesTable& y, Index window,
                                  double q = kDefaultFdrLevel, const RollingOptions& opts = {});

// Dates whose p-value is at or below a positive cutoff.
std::vector<std::string> flagged_dates(const PValueSeries& series, double cutoff);

std::string series_to_csv(const PValueSeries& series, double cutoff);
std::string comparison_to_csv(const RollingComparison& cmp);
std::string cutoff_json(const PValueSeries& series, double q, double cutoff);
std::string comparison_cutoff_json(const RollingComparison& cmp);

}  // namespace hddcor
