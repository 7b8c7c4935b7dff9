#include "hddcor/pipeline.hpp"

#include "hddcor/csv.hpp"
#include "hddcor/error.hpp"
#include "hddcor/parallel.hpp"
#include "hddcor/simulate.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace hddcor {

namespace {

void require_window(const TimeSeriesTable& x, const TimeSeriesTable& y, Index window) {
  if (x.dates != y.dates) throw InputError("tables do not share dates; align them first");
  if (window < 4) throw InputError("window must be at least 4");
  if (window > x.n_rows()) {
    throw InputError("window " + std::to_string(window) + " larger than table (" + std::to_string(x.n_rows()) +
                     " rows)");
  }
  if (x.n_cols() < 1 || y.n_cols() < 1) throw InputError("table has no usable columns");
}

TimeSeriesTable select_rows(const TimeSeriesTable& t, const std::vector<Index>& rows) {
  TimeSeriesTable out;
  out.columns = t.columns;
  out.values.resize(static_cast<Index>(rows.size()), t.n_cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.dates.push_back(t.dates[static_cast<std::size_t>(rows[r])]);
    out.values.row(static_cast<Index>(r)) = t.values.row(rows[r]);
  }
  return out;
}

std::vector<std::string> drop_missing_columns(TimeSeriesTable& t) {
  std::vector<std::string> dropped;
  std::vector<Index> keep;
  for (Index j = 0; j < t.n_cols(); ++j) {
    if (t.values.col(j).array().isNaN().any()) {
      dropped.push_back(t.columns[static_cast<std::size_t>(j)]);
    } else {
      keep.push_back(j);
    }
  }
  Eigen::MatrixXd kept(t.n_rows(), static_cast<Index>(keep.size()));
  std::vector<std::string> names;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    kept.col(static_cast<Index>(k)) = t.values.col(keep[k]);
    names.push_back(t.columns[static_cast<std::size_t>(keep[k])]);
  }
  t.values = std::move(kept);
  t.columns = std::move(names);
  return dropped;
}

}  // namespace

SampleMatrix TimeSeriesTable::window(Index last, Index length) const {
  return SampleMatrix(values.middleRows(last - length + 1, length));
}

TimeSeriesTable parse_time_series(const std::string& csv_text) {
  const CsvTable csv = parse_csv(csv_text);
  if (csv.header.empty() || csv.header.front() != "date") {
    throw InputError("first CSV column must be named \"date\"");
  }
  const std::size_t cols = csv.header.size() - 1;
  std::vector<std::size_t> order(csv.rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return csv.rows[a][0] < csv.rows[b][0]; });

  TimeSeriesTable t;
  t.columns.assign(csv.header.begin() + 1, csv.header.end());
  t.values.resize(static_cast<Index>(csv.rows.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& row = csv.rows[order[r]];
    if (row[0].empty()) throw InputError("empty date on data line " + std::to_string(order[r] + 2));
    if (!t.dates.empty() && t.dates.back() == row[0]) throw InputError("duplicate date " + row[0]);
    t.dates.push_back(row[0]);
    for (std::size_t j = 0; j < cols; ++j) {
      std::optional<double> v;
      try {
        v = parse_numeric_cell(row[j + 1]);
      } catch (const InputError& e) {
        throw InputError(std::string(e.what()) + " at date " + row[0] + ", column " + t.columns[j]);
      }
      t.values(static_cast<Index>(r), static_cast<Index>(j)) = v ? *v : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return t;
}

TimeSeriesTable read_time_series(const std::string& path) {
  try {
    return parse_time_series(read_text_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

AlignedTables align_tables(const TimeSeriesTable& x, const TimeSeriesTable& y) {
  std::unordered_map<std::string, Index> y_rows;
  for (Index r = 0; r < y.n_rows(); ++r) y_rows.emplace(y.dates[static_cast<std::size_t>(r)], r);
  std::vector<Index> xr;
  std::vector<Index> yr;
  for (Index r = 0; r < x.n_rows(); ++r) {
    const auto it = y_rows.find(x.dates[static_cast<std::size_t>(r)]);
    if (it == y_rows.end()) continue;
    xr.push_back(r);
    yr.push_back(it->second);
  }
  if (xr.empty()) throw InputError("empty date intersection");
  AlignedTables out;
  out.x = select_rows(x, xr);
  out.y = select_rows(y, yr);
  out.dropped_x = drop_missing_columns(out.x);
  out.dropped_y = drop_missing_columns(out.y);
  return out;
}

AlignedTables load_and_align(const std::string& file_x, const std::string& file_y) {
  return align_tables(read_time_series(file_x), read_time_series(file_y));
}

PValueSeries rolling_pvalues(const TimeSeriesTable& x, const TimeSeriesTable& y, Index window, Method method,
                             const RollingOptions& opts) {
  require_window(x, y, window);
  const Index first = window - 1;
  const auto count = static_cast<std::size_t>(x.n_rows() - first);
  PValueSeries series;
  series.window = window;
  series.method = method;
  series.records.resize(count);
  // The decision threshold is irrelevant here; only statistic and p-value are kept.
  constexpr double kUnusedAlpha = 0.05;
  parallel_for(count, opts.threads, [&](std::size_t i) {
    const Index last = first + static_cast<Index>(i);
    const PermutationOptions popts{opts.permutations, stream_seed(opts.seed, static_cast<std::uint64_t>(last)), 1};
    const TestResult r = run_test(method, x.window(last, window), y.window(last, window), kUnusedAlpha, popts);
    series.records[i] = {x.dates[static_cast<std::size_t>(last)], r.statistic, r.p_value};
  });
  return series;
}

double bh_cutoff(std::span<const double> pvalues, double q) {
  if (pvalues.empty()) throw InputError("no p-values");
  if (!(q > 0.0 && q < 1.0)) throw InputError("FDR level must lie in (0, 1)");
  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  for (double p : sorted) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p-value outside [0, 1]");
  }
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  for (std::size_t k = sorted.size(); k >= 1; --k) {
    if (sorted[k - 1] <= static_cast<double>(k) * q / m) return sorted[k - 1];
  }
  return 0.0;
}

RollingComparison rolling_compare(const TimeSeriesTable& x, const TimeSeriesTable& y, Index window, double q,
                                  const RollingOptions& opts) {
  const PValueSeries tn = rolling_pvalues(x, y, window, Method::NormalTn, opts);
  const PValueSeries rv = rolling_pvalues(x, y, window, Method::RvPermutation, opts);
  RollingComparison cmp;
  cmp.window = window;
  cmp.q = q;
  std::vector<double> tn_p;
  std::vector<double> rv_p;
  for (std::size_t i = 0; i < tn.records.size(); ++i) {
    cmp.rows.push_back({tn.records[i].date, tn.records[i].statistic, tn.records[i].p_value,
                        rv.records[i].statistic, rv.records[i].p_value});
    tn_p.push_back(tn.records[i].p_value);
    rv_p.push_back(rv.records[i].p_value);
  }
  cmp.tn_cutoff = bh_cutoff(tn_p, q);
  cmp.rv_cutoff = bh_cutoff(rv_p, q);
  return cmp;
}

std::vector<std::string> flagged_dates(const PValueSeries& series, double cutoff) {
  std::vector<std::string> out;
  if (!(cutoff > 0.0)) return out;
  for (const auto& r : series.records) {
    if (r.p_value <= cutoff) out.push_back(r.date);
  }
  return out;
}

std::string series_to_csv(const PValueSeries& series, double cutoff) {
  std::ostringstream os;
  os << "date,statistic,p_value,flagged\n";
  for (const auto& r : series.records) {
    const bool flagged = cutoff > 0.0 && r.p_value <= cutoff;
    os << r.date << ',' << format_double(r.statistic) << ',' << format_double(r.p_value) << ',' << (flagged ? 1 : 0)
       << '\n';
  }
  return os.str();
}

std::string comparison_to_csv(const RollingComparison& cmp) {
  std::ostringstream os;
  os << "date,normal_tn_statistic,normal_tn_p_value,normal_tn_flagged,rv_statistic,rv_p_value,rv_flagged\n";
  for (const auto& r : cmp.rows) {
    const bool tn_flag = cmp.tn_cutoff > 0.0 && r.tn_p_value <= cmp.tn_cutoff;
    const bool rv_flag = cmp.rv_cutoff > 0.0 && r.rv_p_value <= cmp.rv_cutoff;
    os << r.date << ',' << format_double(r.tn_statistic) << ',' << format_double(r.tn_p_value) << ','
       << (tn_flag ? 1 : 0) << ',' << format_double(r.rv_statistic) << ',' << format_double(r.rv_p_value) << ','
       << (rv_flag ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string cutoff_json(const PValueSeries& series, double q, double cutoff) {
  const nlohmann::json j = {{"method", method_name(series.method)}, {"q", q}, {"cutoff", cutoff}};
  return j.dump() + "\n";
}

std::string comparison_cutoff_json(const RollingComparison& cmp) {
  nlohmann::json j = nlohmann::json::array();
  j.push_back({{"method", method_name(Method::NormalTn)}, {"q", cmp.q}, {"cutoff", cmp.tn_cutoff}});
  j.push_back({{"method", method_name(Method::RvPermutation)}, {"q", cmp.q}, {"cutoff", cmp.rv_cutoff}});
  return j.dump() + "\n";
}

}  // namespace hddcor
