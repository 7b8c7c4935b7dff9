#include "fixtures.hpp"

#include "hddcor/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace hddcor::testing {

SampleMatrix gaussian_sample(Index n, Index dim, TestRng& rng) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(n, dim);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < dim; ++j) m(i, j) = z(rng);
  }
  return SampleMatrix(std::move(m));
}

SampleMatrix integer_sample(Index n, Index dim, TestRng& rng) {
  std::uniform_int_distribution<int> u(-3, 3);
  Eigen::MatrixXd m(n, dim);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < dim; ++j) m(i, j) = u(rng);
  }
  return SampleMatrix(std::move(m));
}

namespace {

Eigen::VectorXd integer_point(Index dim, TestRng& rng) {
  std::uniform_int_distribution<int> u(-4, 4);
  Eigen::VectorXd v(dim);
  for (Index j = 0; j < dim; ++j) v(j) = u(rng);
  return v;
}

std::vector<double> random_weights(std::size_t count, TestRng& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(count);
  double total = 0.0;
  for (auto& v : w) {
    v = u(rng);
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

}  // namespace

DiscreteJoint random_joint(std::size_t atoms, Index px, Index py, TestRng& rng) {
  const auto w = random_weights(atoms, rng);
  std::vector<Atom> list;
  for (std::size_t a = 0; a < atoms; ++a) list.push_back({integer_point(px, rng), integer_point(py, rng), w[a]});
  return DiscreteJoint(std::move(list));
}

DiscreteJoint random_product_joint(std::size_t x_atoms, std::size_t y_atoms, Index px, Index py, TestRng& rng) {
  const auto wx = random_weights(x_atoms, rng);
  const auto wy = random_weights(y_atoms, rng);
  std::vector<Eigen::VectorXd> xs;
  std::vector<Eigen::VectorXd> ys;
  for (std::size_t a = 0; a < x_atoms; ++a) xs.push_back(integer_point(px, rng));
  for (std::size_t b = 0; b < y_atoms; ++b) ys.push_back(integer_point(py, rng));
  std::vector<Atom> list;
  for (std::size_t a = 0; a < x_atoms; ++a) {
    for (std::size_t b = 0; b < y_atoms; ++b) list.push_back({xs[a], ys[b], wx[a] * wy[b]});
  }
  return DiscreteJoint(std::move(list));
}

DiscreteJoint bernoulli_self_pair() {
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  return DiscreteJoint({{zero, zero, 0.5}, {one, one, 0.5}});
}

std::vector<std::string> iso_dates(Index count) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  std::vector<std::string> out;
  int y = 2015;
  int m = 1;
  int d = 1;
  for (Index i = 0; i < count; ++i) {
    std::ostringstream os;
    os << std::setfill('0') << std::setw(4) << y << '-' << std::setw(2) << m << '-' << std::setw(2) << d;
    out.push_back(os.str());
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    const int len = kDays[m - 1] + (m == 2 && leap ? 1 : 0);
    if (++d > len) {
      d = 1;
      if (++m > 12) {
        m = 1;
        ++y;
      }
    }
  }
  return out;
}

std::string to_csv(const TimeSeriesTable& t) {
  std::ostringstream os;
  os << "date";
  for (const auto& c : t.columns) os << ',' << c;
  os << '\n';
  for (Index r = 0; r < t.n_rows(); ++r) {
    os << t.dates[static_cast<std::size_t>(r)];
    for (Index c = 0; c < t.n_cols(); ++c) {
      os << ',';
      if (!std::isnan(t.values(r, c))) os << format_double(t.values(r, c));
    }
    os << '\n';
  }
  return os.str();
}

namespace {

TimeSeriesTable make_table(std::vector<std::string> dates, const std::string& prefix, Eigen::MatrixXd values) {
  TimeSeriesTable t;
  t.dates = std::move(dates);
  for (Index c = 0; c < values.cols(); ++c) t.columns.push_back(prefix + std::to_string(c + 1));
  t.values = std::move(values);
  return t;
}

}  // namespace

PlantedFixture planted_fixture(SignalKind kind, std::uint64_t seed, Index rows, Index x_cols, Index y_cols,
                               Index signal_begin, Index signal_end, double noise) {
  TestRng rng(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd x(rows, x_cols);
  Eigen::MatrixXd y(rows, y_cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < x_cols; ++c) x(r, c) = z(rng);
  }
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < y_cols; ++c) y(r, c) = z(rng);
  }
  Eigen::MatrixXd b(x_cols, y_cols);
  for (Index i = 0; i < x_cols; ++i) {
    for (Index j = 0; j < y_cols; ++j) b(i, j) = z(rng) / std::sqrt(static_cast<double>(x_cols));
  }
  if (kind != SignalKind::None) {
    for (Index r = signal_begin; r < signal_end; ++r) {
      const double u = x.row(r).sum() / std::sqrt(static_cast<double>(x_cols));
      for (Index c = 0; c < y_cols; ++c) {
        double signal = 0.0;
        switch (kind) {
          case SignalKind::Quadratic: signal = u * u - 1.0; break;
          // cos(2z) is uncorrelated with z and, nearly, its square with z^2,
          // so linear measures see almost nothing.
          case SignalKind::Cosine: signal = std::sqrt(2.0) * (std::cos(2.0 * x(r, c % x_cols)) - std::exp(-2.0)); break;
          case SignalKind::Linear: signal = x.row(r).dot(b.col(c)); break;
          case SignalKind::None: break;
        }
        y(r, c) = signal + noise * y(r, c);
      }
    }
  }
  auto dates = iso_dates(rows);
  return {make_table(dates, "x", std::move(x)), make_table(dates, "y", std::move(y)), signal_begin, signal_end};
}

WideFixture wide_fixture(std::uint64_t seed) {
  TestRng rng(seed);
  std::normal_distribution<double> z;
  const Index rows = 755;
  auto all_dates = iso_dates(rows + 10);
  // X skips ten dates that Y has; both share the remaining 755.
  std::vector<std::string> x_dates;
  for (Index i = 0; i < rows + 10; ++i) {
    if (i % 70 != 5 || i >= 700) x_dates.push_back(all_dates[static_cast<std::size_t>(i)]);
  }
  Eigen::MatrixXd x(rows, 500);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < 500; ++c) x(r, c) = z(rng);
  }
  Eigen::MatrixXd y(rows + 10, 22);
  for (Index r = 0; r < rows + 10; ++r) {
    for (Index c = 0; c < 22; ++c) y(r, c) = z(rng);
  }
  WideFixture f;
  TimeSeriesTable tx = make_table(x_dates, "x", std::move(x));
  TimeSeriesTable ty = make_table(all_dates, "y", std::move(y));
  for (Index c : {3, 77, 499}) {
    tx.values(c + 10, c) = std::numeric_limits<double>::quiet_NaN();
    f.blank_x_columns.push_back(tx.columns[static_cast<std::size_t>(c)]);
  }
  // Row 11 of the shared dates, so the blank survives the join.
  const auto shared_row = std::find(all_dates.begin(), all_dates.end(), x_dates[11]) - all_dates.begin();
  ty.values(shared_row, 4) = std::numeric_limits<double>::quiet_NaN();
  f.blank_y_columns.push_back(ty.columns[4]);
  f.x_csv = to_csv(tx);
  f.y_csv = to_csv(ty);
  return f;
}

}  // namespace hddcor::testing
