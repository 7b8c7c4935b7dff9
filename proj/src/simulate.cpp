#include "hddcor/simulate.hpp"

#include "hddcor/error.hpp"
#include "hddcor/kde.hpp"
#include "hddcor/parallel.hpp"
#include "hddcor/statistics.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace hddcor {

namespace {

double recipe_rho(Example e) {
  switch (e) {
    case Example::Ex1: return 0.7;
    case Example::Ex2: return 0.5;
    case Example::Ex3: return 0.5;
    case Example::Ex4: return 0.0;
    case Example::Ex5: return 0.5;
    case Example::Ex6: return 0.7;
  }
  return 0.0;
}

Eigen::MatrixXd standard_normals(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) z(i, j) = normal(rng);
  return z;
}

// Student t with 4 degrees of freedom as N(0,1) / sqrt(chi2_4 / 4), the
// chi-square drawn as a sum of four squared normals.
double student_t4(std::normal_distribution<double>& normal, Rng& rng) {
  const double numerator = normal(rng);
  double chi2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double z = normal(rng);
    chi2 += z * z;
  }
  return numerator / std::sqrt(chi2 / 4.0);
}

}  // namespace

std::string_view example_name(Example e) {
  switch (e) {
    case Example::Ex1: return "ex1";
    case Example::Ex2: return "ex2";
    case Example::Ex3: return "ex3";
    case Example::Ex4: return "ex4";
    case Example::Ex5: return "ex5";
    case Example::Ex6: return "ex6";
  }
  return "unknown";
}

Example parse_example(std::string_view name) {
  for (Example e : {Example::Ex1, Example::Ex2, Example::Ex3, Example::Ex4, Example::Ex5, Example::Ex6}) {
    if (example_name(e) == name) return e;
  }
  throw InputError("unknown example '" + std::string(name) + "' (expected ex1 .. ex6)");
}

bool is_null_example(Example e) { return e == Example::Ex1 || e == Example::Ex2; }

SimConfig validated(SimConfig cfg) {
  if (cfg.n < 4) throw InputError("n must be at least 4");
  if (cfg.p < 1) throw InputError("p must be at least 1");
  if (cfg.replicates < kMinReplicates) {
    throw InputError("replicates must be at least " + std::to_string(kMinReplicates));
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw InputError("alpha must lie in (0, 1]");
  if (cfg.permutations < kMinPermutations) {
    throw InputError("permutations must be at least " + std::to_string(kMinPermutations));
  }
  const Index natural_q = cfg.example == Example::Ex6 ? 1 : cfg.p;
  if (cfg.q == 0) cfg.q = natural_q;
  if (cfg.q < 1) throw InputError("q must be at least 1");
  if (!is_null_example(cfg.example) && cfg.q != natural_q) {
    throw InputError(std::string(example_name(cfg.example)) + " fixes q = " + std::to_string(natural_q));
  }
  return cfg;
}

ArNormalSampler::ArNormalSampler(Index dim, double rho) {
  if (dim < 1) throw InputError("dimension must be at least 1");
  if (!(std::abs(rho) < 1.0)) throw InputError("AR correlation must lie in (-1, 1)");
  Eigen::MatrixXd sigma(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) sigma(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw NumericalError("covariance factorization failed");
  lower_ = llt.matrixL();
}

SampleMatrix ArNormalSampler::sample(Index n, Rng& rng) const {
  const Eigen::MatrixXd z = standard_normals(n, lower_.rows(), rng);
  // Each row x = L z, so X = Z L^T.
  Eigen::MatrixXd x = z * lower_.transpose().triangularView<Eigen::Upper>();
  return SampleMatrix(std::move(x));
}

SampleMatrix sample_ar_normal(Index n, Index dim, double rho, Rng& rng) {
  return ArNormalSampler(dim, rho).sample(n, rng);
}

ExampleGenerator::ExampleGenerator(const SimConfig& cfg)
    : cfg_(validated(cfg)), x_sampler_(cfg_.p, recipe_rho(cfg_.example)) {
  if (is_null_example(cfg_.example)) y_sampler_.emplace(cfg_.q, recipe_rho(cfg_.example));
}

std::pair<SampleMatrix, SampleMatrix> ExampleGenerator::generate(Rng& rng) const {
  SampleMatrix x = x_sampler_.sample(cfg_.n, rng);
  const Eigen::MatrixXd& xv = x.values();
  switch (cfg_.example) {
    case Example::Ex1:
    case Example::Ex2:
      return {std::move(x), y_sampler_->sample(cfg_.n, rng)};
    case Example::Ex3: {
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::MatrixXd y(cfg_.n, cfg_.p);
      for (Index i = 0; i < cfg_.n; ++i)
        for (Index j = 0; j < cfg_.p; ++j) {
          const double v = xv(i, j);
          y(i, j) = 0.2 * (v + v * v) + student_t4(normal, rng);
        }
      return {std::move(x), SampleMatrix(std::move(y))};
    }
    case Example::Ex4:
    case Example::Ex5:
      return {std::move(x), SampleMatrix(xv.array().square().matrix())};
    case Example::Ex6: {
      const Eigen::VectorXd sums = xv.rowwise().sum();
      Eigen::MatrixXd y = (sums.array().square() / static_cast<double>(cfg_.p)).matrix();
      return {std::move(x), SampleMatrix(std::move(y))};
    }
  }
  throw InputError("unknown example");
}

std::pair<SampleMatrix, SampleMatrix> generate_example(const SimConfig& cfg, Rng& rng) {
  return ExampleGenerator(cfg).generate(rng);
}

MCDecisions simulate_decisions(const SimConfig& cfg_in, const std::vector<Method>& methods) {
  if (methods.empty()) throw InputError("no methods requested");
  const SimConfig cfg = validated(cfg_in);
  const ExampleGenerator gen(cfg);
  const auto reps = static_cast<std::size_t>(cfg.replicates);

  MCDecisions out;
  out.config = cfg;
  out.methods = methods;
  out.reject.assign(methods.size(), std::vector<char>(reps, 0));
  out.statistic.assign(methods.size(), std::vector<double>(reps, 0.0));

  bool need_estimates = false;
  for (Method m : methods) need_estimates = need_estimates || !is_permutation_method(m);

  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    Rng rng(stream_seed(cfg.seed, r));
    const auto [x, y] = gen.generate(rng);
    const std::uint64_t perm_seed = rng();
    std::optional<DcovEstimates> est;
    if (need_estimates) est = dcov_estimates(x, y);
    const PermutationOptions popts{cfg.permutations, perm_seed, 1};
    for (std::size_t m = 0; m < methods.size(); ++m) {
      TestResult res;
      switch (methods[m]) {
        case Method::NormalTn: res = normal_test_tn(*est, cfg.alpha); break;
        case Method::NormalTr: res = normal_test_tr(*est, cfg.alpha); break;
        case Method::Gamma: res = gamma_test(*est, cfg.alpha); break;
        case Method::RvPermutation: res = rv_permutation_test(x, y, cfg.alpha, popts); break;
        case Method::MdcorPermutation: res = mdcor_permutation_test(x, y, cfg.alpha, popts); break;
      }
      out.reject[m][r] = res.reject ? 1 : 0;
      out.statistic[m][r] = res.statistic;
    }
  });
  return out;
}

MCReport summarize(const MCDecisions& d, std::size_t method_index) {
  MCReport rep;
  rep.config = d.config;
  rep.config.method = d.methods.at(method_index);
  const auto& rej = d.reject.at(method_index);
  rep.rejections = static_cast<Index>(std::count(rej.begin(), rej.end(), char{1}));
  const double reps = static_cast<double>(rej.size());
  rep.rate = static_cast<double>(rep.rejections) / reps;
  rep.std_error = std::sqrt(rep.rate * (1.0 - rep.rate) / reps);
  return rep;
}

double decision_agreement(const MCDecisions& d, std::size_t i, std::size_t j) {
  const auto& a = d.reject.at(i);
  const auto& b = d.reject.at(j);
  std::size_t same = 0;
  for (std::size_t r = 0; r < a.size(); ++r) same += a[r] == b[r] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

MCReport mc_rejection_rate(const SimConfig& cfg) {
  return summarize(simulate_decisions(cfg, {cfg.method}), 0);
}

MCReport null_distribution_report(const SimConfig& cfg) {
  if (!is_null_example(cfg.example)) {
    throw InputError("null distribution report needs a null example (ex1 or ex2)");
  }
  SimConfig c = cfg;
  c.method = Method::NormalTn;
  const MCDecisions d = simulate_decisions(c, {Method::NormalTn});
  MCReport rep = summarize(d, 0);
  rep.kde_max_gap = kde_max_gap_to_standard_normal(d.statistic[0]);
  rep.statistic_samples = d.statistic[0];
  return rep;
}

std::vector<MCReport> power_curve(const std::vector<SimConfig>& grid, const std::vector<Method>& methods) {
  std::vector<MCReport> out;
  for (const SimConfig& cfg : grid) {
    if (cfg.example != grid.front().example) throw InputError("power curve grid mixes examples");
    const MCDecisions d = simulate_decisions(cfg, methods);
    for (std::size_t m = 0; m < methods.size(); ++m) out.push_back(summarize(d, m));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string reports_to_csv(const std::vector<MCReport>& reports) {
  std::ostringstream os;
  os << "example,n,p,q,method,alpha,replicates,rate,stderr,kde_max_gap\n";
  for (const auto& r : reports) {
    const auto& c = r.config;
    os << example_name(c.example) << ',' << c.n << ',' << c.p << ',' << c.q << ',' << method_name(c.method)
       << ',' << format_double(c.alpha) << ',' << c.replicates << ',' << format_double(r.rate) << ','
       << format_double(r.std_error) << ',' << (r.kde_max_gap ? format_double(*r.kde_max_gap) : "") << '\n';
  }
  return os.str();
}

std::string reports_to_json(const std::vector<MCReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    const auto& c = r.config;
    nlohmann::json o = {{"example", example_name(c.example)},
                        {"n", c.n},
                        {"p", c.p},
                        {"q", c.q},
                        {"method", method_name(c.method)},
                        {"alpha", c.alpha},
                        {"replicates", c.replicates},
                        {"seed", c.seed},
                        {"rate", r.rate},
                        {"stderr", r.std_error}};
    o["kde_max_gap"] = r.kde_max_gap ? nlohmann::json(*r.kde_max_gap) : nlohmann::json(nullptr);
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

}  // namespace hddcor
