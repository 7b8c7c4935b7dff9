#include "cli_app.hpp"

#include "hddcor/csv.hpp"
#include "hddcor/error.hpp"
#include "hddcor/hypothesis_tests.hpp"
#include "hddcor/oracle.hpp"
#include "hddcor/parallel.hpp"
#include "hddcor/pipeline.hpp"
#include "hddcor/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace hddcor::cli {

namespace {

struct CommonOptions {
  std::string out_path;
  std::string format = "csv";
  unsigned threads = 0;
  std::uint64_t seed = 0;
};

void emit(const CommonOptions& common, std::ostream& out, const std::string& text) {
  if (common.out_path.empty()) {
    out << text;
  } else {
    write_text_file(common.out_path, text);
  }
}

// Numeric CSV with a header row. A leading "date" column is ignored.
SampleMatrix read_sample(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t skip = !t.header.empty() && t.header.front() == "date" ? 1 : 0;
  if (t.header.size() <= skip) throw InputError(path + ": no numeric columns");
  if (t.rows.empty()) throw InputError(path + ": no data rows");
  Eigen::MatrixXd m(static_cast<Index>(t.rows.size()), static_cast<Index>(t.header.size() - skip));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = skip; c < t.header.size(); ++c) {
      const auto v = parse_numeric_cell(t.rows[r][c]);
      if (!v) throw InputError(path + ": missing value on data line " + std::to_string(r + 1));
      m(static_cast<Index>(r), static_cast<Index>(c - skip)) = *v;
    }
  }
  return SampleMatrix(std::move(m));
}

std::string test_result_text(const TestResult& r, Index n, const std::string& format) {
  if (format == "json") {
    const nlohmann::json j = {{"method", method_name(r.method)}, {"n", n},
                              {"statistic", r.statistic},       {"p_value", r.p_value},
                              {"alpha", r.alpha},               {"reject", r.reject}};
    return j.dump() + "\n";
  }
  std::ostringstream os;
  os << "method,n,statistic,p_value,alpha,reject\n"
     << method_name(r.method) << ',' << n << ',' << format_double(r.statistic) << ',' << format_double(r.p_value)
     << ',' << format_double(r.alpha) << ',' << (r.reject ? "true" : "false") << '\n';
  return os.str();
}

// Experiment grid document. Top-level keys are defaults; each "grid" entry
// may override any of them.
struct GridSpec {
  std::string report = "rate";
  std::vector<Method> methods;
  std::vector<SimConfig> points;
};

const std::set<std::string> kPointKeys = {"example", "n", "p", "q", "replicates", "alpha", "seed", "permutations"};

void apply_point_keys(const nlohmann::json& obj, SimConfig& cfg) {
  for (const auto& [key, value] : obj.items()) {
    if (!kPointKeys.count(key)) continue;
    if (key == "example") {
      cfg.example = parse_example(value.get<std::string>());
      continue;
    }
    if (key == "alpha") {
      cfg.alpha = value.get<double>();
      continue;
    }
    if (!value.is_number_integer() && !value.is_number_unsigned()) {
      throw InputError("config key '" + key + "' must be an integer");
    }
    if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
      continue;
    }
    const auto v = value.get<long long>();
    if (v < 0) throw InputError("config key '" + key + "' must be nonnegative");
    if (key == "n") cfg.n = v;
    if (key == "p") cfg.p = v;
    if (key == "q") cfg.q = v;
    if (key == "replicates") cfg.replicates = v;
    if (key == "permutations") cfg.permutations = v;
  }
}

GridSpec parse_grid(const std::string& text, unsigned threads) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config must be a JSON object");
  static const std::set<std::string> top_keys = {"example", "n",    "p",       "q",       "replicates",   "alpha",
                                                 "seed",    "grid", "methods", "report", "permutations"};
  for (const auto& [key, value] : doc.items()) {
    if (!top_keys.count(key)) throw InputError("unknown config key '" + key + "'");
  }
  GridSpec spec;
  try {
    SimConfig base;
    base.threads = threads;
    apply_point_keys(doc, base);
    if (doc.contains("report")) spec.report = doc["report"].get<std::string>();
    if (spec.report != "rate" && spec.report != "kde") throw InputError("report must be \"rate\" or \"kde\"");
    if (doc.contains("methods")) {
      for (const auto& m : doc["methods"]) spec.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (spec.methods.empty()) spec.methods.push_back(Method::NormalTn);
    if (spec.report == "kde" && (spec.methods.size() != 1 || spec.methods.front() != Method::NormalTn)) {
      throw InputError("kde reports are defined for normal-tn only");
    }
    if (doc.contains("grid")) {
      if (!doc["grid"].is_array() || doc["grid"].empty()) throw InputError("grid must be a nonempty array");
      for (const auto& entry : doc["grid"]) {
        if (!entry.is_object()) throw InputError("grid entries must be objects");
        for (const auto& [key, value] : entry.items()) {
          if (!kPointKeys.count(key)) throw InputError("unknown grid key '" + key + "'");
        }
        SimConfig cfg = base;
        apply_point_keys(entry, cfg);
        spec.points.push_back(validated(cfg));
      }
    } else {
      spec.points.push_back(validated(base));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config type error: ") + e.what());
  }
  return spec;
}

int cmd_test(const std::string& x_path, const std::string& y_path, const std::string& method_text, double alpha,
             Index permutations, const CommonOptions& common, std::ostream& out) {
  const Method method = parse_method(method_text);
  const SampleMatrix x = read_sample(x_path);
  const SampleMatrix y = read_sample(y_path);
  if (x.n() != y.n()) {
    throw InputError("row-count mismatch: " + x_path + " has " + std::to_string(x.n()) + " rows, " + y_path +
                     " has " + std::to_string(y.n()));
  }
  const PermutationOptions popts{permutations, common.seed, resolve_threads(common.threads)};
  emit(common, out, test_result_text(run_test(method, x, y, alpha, popts), x.n(), common.format));
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const CommonOptions& common, std::ostream& out) {
  const GridSpec spec = parse_grid(read_text_file(config_path), resolve_threads(common.threads));
  std::vector<MCReport> reports;
  if (spec.report == "kde") {
    for (const auto& cfg : spec.points) reports.push_back(null_distribution_report(cfg));
  } else {
    for (const auto& cfg : spec.points) {
      const MCDecisions d = simulate_decisions(cfg, spec.methods);
      for (std::size_t m = 0; m < spec.methods.size(); ++m) reports.push_back(summarize(d, m));
    }
  }
  emit(common, out, common.format == "json" ? reports_to_json(reports) : reports_to_csv(reports));
  return kExitOk;
}

int cmd_rolling(const std::string& x_path, const std::string& y_path, Index window, const std::string& method_text,
                double q, bool compare, Index permutations, const std::string& cutoff_path,
                const CommonOptions& common, std::ostream& out, std::ostream& err) {
  if (!(q > 0.0 && q < 1.0)) throw InputError("--q must lie in (0, 1)");
  const AlignedTables tables = load_and_align(x_path, y_path);
  for (const auto& c : tables.dropped_x) err << "dropped X column with missing values: " << c << '\n';
  for (const auto& c : tables.dropped_y) err << "dropped Y column with missing values: " << c << '\n';
  const RollingOptions ropts{permutations, common.seed, resolve_threads(common.threads)};

  std::string body;
  std::string sidecar;
  if (compare) {
    const RollingComparison cmp = rolling_compare(tables.x, tables.y, window, q, ropts);
    body = comparison_to_csv(cmp);
    sidecar = comparison_cutoff_json(cmp);
  } else {
    const PValueSeries series = rolling_pvalues(tables.x, tables.y, window, parse_method(method_text), ropts);
    std::vector<double> pvals;
    for (const auto& r : series.records) pvals.push_back(r.p_value);
    const double cutoff = bh_cutoff(pvals, q);
    if (common.format == "json") {
      nlohmann::json j;
      j["method"] = method_name(series.method);
      j["window"] = window;
      j["q"] = q;
      j["cutoff"] = cutoff;
      j["records"] = nlohmann::json::array();
      for (const auto& r : series.records) {
        j["records"].push_back({{"date", r.date},
                                {"statistic", r.statistic},
                                {"p_value", r.p_value},
                                {"flagged", cutoff > 0.0 && r.p_value <= cutoff}});
      }
      body = j.dump(2) + "\n";
    } else {
      body = series_to_csv(series, cutoff);
    }
    sidecar = cutoff_json(series, q, cutoff);
  }
  emit(common, out, body);
  std::string sidecar_path = cutoff_path;
  if (sidecar_path.empty() && !common.out_path.empty()) sidecar_path = common.out_path + ".cutoff.json";
  if (sidecar_path.empty()) {
    err << sidecar;
  } else {
    write_text_file(sidecar_path, sidecar);
  }
  return kExitOk;
}

int cmd_oracle(const std::string& joint_path, double tau, const CommonOptions& common, std::ostream& out) {
  const DiscreteJoint joint = DiscreteJoint::from_json(read_text_file(joint_path));
  const double v_moments = pop_dcov_moments(joint);
  const double v_via_d = pop_dcov_via_d(joint);
  const double identity_dev = kernel_identity_max_deviation(joint);
  const DiscreteJoint centered = joint.centered();
  const MomentSet ms = pop_momentset(centered, tau);
  const bool bounds_defined = tau <= 0.5;
  BoundReport rep;
  if (bounds_defined) rep = verify_prop_bounds(centered, tau);

  std::vector<std::pair<std::string, nlohmann::json>> rows = {
      {"atoms", joint.size()},
      {"tau", tau},
      {"v2_xy", v_moments},
      {"v2_xy_via_d", v_via_d},
      {"cross_formula_agree", std::abs(v_moments - v_via_d) <= 1e-12 * std::max(1.0, std::abs(v_moments))},
      {"kernel_identity_holds", identity_dev <= 1e-10},
      {"kernel_identity_max_deviation", identity_dev},
      {"v2_x", ms.v2_x},
      {"v2_y", ms.v2_y},
      {"b_x", ms.b_x},
      {"b_y", ms.b_y},
      {"l_x_tau", ms.l_x_tau},
      {"l_y_tau", ms.l_y_tau},
      {"e_x1x2_sq", ms.e_x1x2_sq},
      {"e_x1Sx2_sq", ms.e_x1Sx2_sq},
      {"e_g_x", ms.e_g_x},
      {"e_d_abs", ms.e_d_abs},
      {"l_x_fourth", ms.l_x_fourth},
      {"l_y_fourth", ms.l_y_fourth},
      {"e_x", ms.e_x},
  };
  if (bounds_defined) {
    rows.insert(rows.end(), {
        {"x_degenerate", rep.degenerate},
        {"bound1_lhs", rep.d_moment.lhs},
        {"bound1_rhs", rep.d_moment.rhs},
        {"bound1_ratio", rep.d_moment.ratio},
        {"bound2_lhs", rep.distance_variance.lhs},
        {"bound2_rhs", rep.distance_variance.rhs},
        {"bound2_ratio", rep.distance_variance.ratio},
        {"bound2_holds_with_9", rep.distance_variance.holds},
        {"bound3_lhs", rep.g_moment.lhs},
        {"bound3_leading", rep.g_leading_term},
        {"bound3_rhs", rep.g_moment.rhs},
        {"bound3_ratio", rep.g_moment.ratio},
        {"ratios_finite", rep.all_finite()},
    });
  }
  std::string text;
  if (common.format == "json") {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : rows) j[k] = v;
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "quantity,value\n";
    for (const auto& [k, v] : rows) {
      os << k << ',' << (v.is_number_float() ? format_double(v.get<double>()) : v.dump()) << '\n';
    }
    text = os.str();
  }
  emit(common, out, text);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"High-dimensional independence testing with bias-corrected distance correlation", "hddcor"};
  app.require_subcommand(1);
  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out_path, "Write results to this file instead of stdout");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", common.threads, "Worker threads (default: HDDCOR_THREADS or all cores)");
    sub->add_option("--seed", common.seed, "Seed for permutations and simulation");
  };

  std::string x_path;
  std::string y_path;
  std::string method = "normal-tn";
  double alpha = 0.05;
  Index permutations = kDefaultPermutations;
  const auto methods = CLI::IsMember({"normal-tn", "normal-tr", "gamma", "rv", "mdcor"});

  auto* test = app.add_subcommand("test", "Test independence of two samples");
  test->add_option("--x", x_path, "CSV of X observations")->required();
  test->add_option("--y", y_path, "CSV of Y observations")->required();
  test->add_option("--method", method, "Calibration")->check(methods);
  test->add_option("--alpha", alpha, "Significance level");
  test->add_option("--permutations", permutations, "Permutations for rv / mdcor");
  add_common(test);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment grid");
  simulate->add_option("--config", config_path, "JSON experiment grid")->required();
  add_common(simulate);

  Index window = 66;
  double q = kDefaultFdrLevel;
  bool compare = false;
  std::string cutoff_path;
  auto* rolling = app.add_subcommand("rolling", "Rolling-window dependence screening with BH cutoff");
  rolling->add_option("--x", x_path, "CSV with a date column")->required();
  rolling->add_option("--y", y_path, "CSV with a date column")->required();
  rolling->add_option("--window", window, "Rows per trailing window");
  rolling->add_option("--method", method, "Calibration")->check(methods);
  rolling->add_option("--q", q, "FDR level for the BH cutoff");
  rolling->add_flag("--compare", compare, "Report normal-tn and rv side by side");
  rolling->add_option("--permutations", permutations, "Permutations for rv / mdcor");
  rolling->add_option("--cutoff-out", cutoff_path, "Cutoff JSON path (default: <out>.cutoff.json)");
  add_common(rolling);

  std::string joint_path;
  double tau = 0.5;
  auto* oracle = app.add_subcommand("oracle", "Exact checks on a discrete joint distribution");
  oracle->add_option("--joint", joint_path, "JSON {\"atoms\": [{\"x\": [...], \"y\": [...], \"p\": ...}]}")
      ->required();
  oracle->add_option("--tau", tau, "Moment exponent parameter in (0, 1]");
  add_common(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*test) return cmd_test(x_path, y_path, method, alpha, permutations, common, out);
    if (*simulate) return cmd_simulate(config_path, common, out);
    if (*rolling) {
      return cmd_rolling(x_path, y_path, window, method, q, compare, permutations, cutoff_path, common, out, err);
    }
    if (*oracle) return cmd_oracle(joint_path, tau, common, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "internal failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace hddcor::cli
