#include "hddcor/oracle.hpp"

#include "hddcor/error.hpp"
#include "hddcor/statistics.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace hddcor {

namespace {

using Eigen::Index;

Eigen::MatrixXd distance_table(const Marginal& m) {
  const auto k = static_cast<Index>(m.points.size());
  Eigen::MatrixXd t(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) t(i, j) = (m.points[i] - m.points[j]).norm();
  return t;
}

Eigen::VectorXd prob_vector(const Marginal& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.probs.data(), static_cast<Index>(m.probs.size()));
}

Eigen::VectorXd mean_of(const Marginal& m) {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(m.points.front().size());
  for (std::size_t i = 0; i < m.points.size(); ++i) mu += m.probs[i] * m.points[i];
  return mu;
}

// sum_{i,j} p_i p_j f(i, j)
template <typename F>
double expect2(const std::vector<double>& p, const F& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) s += p[i] * p[j] * f(i, j);
  return s;
}

double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

void require_centered(const DiscreteJoint& d) {
  for (Side side : {Side::X, Side::Y}) {
    const Marginal m = marginal(d, side);
    double scale = 1.0;
    for (const auto& pt : m.points) scale = std::max(scale, pt.cwiseAbs().maxCoeff());
    if (mean_of(m).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw InputError("center the distribution first");
    }
  }
}

}  // namespace

DiscreteJoint::DiscreteJoint(std::vector<Atom> atoms, std::size_t max_atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InputError("distribution has no atoms");
  if (atoms_.size() > max_atoms) {
    throw InputError("distribution has " + std::to_string(atoms_.size()) + " atoms; cap is " +
                     std::to_string(max_atoms));
  }
  const Index px = atoms_.front().x.size();
  const Index py = atoms_.front().y.size();
  if (px < 1 || py < 1) throw InputError("atoms need nonempty x and y");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (a.x.size() != px || a.y.size() != py) throw InputError("atoms disagree in dimension");
    if (!(a.prob > 0.0) || !std::isfinite(a.prob)) throw InputError("atom probabilities must be positive");
    if (!a.x.allFinite() || !a.y.allFinite()) throw InputError("atom coordinates must be finite");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InputError("atom probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

DiscreteJoint DiscreteJoint::centered() const {
  const Eigen::VectorXd mx = mean_of(marginal(*this, Side::X));
  const Eigen::VectorXd my = mean_of(marginal(*this, Side::Y));
  std::vector<Atom> shifted = atoms_;
  for (auto& a : shifted) {
    a.x -= mx;
    a.y -= my;
  }
  return DiscreteJoint(std::move(shifted), std::max(kDefaultAtomCap, atoms_.size()));
}

DiscreteJoint DiscreteJoint::from_json(const std::string& text, std::size_t max_atoms) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("atoms") || !doc["atoms"].is_array()) {
    throw InputError("expected an object with an \"atoms\" array");
  }
  std::vector<Atom> atoms;
  try {
    for (const auto& item : doc["atoms"]) {
      Atom a;
      const auto xs = item.at("x").get<std::vector<double>>();
      const auto ys = item.at("y").get<std::vector<double>>();
      a.x = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Index>(xs.size()));
      a.y = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Index>(ys.size()));
      a.prob = item.at("p").get<double>();
      atoms.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed atom: ") + e.what());
  }
  return DiscreteJoint(std::move(atoms), max_atoms);
}

std::string DiscreteJoint::to_json() const {
  nlohmann::json doc;
  doc["atoms"] = nlohmann::json::array();
  for (const auto& a : atoms_) {
    doc["atoms"].push_back({{"x", std::vector<double>(a.x.data(), a.x.data() + a.x.size())},
                            {"y", std::vector<double>(a.y.data(), a.y.data() + a.y.size())},
                            {"p", a.prob}});
  }
  return doc.dump();
}

Marginal marginal(const DiscreteJoint& d, Side side) {
  Marginal m;
  for (const auto& a : d.atoms()) {
    m.points.push_back(side == Side::X ? a.x : a.y);
    m.probs.push_back(a.prob);
  }
  return m;
}

Eigen::MatrixXd double_centered_distance(const Marginal& m) {
  const Eigen::MatrixXd t = distance_table(m);
  const Eigen::VectorXd p = prob_vector(m);
  const Eigen::VectorXd cond = t * p;       // E||x_i - X||
  const double grand = p.dot(cond);         // E||X1 - X2||
  Eigen::MatrixXd dc(t.rows(), t.cols());
  for (Index i = 0; i < t.rows(); ++i)
    for (Index j = 0; j < t.cols(); ++j) dc(i, j) = t(i, j) - cond(i) - cond(j) + grand;
  return dc;
}

double pop_dcov_moments(const DiscreteJoint& d) {
  const Marginal mx = marginal(d, Side::X);
  const Marginal my = marginal(d, Side::Y);
  const Eigen::MatrixXd a = distance_table(mx);
  const Eigen::MatrixXd b = distance_table(my);
  const auto& p = mx.probs;
  const std::size_t k = p.size();

  const double same_pair = expect2(p, [&](std::size_t i, std::size_t j) { return a(i, j) * b(i, j); });
  double shared_first = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l) shared_first += p[i] * p[j] * p[l] * a(i, j) * b(i, l);
  const double mean_a = expect2(p, [&](std::size_t i, std::size_t j) { return a(i, j); });
  const double mean_b = expect2(p, [&](std::size_t i, std::size_t j) { return b(i, j); });
  return same_pair - 2.0 * shared_first + mean_a * mean_b;
}

double pop_dcov_via_d(const DiscreteJoint& d) {
  const Marginal mx = marginal(d, Side::X);
  const Eigen::MatrixXd dx = double_centered_distance(mx);
  const Eigen::MatrixXd dy = double_centered_distance(marginal(d, Side::Y));
  return expect2(mx.probs, [&](std::size_t i, std::size_t j) { return dx(i, j) * dy(i, j); });
}

double pop_g(const DiscreteJoint& d, Side side) {
  const Marginal m = marginal(d, side);
  const Eigen::MatrixXd dc = double_centered_distance(m);
  const auto& p = m.probs;
  const std::size_t k = p.size();
  double s = 0.0;
  for (std::size_t i1 = 0; i1 < k; ++i1)
    for (std::size_t i2 = 0; i2 < k; ++i2)
      for (std::size_t i3 = 0; i3 < k; ++i3)
        for (std::size_t i4 = 0; i4 < k; ++i4)
          s += p[i1] * p[i2] * p[i3] * p[i4] * dc(i1, i2) * dc(i1, i3) * dc(i2, i4) * dc(i3, i4);
  return s;
}

double kernel_identity_max_deviation(const DiscreteJoint& d) {
  const Marginal mx = marginal(d, Side::X);
  const Marginal my = marginal(d, Side::Y);
  const Eigen::MatrixXd a = distance_table(mx);
  const Eigen::MatrixXd b = distance_table(my);
  const Eigen::MatrixXd da = double_centered_distance(mx);
  const Eigen::MatrixXd db = double_centered_distance(my);
  const auto k = static_cast<Index>(d.size());
  double worst = 0.0;
  std::array<Index, 4> t{};
  for (t[0] = 0; t[0] < k; ++t[0])
    for (t[1] = 0; t[1] < k; ++t[1])
      for (t[2] = 0; t[2] < k; ++t[2])
        for (t[3] = 0; t[3] < k; ++t[3]) {
          FourByFour ax{}, ay{}, dx{}, dy{};
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
              if (i == j) continue;
              ax[i][j] = a(t[i], t[j]);
              ay[i][j] = b(t[i], t[j]);
              dx[i][j] = da(t[i], t[j]);
              dy[i][j] = db(t[i], t[j]);
            }
          worst = std::max(worst, std::abs(kernel_h_from_pairs(ax, ay) - kernel_h_from_pairs(dx, dy)));
        }
  return worst;
}

bool pop_kernel_identity_check(const DiscreteJoint& d, double tol) {
  return kernel_identity_max_deviation(d) <= tol;
}

MomentSet pop_momentset(const DiscreteJoint& d, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw InputError("tau must lie in (0, 1]");
  require_centered(d);
  MomentSet ms;
  ms.tau = tau;
  ms.v2_xy = pop_dcov_via_d(d);

  const double power = 2.0 + 2.0 * tau;
  auto fill = [&](Side side, double& v2, double& b, double& l_tau, double& l_fourth) {
    const Marginal m = marginal(d, side);
    const auto& p = m.probs;
    const Eigen::MatrixXd dc = double_centered_distance(m);
    v2 = expect2(p, [&](std::size_t i, std::size_t j) { return dc(i, j) * dc(i, j); });
    b = expect2(p, [&](std::size_t i, std::size_t j) { return (m.points[i] - m.points[j]).squaredNorm(); });
    double mean_sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) mean_sq += p[i] * m.points[i].squaredNorm();
    auto l_of = [&](double expo) {
      double norm_part = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        norm_part += p[i] * std::pow(std::abs(m.points[i].squaredNorm() - mean_sq), expo);
      }
      return norm_part + expect2(p, [&](std::size_t i, std::size_t j) {
               return std::pow(std::abs(m.points[i].dot(m.points[j])), expo);
             });
    };
    l_tau = l_of(power);
    l_fourth = l_of(4.0);
  };
  fill(Side::X, ms.v2_x, ms.b_x, ms.l_x_tau, ms.l_x_fourth);
  fill(Side::Y, ms.v2_y, ms.b_y, ms.l_y_tau, ms.l_y_fourth);

  const Marginal mx = marginal(d, Side::X);
  const auto& p = mx.probs;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d.px_dim(), d.px_dim());
  for (std::size_t i = 0; i < p.size(); ++i) sigma += p[i] * mx.points[i] * mx.points[i].transpose();
  ms.e_x1x2_sq = expect2(p, [&](std::size_t i, std::size_t j) {
    const double v = mx.points[i].dot(mx.points[j]);
    return v * v;
  });
  ms.e_x1Sx2_sq = expect2(p, [&](std::size_t i, std::size_t j) {
    const double v = mx.points[i].dot(sigma * mx.points[j]);
    return v * v;
  });
  ms.e_g_x = pop_g(d, Side::X);
  const Eigen::MatrixXd dc = double_centered_distance(mx);
  ms.e_d_abs = expect2(p, [&](std::size_t i, std::size_t j) { return std::pow(std::abs(dc(i, j)), power); });
  if (ms.b_x > 0.0 && ms.e_x1x2_sq > 0.0) {
    ms.e_x = (ms.e_x1Sx2_sq +
              std::pow(ms.b_x, -2.0 * tau) * std::pow(ms.l_x_tau, (2.0 + tau) / (1.0 + tau))) /
             (ms.e_x1x2_sq * ms.e_x1x2_sq);
  }
  return ms;
}

bool BoundReport::all_finite() const {
  for (const BoundCheck* b : {&d_moment, &distance_variance, &g_moment}) {
    if (!std::isfinite(b->lhs) || !std::isfinite(b->rhs) || !std::isfinite(b->ratio)) return false;
  }
  return std::isfinite(g_leading_term);
}

BoundReport verify_prop_bounds(const DiscreteJoint& d, double tau) {
  if (!(tau > 0.0 && tau <= 0.5)) throw InputError("tau must lie in (0, 1/2]");
  const MomentSet ms = pop_momentset(d, tau);
  BoundReport rep;
  rep.tau = tau;
  // B_X = 0 means X is a point mass; every side is zero.
  if (!(ms.b_x > 0.0)) {
    rep.degenerate = true;
    return rep;
  }
  const double b = ms.b_x;
  const double l = ms.l_x_tau;

  rep.d_moment.lhs = ms.e_d_abs;
  rep.d_moment.rhs = std::pow(b, -(1.0 + tau)) * l;
  rep.d_moment.ratio = safe_ratio(rep.d_moment.lhs, rep.d_moment.rhs);

  rep.distance_variance.lhs = std::abs(ms.v2_x - ms.e_x1x2_sq / b);
  rep.distance_variance.rhs = std::pow(b, -(1.0 + 2.0 * tau)) * l;
  rep.distance_variance.ratio = safe_ratio(rep.distance_variance.lhs, rep.distance_variance.rhs);
  rep.distance_variance.holds =
      rep.distance_variance.lhs <= kDistanceVarianceConstant * rep.distance_variance.rhs * (1.0 + 1e-12);

  rep.g_leading_term = ms.e_x1Sx2_sq / (b * b);
  rep.g_moment.lhs = std::abs(ms.e_g_x);
  rep.g_moment.rhs = std::pow(b, -(2.0 + 2.0 * tau)) * std::pow(l, (2.0 + tau) / (1.0 + tau));
  rep.g_moment.ratio = safe_ratio(std::max(0.0, rep.g_moment.lhs - rep.g_leading_term), rep.g_moment.rhs);
  return rep;
}

WMoments pop_w_moments(const DiscreteJoint& d) {
  const Marginal m = marginal(d, Side::X);
  const auto& p = m.probs;
  const std::size_t k = p.size();
  const double b = expect2(p, [&](std::size_t i, std::size_t j) { return (m.points[i] - m.points[j]).squaredNorm(); });
  if (!(b > 0.0)) throw InputError("W moments undefined for a degenerate X");
  Eigen::MatrixXd w(static_cast<Index>(k), static_cast<Index>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      w(i, j) = ((m.points[i] - m.points[j]).squaredNorm() - b) / b;
  WMoments out;
  out.w12_sq = expect2(p, [&](std::size_t i, std::size_t j) { return w(i, j) * w(i, j); });
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l) out.w12_w13 += p[i] * p[j] * p[l] * w(i, j) * w(i, l);
  return out;
}

}  // namespace hddcor
