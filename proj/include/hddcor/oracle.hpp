#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace hddcor {

// Exact population quantities of finite discrete distributions, by
// enumeration over independent copies. Atoms need not be distinct.

struct Atom {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double prob = 0.0;
};

constexpr std::size_t kDefaultAtomCap = 8;

class DiscreteJoint {
 public:
  // Validates: positive probabilities summing to 1 within 1e-12, shared x and
  // y dimensions, at most max_atoms atoms.
  explicit DiscreteJoint(std::vector<Atom> atoms, std::size_t max_atoms = kDefaultAtomCap);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  Eigen::Index px_dim() const { return atoms_.front().x.size(); }
  Eigen::Index py_dim() const { return atoms_.front().y.size(); }

  // The same joint with E[X] and E[Y] subtracted from every atom.
  DiscreteJoint centered() const;

  static DiscreteJoint from_json(const std::string& text, std::size_t max_atoms = kDefaultAtomCap);
  std::string to_json() const;

 private:
  std::vector<Atom> atoms_;
};

enum class Side { X, Y };

// One marginal of a joint, as indexed support points with weights.
struct Marginal {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> probs;
};
Marginal marginal(const DiscreteJoint& d, Side side);

// Double-centered distance d(x_i, x_j) between support points i and j:
// ||x_i - x_j|| - E||x_i - X|| - E||X - x_j|| + E||X1 - X2||.
Eigen::MatrixXd double_centered_distance(const Marginal& m);

// E||X1-X2|| ||Y1-Y2|| - 2 E||X1-X2|| ||Y1-Y3|| + E||X1-X2|| E||Y1-Y2||.
double pop_dcov_moments(const DiscreteJoint& d);
// E[d(X1,X2) d(Y1,Y2)].
double pop_dcov_via_d(const DiscreteJoint& d);
// E[d(X1,X2) d(X1,X3) d(X2,X4) d(X3,X4)] over four independent copies.
double pop_g(const DiscreteJoint& d, Side side = Side::X);

// Largest |h - h_d| over all ordered 4-tuples of atoms, where h uses plain
// distances and h_d applies the same combination to double-centered
// distances.
double kernel_identity_max_deviation(const DiscreteJoint& d);
bool pop_kernel_identity_check(const DiscreteJoint& d, double tol = 1e-10);

struct MomentSet {
  double tau = 0.0;
  double v2_xy = 0.0;
  double v2_x = 0.0;
  double v2_y = 0.0;
  double b_x = 0.0;           // E||X1 - X2||^2
  double b_y = 0.0;
  double l_x_tau = 0.0;       // E| ||X||^2 - E||X||^2 |^(2+2tau) + E|X1'X2|^(2+2tau)
  double l_y_tau = 0.0;
  double e_x1x2_sq = 0.0;     // E[(X1'X2)^2]
  double e_x1Sx2_sq = 0.0;    // E[(X1' Sigma_x X2)^2]
  double e_g_x = 0.0;
  double e_d_abs = 0.0;       // E|d(X1,X2)|^(2+2tau)
  double l_x_fourth = 0.0;    // the tau = 1 version of l_x_tau
  double l_y_fourth = 0.0;
  // (E[(X1' Sigma_x X2)^2] + B_X^(-2tau) L^((2+tau)/(1+tau))) / (E[(X1'X2)^2])^2;
  // 0 when X is degenerate.
  double e_x = 0.0;
};

// Requires E[X] = 0 and E[Y] = 0 (use DiscreteJoint::centered()).
MomentSet pop_momentset(const DiscreteJoint& d, double tau);

// Moment bounds for the distance variance of X:
//  bound 1: E|d|^(2+2tau) against B^-(1+tau) L            (constant unspecified)
//  bound 2: |V^2(X) - E[(X1'X2)^2]/B| against B^-(1+2tau) L (constant 9)
//  bound 3: |E g| against E[(X1'SX2)^2]/B^2 + C B^-(2+2tau) L^((2+tau)/(1+tau))
struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;       // right side without the absolute constant
  double ratio = 0.0;     // implied constant lhs / rhs (0 if degenerate)
  bool holds = true;      // asserted only where the constant is explicit
};

struct BoundReport {
  double tau = 0.0;
  bool degenerate = false;
  BoundCheck d_moment;          // bound 1
  BoundCheck distance_variance; // bound 2, holds iff lhs <= 9 rhs
  BoundCheck g_moment;          // bound 3; lhs = |E g|, ratio = max(0, lhs - leading) / rhs
  double g_leading_term = 0.0;  // E[(X1'SX2)^2] / B^2
  bool all_finite() const;
};

constexpr double kDistanceVarianceConstant = 9.0;

// tau must lie in (0, 1/2]; the joint must be centered.
BoundReport verify_prop_bounds(const DiscreteJoint& d, double tau);

// E[W12^2] and E[W12 W13] with W_ij = (||X_i - X_j||^2 - B_X) / B_X, by
// pair/triple enumeration.
struct WMoments {
  double w12_sq = 0.0;
  double w12_w13 = 0.0;
};
WMoments pop_w_moments(const DiscreteJoint& d);

}  // namespace hddcor
