#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coopnet {

enum class GeometryKind { kSimplex, kBall };

// Decision set paired with its regularizer constants. The simplex carries
// the entropic regularizer shifted to [0, ln d] (so D = ln d); the Euclidean
// ball carries half the squared norm (D = R^2/2). Both are 1-strongly convex
// (L1 norm on the simplex, L2 on the ball).
class Geometry {
 public:
  static Geometry simplex(int dim);
  static Geometry ball(int dim, double radius);

  GeometryKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double radius() const { return radius_; }

  // D: range of the regularizer over the decision set.
  double range_bound() const;
  // sigma: strong-convexity constant.
  double strong_convexity() const { return 1.0; }
  // Default dual-norm bound on gradients for the standard loss families
  // ([0,1]-bounded linear losses): L-infinity 1 on the simplex, sqrt(d) in
  // L2 on the ball.
  double default_loss_bound() const;

  bool contains(const std::vector<double>& x, double tol = 1e-12) const;
  std::string describe() const;

 private:
  Geometry(GeometryKind kind, int dim, double radius);

  GeometryKind kind_;
  int dim_;
  double radius_;
};

enum class LossKind { kLinearSimplex, kLinearBall, kQuadraticBall };

// One round's loss function. `coeffs` holds the loss vector (linear on the
// simplex, entries in [0,1]), the gradient vector (linear on the ball), or
// the target point (quadratic on the ball).
struct LossSpec {
  LossKind kind;
  std::vector<double> coeffs;

  static LossSpec linear_simplex(std::vector<double> losses);
  static LossSpec linear_ball(std::vector<double> gradient);
  static LossSpec quadratic_ball(std::vector<double> target);

  int dim() const { return static_cast<int>(coeffs.size()); }
};

double loss_value(const LossSpec& loss, const std::vector<double>& x);
std::vector<double> loss_gradient(const LossSpec& loss, const std::vector<double>& x);

// The lazy mirror step: maps the dual accumulator to a feasible point under
// the time-varying regularizer sqrt(local_count)/eta * g. The simplex map is
// a softmax of eta*theta/sqrt(local_count) (computed with max subtraction);
// the ball map scales eta*theta/sqrt(local_count) back to the radius when it
// leaves the ball.
std::vector<double> mirror_map(const Geometry& geom, const std::vector<double>& theta,
                               double eta, std::int64_t local_count);

// Euclidean projection onto the decision set.
std::vector<double> project(const Geometry& geom, const std::vector<double>& x);

// eta = sqrt(2*sigma*D)/L.
double tuned_eta(double range_bound, double strong_convexity, double loss_bound);

// (D/eta + eta*L^2/(2*sigma)) * sqrt(multiplier * horizon). The multiplier
// is 1 for a single agent, the independence number, the clique-cover size,
// or the multi-activation constant Q, depending on the setting.
double theory_bound(double range_bound, double strong_convexity, double loss_bound,
                    double eta, double multiplier, double horizon);

}  // namespace coopnet
