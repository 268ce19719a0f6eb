#include "coopnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coopnet {

namespace {

void check_dim(const LossSpec& loss, const std::vector<double>& x) {
  if (loss.coeffs.size() != x.size()) {
    throw std::invalid_argument("loss: dimension mismatch (loss dim " +
                                std::to_string(loss.coeffs.size()) + ", point dim " +
                                std::to_string(x.size()) + ")");
  }
}

double squared_norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

Geometry::Geometry(GeometryKind kind, int dim, double radius)
    : kind_(kind), dim_(dim), radius_(radius) {
  if (dim < 1) throw std::invalid_argument("geometry: dimension must be >= 1");
  if (kind == GeometryKind::kBall && !(radius > 0.0)) {
    throw std::invalid_argument("geometry: ball radius must be > 0");
  }
}

Geometry Geometry::simplex(int dim) { return Geometry(GeometryKind::kSimplex, dim, 0.0); }

Geometry Geometry::ball(int dim, double radius) {
  return Geometry(GeometryKind::kBall, dim, radius);
}

double Geometry::range_bound() const {
  return kind_ == GeometryKind::kSimplex ? std::log(static_cast<double>(dim_))
                                         : 0.5 * radius_ * radius_;
}

double Geometry::default_loss_bound() const {
  return kind_ == GeometryKind::kSimplex ? 1.0 : std::sqrt(static_cast<double>(dim_));
}

bool Geometry::contains(const std::vector<double>& x, double tol) const {
  if (static_cast<int>(x.size()) != dim_) return false;
  if (kind_ == GeometryKind::kSimplex) {
    double sum = 0.0;
    for (double v : x) {
      if (v < -tol) return false;
      sum += v;
    }
    return std::abs(sum - 1.0) <= tol;
  }
  return std::sqrt(squared_norm(x)) <= radius_ + tol;
}

std::string Geometry::describe() const {
  if (kind_ == GeometryKind::kSimplex) return "simplex(d=" + std::to_string(dim_) + ")";
  return "ball(d=" + std::to_string(dim_) + ",R=" + std::to_string(radius_) + ")";
}

LossSpec LossSpec::linear_simplex(std::vector<double> losses) {
  for (double v : losses) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("linear simplex loss: entries must lie in [0,1]");
    }
  }
  return LossSpec{LossKind::kLinearSimplex, std::move(losses)};
}

LossSpec LossSpec::linear_ball(std::vector<double> gradient) {
  return LossSpec{LossKind::kLinearBall, std::move(gradient)};
}

LossSpec LossSpec::quadratic_ball(std::vector<double> target) {
  return LossSpec{LossKind::kQuadraticBall, std::move(target)};
}

double loss_value(const LossSpec& loss, const std::vector<double>& x) {
  check_dim(loss, x);
  switch (loss.kind) {
    case LossKind::kLinearSimplex:
    case LossKind::kLinearBall: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += loss.coeffs[i] * x[i];
      return s;
    }
    case LossKind::kQuadraticBall: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - loss.coeffs[i];
        s += d * d;
      }
      return 0.5 * s;
    }
  }
  throw std::logic_error("loss_value: unknown loss kind");
}

std::vector<double> loss_gradient(const LossSpec& loss, const std::vector<double>& x) {
  check_dim(loss, x);
  switch (loss.kind) {
    case LossKind::kLinearSimplex:
    case LossKind::kLinearBall:
      return loss.coeffs;
    case LossKind::kQuadraticBall: {
      std::vector<double> grad(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) grad[i] = x[i] - loss.coeffs[i];
      return grad;
    }
  }
  throw std::logic_error("loss_gradient: unknown loss kind");
}

std::vector<double> mirror_map(const Geometry& geom, const std::vector<double>& theta,
                               double eta, std::int64_t local_count) {
  if (!(eta > 0.0)) throw std::invalid_argument("mirror_map: eta must be > 0");
  if (local_count < 1) throw std::invalid_argument("mirror_map: local_count must be >= 1");
  if (static_cast<int>(theta.size()) != geom.dim()) {
    throw std::invalid_argument("mirror_map: theta dimension mismatch");
  }
  for (double v : theta) {
    if (!std::isfinite(v)) throw std::runtime_error("mirror_map: non-finite dual state");
  }
  const double scale = eta / std::sqrt(static_cast<double>(local_count));
  if (geom.kind() == GeometryKind::kSimplex) {
    std::vector<double> z(theta.size());
    double zmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      z[i] = scale * theta[i];
      zmax = std::max(zmax, z[i]);
    }
    double total = 0.0;
    for (auto& v : z) {
      v = std::exp(v - zmax);
      total += v;
    }
    for (auto& v : z) v /= total;
    return z;
  }
  std::vector<double> z(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) z[i] = scale * theta[i];
  const double norm = std::sqrt(squared_norm(z));
  if (norm > geom.radius()) {
    const double shrink = geom.radius() / norm;
    for (auto& v : z) v *= shrink;
  }
  return z;
}

std::vector<double> project(const Geometry& geom, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != geom.dim()) {
    throw std::invalid_argument("project: dimension mismatch");
  }
  if (geom.kind() == GeometryKind::kBall) {
    const double norm = std::sqrt(squared_norm(x));
    if (norm <= geom.radius()) return x;
    std::vector<double> y(x);
    const double shrink = geom.radius() / norm;
    for (auto& v : y) v *= shrink;
    return y;
  }
  // Simplex projection by the sort-and-threshold rule.
  std::vector<double> sorted(x);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double threshold = 0.0;
  int support = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    running += sorted[k];
    const double candidate = (running - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) {
      threshold = candidate;
      support = static_cast<int>(k + 1);
    }
  }
  (void)support;
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::max(x[i] - threshold, 0.0);
  return y;
}

double tuned_eta(double range_bound, double strong_convexity, double loss_bound) {
  if (!(range_bound > 0.0 && strong_convexity > 0.0 && loss_bound > 0.0)) {
    throw std::invalid_argument("tuned_eta: all arguments must be > 0");
  }
  return std::sqrt(2.0 * strong_convexity * range_bound) / loss_bound;
}

double theory_bound(double range_bound, double strong_convexity, double loss_bound,
                    double eta, double multiplier, double horizon) {
  if (!(range_bound > 0.0 && strong_convexity > 0.0 && loss_bound > 0.0 && eta > 0.0)) {
    throw std::invalid_argument("theory_bound: constants must be > 0");
  }
  if (multiplier < 0.0 || horizon < 0.0) {
    throw std::invalid_argument("theory_bound: multiplier and horizon must be >= 0");
  }
  const double rate = range_bound / eta +
                      eta * loss_bound * loss_bound / (2.0 * strong_convexity);
  return rate * std::sqrt(multiplier * horizon);
}

}  // namespace coopnet
