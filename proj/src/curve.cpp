#include "plateau/curve.hpp"

#include <algorithm>
#include <array>
#include <numbers>

#include "plateau/errors.hpp"

namespace plateau {

namespace {

constexpr double kPi = std::numbers::pi;

// Weights of d/dt of the Lagrange interpolant through nodes at t.
std::vector<double> derivative_weights(std::span<const double> nodes, double t) {
  const std::size_t n = nodes.size();
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == j) continue;
      double prod = 1.0 / (nodes[j] - nodes[m]);
      for (std::size_t l = 0; l < n; ++l) {
        if (l == j || l == m) continue;
        prod *= (t - nodes[l]) / (nodes[j] - nodes[l]);
      }
      sum += prod;
    }
    w[j] = sum;
  }
  return w;
}

bool is_uniform(std::span<const double> params) {
  if (params.size() < 3) return true;
  const double h = (params.back() - params.front()) / static_cast<double>(params.size() - 1);
  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    if (std::abs((params[i + 1] - params[i]) - h) > 1e-9 * h) return false;
  }
  return true;
}

}  // namespace

Curve::Curve(double a, std::vector<double> params, std::vector<Vec2> points, std::vector<Vec2> velocities,
             std::optional<std::vector<Vec2>> accelerations)
    : a_(a),
      params_(std::move(params)),
      points_(std::move(points)),
      velocities_(std::move(velocities)),
      accelerations_(std::move(accelerations)) {
  if (!(a_ > 0.0)) throw GeometryError("half chord length a must be positive");
  const std::size_t n = params_.size();
  if (n < 5) throw GeometryError("a curve needs at least 5 samples");
  if (points_.size() != n || velocities_.size() != n || (accelerations_ && accelerations_->size() != n)) {
    throw GeometryError("curve sample arrays have different lengths");
  }
  if (std::abs(params_.front()) > 1e-12 || std::abs(params_.back() - 1.0) > 1e-12) {
    throw GeometryError("parameter grid must run from 0 to 1");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(params_[i + 1] > params_[i])) {
      throw GeometryError("parameter grid is not strictly increasing at sample " + std::to_string(i + 1));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(norm(velocities_[i]) > 0.0)) throw GeometryError("zero speed at sample " + std::to_string(i));
  }
}

Curve Curve::reflected() const {
  auto flip = [](std::vector<Vec2> v) {
    for (auto& p : v) p.y = -p.y;
    return v;
  };
  std::optional<std::vector<Vec2>> acc;
  if (accelerations_) acc = flip(*accelerations_);
  return Curve(a_, params_, flip(points_), flip(velocities_), std::move(acc));
}

double boundary_error(const Curve& c) {
  return std::max(norm(c.front() - Vec2{c.a(), 0.0}), norm(c.back() - Vec2{-c.a(), 0.0}));
}

double speed_variation(const Curve& c) {
  double lo = norm(c.velocities()[0]), hi = lo, sum = 0.0;
  for (const Vec2& v : c.velocities()) {
    const double s = norm(v);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    sum += s;
  }
  return (hi - lo) / (sum / static_cast<double>(c.size()));
}

Vec2 acceleration(const Curve& c, std::size_t i) {
  if (c.accelerations()) return (*c.accelerations())[i];
  const std::size_t n = c.size();
  const std::size_t width = n >= 7 ? 7 : 5;
  const std::size_t half = width / 2;
  const std::size_t first = std::min(i >= half ? i - half : 0, n - width);
  const auto w = derivative_weights(c.params().subspan(first, width), c.params()[i]);
  Vec2 acc;
  for (std::size_t j = 0; j < width; ++j) acc += w[j] * c.velocities()[first + j];
  return acc;
}

double geodesic_curvature(const Curve& c, std::size_t i) {
  const Vec2 v = c.velocities()[i];
  const double speed = norm(v);
  if (!(speed > 0.0)) throw GeometryError("zero speed at sample " + std::to_string(i));
  return dot(acceleration(c, i), rot90(v)) / (speed * speed * speed);
}

std::vector<double> curvature_profile(const Curve& c) {
  std::vector<double> k(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) k[i] = geodesic_curvature(c, i);
  return k;
}

TangentLift lift_tangent(const Curve& c, double theta0_hint) {
  const auto vel = c.velocities();
  TangentLift lift;
  lift.theta.resize(c.size());
  double th = std::atan2(vel[0].y, vel[0].x);
  // Shift into [hint - pi, hint + pi).
  th -= 2.0 * kPi * std::floor((th - (theta0_hint - kPi)) / (2.0 * kPi));
  lift.theta[0] = th;
  for (std::size_t i = 1; i < c.size(); ++i) {
    const double step = std::atan2(cross(vel[i - 1], vel[i]), dot(vel[i - 1], vel[i]));
    if (std::abs(step) >= kPi - 1e-9) {
      throw GeometryError("tangent jumps by pi between samples " + std::to_string(i - 1) + " and " +
                          std::to_string(i) + " (undersampled curve)");
    }
    th += step;
    lift.theta[i] = th;
  }
  return lift;
}

double max_turn_per_segment(const TangentLift& lift) {
  double m = 0.0;
  for (std::size_t i = 1; i < lift.theta.size(); ++i) m = std::max(m, std::abs(lift.theta[i] - lift.theta[i - 1]));
  return m;
}

int graph_break_count(const TangentLift& lift) {
  int count = 0;
  for (double level : {kPi / 2.0, 3.0 * kPi / 2.0}) {
    int last_sign = 0;
    for (double th : lift.theta) {
      const int sign = th > level ? 1 : th < level ? -1 : 0;
      if (sign == 0) continue;
      if (last_sign != 0 && sign != last_sign) ++count;
      last_sign = sign;
    }
  }
  return count;
}

double integrate(std::span<const double> params, std::span<const double> values) {
  const std::size_t n = params.size();
  if (n != values.size()) throw Error("integrate: size mismatch");
  if (n < 2) return 0.0;
  if (!is_uniform(params) || n < 4) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) sum += 0.5 * (params[i + 1] - params[i]) * (values[i] + values[i + 1]);
    return sum;
  }
  const double h = (params.back() - params.front()) / static_cast<double>(n - 1);
  std::size_t intervals = n - 1;
  double tail = 0.0;
  if (intervals % 2 == 1) {
    // Simpson 3/8 on the last three intervals.
    const std::size_t k = n - 4;
    tail = 3.0 * h / 8.0 * (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
    intervals -= 3;
    if (intervals == 0) return tail;
  }
  double sum = values[0] + values[intervals];
  for (std::size_t i = 1; i < intervals; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  return h / 3.0 * sum + tail;
}

double arclength(const Curve& c) {
  std::vector<double> speed(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) speed[i] = norm(c.velocities()[i]);
  return integrate(c.params(), speed);
}

}  // namespace plateau
