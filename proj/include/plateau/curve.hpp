#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace plateau {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
/// Rotation by pi/2.
inline Vec2 rot90(Vec2 v) { return {-v.y, v.x}; }
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

namespace tol {
inline constexpr double kClass = 1e-7;   // margin on open angle intervals (radians)
inline constexpr double kAngle = 1e-8;   // lift reconstruction of the unit tangent
inline constexpr double kLemma = 1e-9;   // slack on lemma inequalities
inline constexpr double kRotation = 1e-6;
inline constexpr double kSpeed = 1e-6;   // relative speed variation
inline constexpr double kMaxTurn = 0.1;  // sampling density for polyline simplicity
inline double boundary(double a) { return 1e-9 * a; }
}  // namespace tol

/// A sampled planar curve on the parameter interval [0, 1] joining (a, 0) towards (-a, ...).
///
/// The constructor only enforces what every consumer relies on: a strictly
/// increasing grid from 0 to 1, matching array lengths and nonzero speed.
/// Boundary values and constant speed are properties checked by the validators,
/// because the lemma test curves end at (-a, b) and are not arclength-proportional.
class Curve {
 public:
  Curve(double a, std::vector<double> params, std::vector<Vec2> points, std::vector<Vec2> velocities,
        std::optional<std::vector<Vec2>> accelerations = std::nullopt);

  double a() const { return a_; }
  std::size_t size() const { return params_.size(); }
  std::span<const double> params() const { return params_; }
  std::span<const Vec2> points() const { return points_; }
  std::span<const Vec2> velocities() const { return velocities_; }
  /// Second derivatives supplied by an ODE right-hand side, when known.
  const std::optional<std::vector<Vec2>>& accelerations() const { return accelerations_; }

  Vec2 front() const { return points_.front(); }
  Vec2 back() const { return points_.back(); }

  /// Mirror image in the x-axis (orientation and curvature sign flip).
  Curve reflected() const;

 private:
  double a_;
  std::vector<double> params_;
  std::vector<Vec2> points_;
  std::vector<Vec2> velocities_;
  std::optional<std::vector<Vec2>> accelerations_;
};

struct TangentLift {
  std::vector<double> theta;
  double theta0() const { return theta.front(); }
  double theta_end() const { return theta.back(); }
};

/// Max of |gamma(0) - (a,0)| and |gamma(1) - (-a,0)|.
double boundary_error(const Curve& c);

/// (max |v| - min |v|) / mean |v|.
double speed_variation(const Curve& c);

/// Second derivative at sample i: stored ODE value if available, otherwise the
/// derivative of the 7-point Lagrange interpolant of the velocities (6th order;
/// 5 points on very short curves).
Vec2 acceleration(const Curve& c, std::size_t i);

/// |v|^-3 <a, J v>; +1/r on a counterclockwise circle of radius r.
double geodesic_curvature(const Curve& c, std::size_t i);
std::vector<double> curvature_profile(const Curve& c);

/// Continuous tangent angle with theta(0) in [hint - pi, hint + pi).
/// Throws GeometryError when adjacent tangents are (nearly) anti-parallel.
TangentLift lift_tangent(const Curve& c, double theta0_hint);

/// Largest |theta(t_{i+1}) - theta(t_i)|.
double max_turn_per_segment(const TangentLift& lift);

/// Number of samples intervals on which theta crosses pi/2 or 3pi/2.
int graph_break_count(const TangentLift& lift);

/// Composite quadrature on the curve's grid: Simpson (with a closing 3/8 panel)
/// on uniform grids, trapezoid otherwise.
double integrate(std::span<const double> params, std::span<const double> values);

double arclength(const Curve& c);

}  // namespace plateau
