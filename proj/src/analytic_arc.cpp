#include "plateau/analytic_arc.hpp"

#include <cmath>
#include <numbers>

#include "plateau/errors.hpp"

namespace plateau {

namespace {
constexpr double kPi = std::numbers::pi;
}

// gamma(t) = k0^-1 e^{i(+-alpha0 + omega t)} -+ i k0^-1 sin(alpha0)
Vec2 AnalyticArc::position(double t) const {
  const double phase = phase_sign() * alpha0 + omega * t;
  return center + radius * unit(phase);
}

Vec2 AnalyticArc::velocity(double t) const {
  const double phase = phase_sign() * alpha0 + omega * t;
  return (omega * radius) * rot90(unit(phase));
}

Vec2 AnalyticArc::acceleration(double t) const {
  const double phase = phase_sign() * alpha0 + omega * t;
  return (-omega * omega * radius) * unit(phase);
}

AnalyticArc make_arc(Branch branch, double a, double k0) {
  if (!(a > 0.0)) throw HypothesisError("half chord length a must be positive");
  if (!(k0 > 0.0) || !(k0 * a < 1.0)) {
    throw HypothesisError("constant curvature needs 0 < k0 a < 1 for two simple arcs (k0 a = " +
                          std::to_string(k0 * a) + ")");
  }
  AnalyticArc arc;
  arc.branch = branch;
  arc.a = a;
  arc.k0 = k0;
  arc.alpha0 = std::acos(k0 * a);
  arc.omega = branch == Branch::Small ? kPi - 2.0 * arc.alpha0 : kPi + 2.0 * arc.alpha0;
  arc.radius = 1.0 / k0;
  const double offset = std::sin(arc.alpha0) / k0;
  arc.center = {0.0, branch == Branch::Small ? -offset : offset};
  return arc;
}

Curve sample_arc(const AnalyticArc& arc, int n) {
  if (n < 5) throw Error("sample_arc needs at least 5 samples");
  std::vector<double> params(n);
  std::vector<Vec2> pts(n), vel(n), acc(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    params[i] = t;
    pts[i] = arc.position(t);
    vel[i] = arc.velocity(t);
    acc[i] = arc.acceleration(t);
  }
  // Pin the endpoints; the closed form reproduces them only up to roundoff.
  pts.front() = {arc.a, 0.0};
  pts.back() = {-arc.a, 0.0};
  return Curve(arc.a, std::move(params), std::move(pts), std::move(vel), std::move(acc));
}

ShootingVars arc_shooting_vars(const AnalyticArc& arc) {
  double theta0 = arc.phase_sign() * arc.alpha0 + kPi / 2.0;
  if (theta0 >= 1.5 * kPi) theta0 -= 2.0 * kPi;
  if (theta0 <= -kPi / 2.0) theta0 += 2.0 * kPi;
  return {theta0, arc.omega / arc.k0};
}

}  // namespace plateau
