#pragma once

#include "plateau/curve.hpp"
#include "plateau/geometry.hpp"

namespace plateau {

/// Unknowns of the shooting problem: initial tangent angle and constant speed
/// (the speed on [0, 1] equals the curve length).
struct ShootingVars {
  double theta0 = 0.0;
  double v = 0.0;
};

/// Constant-curvature solution joining (a,0) to (-a,0): the minor (small) or
/// major (large) arc of the circle of radius 1/k0 through both points.
struct AnalyticArc {
  Branch branch = Branch::Small;
  double a = 0.0;
  double k0 = 0.0;
  double alpha0 = 0.0;  // arccos(k0 a)
  double omega = 0.0;   // pi -+ 2 alpha0
  Vec2 center;
  double radius = 0.0;

  /// Sign of alpha0 in the phase: +1 small, -1 large.
  double phase_sign() const { return branch == Branch::Small ? 1.0 : -1.0; }
  Vec2 position(double t) const;
  Vec2 velocity(double t) const;
  Vec2 acceleration(double t) const;
};

/// Throws HypothesisError unless a > 0 and 0 < k0 a < 1.
AnalyticArc make_arc(Branch branch, double a, double k0);

/// Uniform n-point sampling with exact first and second derivatives.
Curve sample_arc(const AnalyticArc& arc, int n);

ShootingVars arc_shooting_vars(const AnalyticArc& arc);

}  // namespace plateau
