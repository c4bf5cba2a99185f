#pragma once

#include <array>
#include <optional>

#include "plateau/expression.hpp"

namespace plateau {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Box {
  double x0 = -10.0;
  double y0 = -10.0;
  double x1 = 10.0;
  double y1 = 10.0;

  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

struct FieldBounds {
  enum class Provenance { Declared, Sampled };

  double k_inf = 0.0;
  double k_sup = 0.0;
  Box box;
  Provenance provenance = Provenance::Declared;

  bool positive() const { return k_inf > 0.0 && k_inf <= k_sup; }
};

struct PinchingReport {
  bool holds_basic = false;  // 0 < inf k and sup k < 1/a
  bool holds_pinch = false;  // ratio < inf k
  double ratio = 0.0;        // sup k / (sup k * a + 1)
};

double eval_field(const CurvatureExpr& f, double x, double y, double t);

/// Central-difference spatial gradient (dk/dx, dk/dy) with step h > 0.
std::array<double, 2> grad_field(const CurvatureExpr& f, double x, double y, double t, double h);

/// Step used when no explicit h is given: 1e-6 * max(1, |x|, |y|).
double default_gradient_step(double x, double y);

/// Min/max of f over an n_grid^3 lattice on box x [0, 1].
FieldBounds estimate_bounds(const CurvatureExpr& f, const Box& box, int n_grid);

/// True if some sample lies outside the declared interval.
bool bounds_conflict(const FieldBounds& declared, const FieldBounds& sampled);

PinchingReport check_pinching(const FieldBounds& b, double a);

/// The blend k_s(x, t) = (1 - s) * sup k + s * k(x, t) used to deform a constant
/// field into the target. With s = 1 it is the target itself.
class HomotopyField {
 public:
  HomotopyField(CurvatureExpr target, double k_sup, double s = 1.0);

  /// Field evaluating exactly the expression.
  static HomotopyField exact(CurvatureExpr target);

  HomotopyField at(double s) const { return HomotopyField(target_, k_sup_, s); }

  double value(double x, double y, double t) const;
  std::array<double, 2> gradient(double x, double y, double t) const;

  const CurvatureExpr& target() const { return target_; }
  double k_sup() const { return k_sup_; }
  double s() const { return s_; }

  /// Blended bounds: k_inf(s) = (1-s) sup + s inf, k_sup(s) = sup.
  FieldBounds blended_bounds(const FieldBounds& target_bounds) const;

 private:
  CurvatureExpr target_;
  double k_sup_;
  double s_;
};

}  // namespace plateau
