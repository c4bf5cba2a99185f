#include "plateau/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plateau/errors.hpp"

namespace plateau {

double eval_field(const CurvatureExpr& f, double x, double y, double t) { return f.eval(x, y, t); }

std::array<double, 2> grad_field(const CurvatureExpr& f, double x, double y, double t, double h) {
  if (!(h > 0.0)) throw Error("gradient step must be positive");
  // Divide by the representable step so the rounding of x +- h does not bias the quotient.
  const double xp = x + h, xm = x - h;
  const double yp = y + h, ym = y - h;
  const double dx = (f.eval(xp, y, t) - f.eval(xm, y, t)) / (xp - xm);
  const double dy = (f.eval(x, yp, t) - f.eval(x, ym, t)) / (yp - ym);
  return {dx, dy};
}

double default_gradient_step(double x, double y) {
  return 1e-6 * std::max({1.0, std::abs(x), std::abs(y)});
}

FieldBounds estimate_bounds(const CurvatureExpr& f, const Box& box, int n_grid) {
  if (n_grid < 2) throw Error("estimate_bounds needs at least 2 lattice points per axis");
  if (!(box.x1 >= box.x0 && box.y1 >= box.y0)) throw Error("bounding box is inverted");
  FieldBounds out;
  out.box = box;
  out.provenance = FieldBounds::Provenance::Sampled;
  out.k_inf = std::numeric_limits<double>::infinity();
  out.k_sup = -std::numeric_limits<double>::infinity();
  const double last = static_cast<double>(n_grid - 1);
  auto lerp = [last](double lo, double hi, int i) { return lo + (hi - lo) * (static_cast<double>(i) / last); };
  for (int i = 0; i < n_grid; ++i) {
    const double x = lerp(box.x0, box.x1, i);
    for (int j = 0; j < n_grid; ++j) {
      const double y = lerp(box.y0, box.y1, j);
      for (int l = 0; l < n_grid; ++l) {
        const double v = f.eval(x, y, lerp(0.0, 1.0, l));
        out.k_inf = std::min(out.k_inf, v);
        out.k_sup = std::max(out.k_sup, v);
      }
    }
  }
  return out;
}

bool bounds_conflict(const FieldBounds& declared, const FieldBounds& sampled) {
  return sampled.k_inf < declared.k_inf || sampled.k_sup > declared.k_sup;
}

PinchingReport check_pinching(const FieldBounds& b, double a) {
  if (!(a > 0.0)) throw HypothesisError("half chord length a must be positive");
  PinchingReport r;
  r.holds_basic = b.k_inf > 0.0 && b.k_inf <= b.k_sup && b.k_sup < 1.0 / a;
  r.ratio = b.k_sup / (b.k_sup * a + 1.0);
  r.holds_pinch = r.ratio < b.k_inf;
  return r;
}

HomotopyField::HomotopyField(CurvatureExpr target, double k_sup, double s)
    : target_(std::move(target)), k_sup_(k_sup), s_(s) {}

HomotopyField HomotopyField::exact(CurvatureExpr target) { return HomotopyField(std::move(target), 0.0, 1.0); }

double HomotopyField::value(double x, double y, double t) const {
  if (s_ == 1.0) return target_.eval(x, y, t);
  if (s_ == 0.0) return k_sup_;
  return (1.0 - s_) * k_sup_ + s_ * target_.eval(x, y, t);
}

std::array<double, 2> HomotopyField::gradient(double x, double y, double t) const {
  if (s_ == 0.0 || target_.is_constant()) return {0.0, 0.0};
  auto g = grad_field(target_, x, y, t, default_gradient_step(x, y));
  return {s_ * g[0], s_ * g[1]};
}

FieldBounds HomotopyField::blended_bounds(const FieldBounds& target_bounds) const {
  FieldBounds out = target_bounds;
  out.k_inf = (1.0 - s_) * k_sup_ + s_ * target_bounds.k_inf;
  out.k_sup = (1.0 - s_) * k_sup_ + s_ * target_bounds.k_sup;
  return out;
}

}  // namespace plateau
