#include <algorithm>
#include <cmath>
#include <sstream>

#include "plateau/errors.hpp"
#include "plateau/solver.hpp"

namespace plateau {

namespace {

constexpr int kMaxDim = 9;
using State = std::array<double, kMaxDim>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class System {
 public:
  System(const HomotopyField& field, double v, bool variational)
      : field_(field), v_(v), dim_(variational ? 9 : 3) {}

  int dim() const { return dim_; }

  void operator()(double t, const State& y, State& dy) const {
    const double c = std::cos(y[2]), s = std::sin(y[2]);
    const double k = field_.value(y[0], y[1], t);
    dy[0] = v_ * c;
    dy[1] = v_ * s;
    dy[2] = v_ * k;
    if (dim_ == 3) return;
    const auto g = field_.gradient(y[0], y[1], t);
    // Sensitivities w.r.t. theta0 (3..5) and v (6..8).
    for (int col = 0; col < 2; ++col) {
      const int o = 3 + 3 * col;
      dy[o + 0] = -v_ * s * y[o + 2];
      dy[o + 1] = v_ * c * y[o + 2];
      dy[o + 2] = v_ * (g[0] * y[o + 0] + g[1] * y[o + 1]);
    }
    dy[6] += c;
    dy[7] += s;
    dy[8] += k;
  }

 private:
  const HomotopyField& field_;
  double v_;
  int dim_;
};

}  // namespace

IvpResult integrate_ivp(const HomotopyField& field, double a, const ShootingVars& vars, const IvpOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error("integration tolerance must be positive");
  if (opts.n_out < 5) throw Error("integrate_ivp needs at least 5 output samples");
  if (!(vars.v > 0.0)) throw Error("shooting speed v must be positive");

  const System sys(field, vars.v, opts.variational);
  const int dim = sys.dim();
  const int n = opts.n_out;

  State y{};
  y[0] = a;
  y[1] = 0.0;
  y[2] = vars.theta0;
  if (opts.variational) y[5] = 1.0;  // d theta / d theta0 at t = 0

  std::vector<double> params(n);
  std::vector<Vec2> pts(n), vel(n), acc(n);
  std::vector<double> theta(n);
  auto record = [&](int i, double t, const State& st) {
    params[i] = t;
    pts[i] = {st[0], st[1]};
    const Vec2 dir = unit(st[2]);
    vel[i] = vars.v * dir;
    acc[i] = (vars.v * vars.v * field.value(st[0], st[1], t)) * rot90(dir);
    theta[i] = st[2];
  };
  record(0, 0.0, y);

  int accepted = 0, rejected = 0;

  State k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, tmp{}, y5{};
  double t = 0.0;
  sys(t, y, k1);
  double h = std::min(0.01, 1.0 / (n - 1));
  for (int i = 1; i < n; ++i) {
    const double t_target = (i == n - 1) ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    while (t < t_target) {
      bool clipped = false;
      double step = h;
      // Stretch slightly rather than leave a sliver before the output point.
      if (t + 1.25 * step >= t_target) {
        step = t_target - t;
        clipped = true;
      }
      if (step < opts.min_step) {
        std::ostringstream msg;
        msg << "step size underflow at t=" << t << " (h=" << step << ")";
        throw NumericalError(NumericalError::Kind::StepUnderflow, msg.str());
      }
      for (int d = 0; d < dim; ++d) tmp[d] = y[d] + step * a21 * k1[d];
      sys(t + c2 * step, tmp, k2);
      for (int d = 0; d < dim; ++d) tmp[d] = y[d] + step * (a31 * k1[d] + a32 * k2[d]);
      sys(t + c3 * step, tmp, k3);
      for (int d = 0; d < dim; ++d) tmp[d] = y[d] + step * (a41 * k1[d] + a42 * k2[d] + a43 * k3[d]);
      sys(t + c4 * step, tmp, k4);
      for (int d = 0; d < dim; ++d) tmp[d] = y[d] + step * (a51 * k1[d] + a52 * k2[d] + a53 * k3[d] + a54 * k4[d]);
      sys(t + c5 * step, tmp, k5);
      for (int d = 0; d < dim; ++d) {
        tmp[d] = y[d] + step * (a61 * k1[d] + a62 * k2[d] + a63 * k3[d] + a64 * k4[d] + a65 * k5[d]);
      }
      const double t_new = clipped ? t_target : t + step;
      sys(t_new, tmp, k6);
      for (int d = 0; d < dim; ++d) {
        y5[d] = y[d] + step * (b1 * k1[d] + b3 * k3[d] + b4 * k4[d] + b5 * k5[d] + b6 * k6[d]);
      }
      sys(t_new, y5, k7);
      double err = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double e = step * (e1 * k1[d] + e3 * k3[d] + e4 * k4[d] + e5 * k5[d] + e6 * k6[d] + e7 * k7[d]);
        const double scale = opts.tol * (1.0 + std::max(std::abs(y[d]), std::abs(y5[d])));
        err = std::max(err, std::abs(e) / scale);
      }
      if (!std::isfinite(err)) {
        throw NumericalError(NumericalError::Kind::StepUnderflow, "non-finite integrator state");
      }
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        t = t_new;
        y = y5;
        k1 = k7;
        ++accepted;
        if (opts.box && !opts.box->contains(y[0], y[1])) {
          std::ostringstream msg;
          msg << "trajectory left the bounding box at t=" << t << " (x=" << y[0] << ", y=" << y[1] << ")";
          throw NumericalError(NumericalError::Kind::LeftBox, msg.str());
        }
        // A clipped step says little about the natural step size; only let it shrink h.
        if (!clipped) {
          h = step * factor;
        } else if (factor < 1.0) {
          h = std::min(h, step * factor);
        }
      } else {
        ++rejected;
        // Shrink past the stretch window so a stretched step is not retried as is.
        h = step * std::min(factor, 0.7);
      }
    }
    record(i, t_target, y);
  }

  std::optional<Jacobian2> jacobian;
  if (opts.variational) jacobian = Jacobian2{{{y[3], y[6]}, {y[4], y[7]}}};
  IvpResult out{Curve(a, std::move(params), std::move(pts), std::move(vel), std::move(acc)), std::move(theta),
                jacobian, accepted, rejected};
  return out;
}

}  // namespace plateau
