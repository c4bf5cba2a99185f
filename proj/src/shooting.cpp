#include <cmath>
#include <numbers>
#include <sstream>

#include "plateau/errors.hpp"
#include "plateau/solver.hpp"

namespace plateau {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(const std::array<double, 2>& m) { return std::hypot(m[0], m[1]); }

double frobenius(const Jacobian2& m) {
  return std::sqrt(m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1]);
}

struct Evaluation {
  std::array<double, 2> miss;
  Jacobian2 jacobian;
};

Evaluation evaluate(const HomotopyField& field, double a, const ShootingVars& vars, const ShootOptions& opts) {
  IvpOptions io;
  io.n_out = 5;
  io.tol = opts.ivp_tol;
  io.box = opts.box;
  io.variational = true;
  const IvpResult r = integrate_ivp(field, a, vars, io);
  const Vec2 end = r.curve.back();
  return {{end.x + a, end.y}, *r.jacobian};
}

// Keep theta0 in (-pi/2, 3pi/2]; the trajectory only depends on theta0 mod 2pi.
double wrap_theta(double th) {
  while (th > 1.5 * kPi) th -= 2.0 * kPi;
  while (th <= -0.5 * kPi) th += 2.0 * kPi;
  return th;
}

}  // namespace

std::array<double, 2> shooting_miss(const HomotopyField& field, double a, const ShootingVars& vars, double tol,
                                    const std::optional<Box>& box) {
  IvpOptions io;
  io.n_out = 5;
  io.tol = tol;
  io.box = box;
  const IvpResult r = integrate_ivp(field, a, vars, io);
  return {r.curve.back().x + a, r.curve.back().y};
}

Jacobian2 shooting_jacobian_fd(const HomotopyField& field, double a, const ShootingVars& vars, double tol,
                               double rel_step) {
  Jacobian2 jac{};
  const double steps[2] = {rel_step * std::max(1.0, std::abs(vars.theta0)), rel_step * vars.v};
  for (int col = 0; col < 2; ++col) {
    ShootingVars plus = vars, minus = vars;
    (col == 0 ? plus.theta0 : plus.v) += steps[col];
    (col == 0 ? minus.theta0 : minus.v) -= steps[col];
    const auto mp = shooting_miss(field, a, plus, tol);
    const auto mm = shooting_miss(field, a, minus, tol);
    const double width = col == 0 ? plus.theta0 - minus.theta0 : plus.v - minus.v;
    jac[0][col] = (mp[0] - mm[0]) / width;
    jac[1][col] = (mp[1] - mm[1]) / width;
  }
  return jac;
}

ShootResult shoot(const HomotopyField& field, double a, const ShootingVars& guess, const ShootOptions& opts) {
  if (!(guess.v > 0.0)) throw Error("initial guess needs v > 0");
  ShootingVars x = guess;
  Evaluation ev = evaluate(field, a, x, opts);
  double miss = norm2(ev.miss);

  for (int iter = 0;; ++iter) {
    if (miss <= opts.tol_newton) {
      x.theta0 = wrap_theta(x.theta0);
      return {x, iter, miss, ev.jacobian};
    }
    if (iter >= opts.max_iter) {
      std::ostringstream msg;
      msg << "Newton did not converge in " << opts.max_iter << " iterations (|miss| = " << miss << ")";
      throw NumericalError(NumericalError::Kind::MaxIterations, msg.str());
    }

    Jacobian2 jac = ev.jacobian;
    const bool finite = std::isfinite(frobenius(jac));
    if (!finite || opts.check_jacobian) {
      const Jacobian2 fd = shooting_jacobian_fd(field, a, x, opts.ivp_tol);
      if (finite) {
        Jacobian2 diff{};
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) diff[r][c] = jac[r][c] - fd[r][c];
        const double rel = frobenius(diff) / frobenius(jac);
        if (rel > 1e-4) {
          std::ostringstream msg;
          msg << "variational and finite-difference Jacobians disagree (relative " << rel << ")";
          throw NumericalError(NumericalError::Kind::JacobianMismatch, msg.str());
        }
      } else {
        jac = fd;
      }
    }

    const double d = det(jac);
    const double scale = std::hypot(jac[0][0], jac[1][0]) * std::hypot(jac[0][1], jac[1][1]);
    if (!(std::abs(d) >= 1e-12 * scale) || scale == 0.0) {
      throw NumericalError(NumericalError::Kind::SingularJacobian, "singular shooting Jacobian");
    }
    const double dth = -(jac[1][1] * ev.miss[0] - jac[0][1] * ev.miss[1]) / d;
    const double dv = -(-jac[1][0] * ev.miss[0] + jac[0][0] * ev.miss[1]) / d;

    // Backtracking: accept the first damping factor that reduces |miss|.
    double lambda = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30 && !accepted; ++ls, lambda *= 0.5) {
      const ShootingVars trial{x.theta0 + lambda * dth, x.v + lambda * dv};
      if (!(trial.v > 0.0)) continue;
      try {
        Evaluation tev = evaluate(field, a, trial, opts);
        const double tmiss = norm2(tev.miss);
        if (tmiss < (1.0 - 1e-4 * lambda) * miss || tmiss <= opts.tol_newton) {
          x = trial;
          ev = tev;
          miss = tmiss;
          accepted = true;
        }
      } catch (const NumericalError&) {
        // Trial left the box or stalled the integrator; damp further.
      }
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "line search failed at |miss| = " << miss;
      throw NumericalError(NumericalError::Kind::LineSearch, msg.str());
    }
  }
}

}  // namespace plateau
