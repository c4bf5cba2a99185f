#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "plateau/errors.hpp"
#include "plateau/solver.hpp"

namespace plateau {

namespace {

constexpr double kPi = std::numbers::pi;

ValidatorResult verdict(bool passed, double value, std::string detail = {}) {
  return {true, passed, value, std::move(detail)};
}

ValidatorResult from_lemma(const LemmaCheck& c) {
  ValidatorResult v;
  v.applicable = c.applicable;
  v.passed = !c.applicable || c.holds;
  v.value = c.value;
  for (const auto& r : c.reasons) v.detail += (v.detail.empty() ? "" : "; ") + r;
  return v;
}

template <class F>
ValidatorResult guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return {true, false, 0.0, e.what()};
  }
}

}  // namespace

bool SolutionRecord::all_validators_pass() const {
  return std::all_of(validators.begin(), validators.end(),
                     [](const auto& kv) { return !kv.second.applicable || kv.second.passed; });
}

SolutionRecord make_record(const HomotopyField& field, const FieldBounds& bounds, double a, Branch branch,
                           const ShootResult& solution, int n_samples, double ivp_tol, const std::optional<Box>& box) {
  IvpOptions io;
  io.n_out = n_samples;
  io.tol = ivp_tol;
  const IvpResult ivp = integrate_ivp(field, a, solution.vars, io);
  const Curve& curve = ivp.curve;

  SolutionRecord rec{branch, field.s(), solution.vars, curve, classify(curve), solution.jacobian,
                     std::nullopt, std::nullopt, {}, {}};
  auto& diag = rec.diagnostics;
  auto& val = rec.validators;

  const std::vector<double> k = curvature_profile(curve);
  const Curve sampled_only(a, std::vector<double>(curve.params().begin(), curve.params().end()),
                           std::vector<Vec2>(curve.points().begin(), curve.points().end()),
                           std::vector<Vec2>(curve.velocities().begin(), curve.velocities().end()));
  const std::vector<double> k_fd = curvature_profile(sampled_only);
  diag.length = arclength(curve);
  diag.k_gamma_min = *std::min_element(k.begin(), k.end());
  diag.k_gamma_max = *std::max_element(k.begin(), k.end());
  diag.newton_iters = solution.iterations;
  diag.final_miss_norm = solution.miss_norm;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Vec2 p = curve.points()[i];
    const double target = field.value(p.x, p.y, curve.params()[i]);
    diag.prescription_residual = std::max(diag.prescription_residual, std::abs(k[i] - target));
    diag.prescription_residual_fd = std::max(diag.prescription_residual_fd, std::abs(k_fd[i] - target));
  }

  val["boundary"] = verdict(boundary_error(curve) <= tol::boundary(a), boundary_error(curve));
  val["speed"] = verdict(speed_variation(curve) <= tol::kSpeed, speed_variation(curve));
  val["prescription"] = verdict(diag.prescription_residual <= 10.0 * ivp_tol, diag.prescription_residual);
  val["positive_curvature"] = verdict(diag.k_gamma_min > 0.0, diag.k_gamma_min);
  val["simple"] = guarded([&] { return verdict(is_simple_closed(curve), 0.0); });
  val["classification"] = verdict(rec.klass.tag == as_class(branch), 0.0, to_string(rec.klass.tag));

  val["monotone_lift"] = guarded([&] {
    const TangentLift lift = lift_tangent(curve, kPi / 2.0);
    bool increasing = true;
    for (std::size_t i = 1; i < lift.theta.size(); ++i) increasing = increasing && lift.theta[i] > lift.theta[i - 1];
    return verdict(increasing, lift.theta_end() - lift.theta0());
  });
  val["sampling_density"] = guarded([&] {
    const double turn = max_turn_per_segment(lift_tangent(curve, kPi / 2.0));
    return verdict(turn <= tol::kMaxTurn, turn);
  });
  val["graph_breaks"] = guarded([&] {
    const TangentLift lift = lift_tangent(curve, kPi / 2.0);
    const auto [lo, hi] = std::minmax_element(lift.theta.begin(), lift.theta.end());
    ValidatorResult v = verdict(graph_break_count(lift) <= 2, graph_break_count(lift));
    v.applicable = *lo > -kPi / 2.0 && *hi < 2.5 * kPi;
    return v;
  });
  val["rotation_angle"] = guarded([&] {
    diag.rotation_angle = rotation_angle(curve);
    return verdict(std::abs(diag.rotation_angle - 2.0 * kPi) <= tol::kRotation, diag.rotation_angle);
  });
  val["gauss_bonnet"] = guarded([&] {
    diag.gauss_bonnet_residual = gauss_bonnet_residual(curve);
    return verdict(diag.gauss_bonnet_residual <= 1e-6, diag.gauss_bonnet_residual);
  });
  {
    const LengthCheck lc = check_length_bound(curve, bounds);
    val["length_bound"] = verdict(lc.holds, lc.length, "bound " + std::to_string(lc.bound));
  }
  val["lemma_min_estimate"] = guarded([&] { return from_lemma(check_lemma_min_estimate(curve)); });
  val["lemma_max_estimate"] = guarded([&] { return from_lemma(check_lemma_max_estimate(curve)); });
  val["lemma_nonex"] = guarded([&] { return from_lemma(check_lemma_nonex(curve)); });
  {
    // Under pinching the nonexistence lemma must not apply to a solution.
    ValidatorResult v = verdict(!val["lemma_nonex"].applicable, 0.0);
    v.applicable = check_pinching(bounds, a).holds_pinch;
    val["nonex_excluded"] = v;
  }
  {
    const Box& b = box ? *box : bounds.box;
    bool inside = true;
    for (Vec2 p : curve.points()) inside = inside && b.contains(p.x, p.y);
    val["box_containment"] = verdict(inside, 0.0);
  }
  return rec;
}

ContinuationResult continue_homotopy(const CurvatureExpr& field, const FieldBounds& bounds, double a, Branch branch,
                                     const ContinuationOptions& opts) {
  const PinchingReport pinch = check_pinching(bounds, a);
  if (!pinch.holds_basic) {
    throw HypothesisError("need 0 < inf k <= sup k < 1/a to continue from a constant field");
  }
  if (branch == Branch::Large && !pinch.holds_pinch) {
    throw HypothesisError("pinching condition fails; the large branch is not guaranteed to stay compact");
  }

  const HomotopyField family(field, bounds.k_sup, 0.0);
  const AnalyticArc arc = make_arc(branch, a, bounds.k_sup);

  auto classify_at = [&](const HomotopyField& f, const ShootingVars& vars) {
    IvpOptions io;
    io.n_out = opts.n_samples;
    io.tol = opts.shoot.ivp_tol;
    return classify(integrate_ivp(f, a, vars, io).curve).tag;
  };

  std::vector<HomotopyStep> trace;
  ShootResult current = shoot(family.at(0.0), a, arc_shooting_vars(arc), opts.shoot);
  if (classify_at(family.at(0.0), current.vars) != as_class(branch)) {
    throw NumericalError(NumericalError::Kind::ClassificationChanged,
                         std::string("starting arc is not classified ") + to_string(branch));
  }
  trace.push_back({0.0, current.vars, current.iterations});

  // A constant target equal to its own sup is a constant homotopy: one step.
  const bool trivial = field.is_constant() && field.eval(0.0, 0.0, 0.0) == bounds.k_sup;
  double s = 0.0;
  double step = trivial ? 1.0 : opts.initial_step;
  int streak = 0;
  bool last_was_class_change = false;

  while (s < 1.0) {
    const double s_try = std::min(1.0, s + step);
    bool ok = false;
    try {
      const ShootResult next = shoot(family.at(s_try), a, current.vars, opts.shoot);
      if (classify_at(family.at(s_try), next.vars) == as_class(branch)) {
        current = next;
        ok = true;
      } else {
        last_was_class_change = true;
      }
    } catch (const NumericalError&) {
      last_was_class_change = false;
    } catch (const EvalError&) {
      last_was_class_change = false;
    }

    if (ok) {
      s = s_try;
      trace.push_back({s, current.vars, current.iterations});
      last_was_class_change = false;
      if (++streak >= 2) {
        step *= 2.0;
        streak = 0;
      }
      continue;
    }
    streak = 0;
    step *= 0.5;
    if (step < opts.min_step) {
      std::ostringstream msg;
      msg << to_string(branch) << " branch: continuation step fell below " << opts.min_step << " after s = " << s;
      if (last_was_class_change) {
        msg << " (solution changed classification)";
        throw NumericalError(NumericalError::Kind::ClassificationChanged, msg.str());
      }
      throw NumericalError(NumericalError::Kind::ContinuationUnderflow, msg.str());
    }
  }

  SolutionRecord rec = make_record(family.at(1.0), bounds, a, branch, current, opts.n_samples, opts.shoot.ivp_tol);
  return {std::move(trace), std::move(rec)};
}

}  // namespace plateau
