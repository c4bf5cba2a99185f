#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plateau/analytic_arc.hpp"
#include "plateau/curve.hpp"
#include "plateau/field.hpp"
#include "plateau/geometry.hpp"

namespace plateau {

/// 2x2 matrix, row-major: d(x(1), y(1)) / d(theta0, v).
using Jacobian2 = std::array<std::array<double, 2>, 2>;

inline double det(const Jacobian2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

struct IvpOptions {
  int n_out = 512;
  double tol = 1e-10;
  std::optional<Box> box;     // throw NumericalError::LeftBox on exit
  bool variational = false;   // also integrate d(x, y, theta)/d(theta0, v)
  double min_step = 1e-14;
};

struct IvpResult {
  Curve curve;                  // carries ODE accelerations
  std::vector<double> theta;    // lifted direction angle per output sample
  std::optional<Jacobian2> jacobian;
  int accepted_steps = 0;
  int rejected_steps = 0;
};

/// Integrates x' = v cos(theta), y' = v sin(theta), theta' = v k(x, y, t) from
/// (a, 0, theta0) over [0, 1] with an adaptive Dormand-Prince 5(4) pair. Steps are
/// clipped to land on the uniform output grid, so every output sample carries
/// the full integrator accuracy.
IvpResult integrate_ivp(const HomotopyField& field, double a, const ShootingVars& vars, const IvpOptions& opts = {});

struct ShootOptions {
  double tol_newton = 1e-10;
  int max_iter = 40;
  double ivp_tol = 1e-10;
  std::optional<Box> box;
  /// Cross-check the variational Jacobian against finite differences (relative
  /// step 1e-7) on every iteration; mismatch beyond 1e-4 relative throws.
  bool check_jacobian = false;
};

struct ShootResult {
  ShootingVars vars;
  int iterations = 0;
  double miss_norm = 0.0;
  Jacobian2 jacobian{};  // variational Jacobian at the returned vars
};

/// (x(1) + a, y(1)) for the given unknowns.
std::array<double, 2> shooting_miss(const HomotopyField& field, double a, const ShootingVars& vars, double tol,
                                    const std::optional<Box>& box = std::nullopt);

/// Finite-difference Jacobian of shooting_miss with relative step `rel_step`.
Jacobian2 shooting_jacobian_fd(const HomotopyField& field, double a, const ShootingVars& vars, double tol,
                               double rel_step = 1e-7);

/// Damped Newton on the two endpoint conditions gamma(1) = (-a, 0).
ShootResult shoot(const HomotopyField& field, double a, const ShootingVars& guess, const ShootOptions& opts = {});

struct ValidatorResult {
  bool applicable = true;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

struct Diagnostics {
  double length = 0.0;
  double k_gamma_min = 0.0;
  double k_gamma_max = 0.0;
  double gauss_bonnet_residual = 0.0;
  double rotation_angle = 0.0;
  int newton_iters = 0;
  double final_miss_norm = 0.0;
  double prescription_residual = 0.0;     // from the ODE right-hand side
  double prescription_residual_fd = 0.0;  // from differencing the sampled velocities
};

struct IndexValue {
  int value = 0;  // +1 / -1, 0 when degenerate
  bool degenerate = false;
  double pivot_ratio = 0.0;  // smallest pivot relative to their geometric mean
};

struct SolutionRecord {
  Branch branch = Branch::Small;
  double s = 1.0;
  ShootingVars vars;
  Curve curve;
  ClassTag klass;
  Jacobian2 jacobian{};
  std::optional<IndexValue> index;           // filled by the degree computation
  std::optional<IndexValue> shooting_index;  // finite-dimensional cross-check
  Diagnostics diagnostics;
  std::map<std::string, ValidatorResult> validators;

  bool all_validators_pass() const;
};

/// Builds the record of a converged solution of the field at its homotopy
/// parameter and runs every curve validator against `bounds` (the bounds of that field).
SolutionRecord make_record(const HomotopyField& field, const FieldBounds& bounds, double a, Branch branch,
                           const ShootResult& solution, int n_samples, double ivp_tol,
                           const std::optional<Box>& box = std::nullopt);

struct ContinuationOptions {
  int n_samples = 512;
  ShootOptions shoot;
  double initial_step = 0.1;
  double min_step = 1e-6;
};

struct HomotopyStep {
  double s = 0.0;
  ShootingVars vars;
  int newton_iters = 0;
};

struct ContinuationResult {
  std::vector<HomotopyStep> trace;
  SolutionRecord record;
};

/// Follows the branch from the constant field sup k at s = 0 to the target at
/// s = 1. Requires the basic hypotheses, and pinching for the large branch
/// (HypothesisError otherwise).
/// Each accepted step must converge and keep the branch classification; a
/// rejected step halves the increment, two successes in a row double it, and
/// falling below `min_step` throws NumericalError (ContinuationUnderflow, or
/// ClassificationChanged when the last rejection was a change of class).
ContinuationResult continue_homotopy(const CurvatureExpr& field, const FieldBounds& bounds, double a, Branch branch,
                                     const ContinuationOptions& opts = {});

}  // namespace plateau
