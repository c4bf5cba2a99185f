#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "plateau/analytic_arc.hpp"
#include "plateau/field.hpp"
#include "plateau/solver.hpp"

namespace plateau {

/// Discretisation of the linearised equation -V'' + B(t) V' + C(t) V = 0 with
/// V(0) = V(1) = 0 on n interior points t_j = j h, h = 1/(n+1).
///
/// For F(gamma) = -gamma'' + |gamma'| k(gamma, t) J gamma' the derivative is
///   B(t) W = (k / |gamma'|) <gamma', W> J gamma' + |gamma'| k J W
///   C(t) W = |gamma'| <grad k, W> J gamma'
/// so C vanishes for fields that do not depend on position.
struct LinearizedOperator {
  int n = 0;
  double h = 0.0;
  std::vector<Eigen::Matrix2d> B;
  std::vector<Eigen::Matrix2d> C;

  double t(int j) const { return (j + 1) * h; }  // j = 0 .. n-1
};

LinearizedOperator build_linearization(const HomotopyField& field, double a, const ShootingVars& vars, int n,
                                       double ivp_tol = 1e-12);
LinearizedOperator build_linearization(const HomotopyField& field, const SolutionRecord& record, int n);

/// Applies the discrete operator to interior values V[0..n-1] (zero boundary values).
std::vector<Vec2> apply(const LinearizedOperator& op, const std::vector<Vec2>& V);

/// Dense 2n x 2n matrix, unknowns ordered (V_1.x, V_1.y, V_2.x, ...).
Eigen::MatrixXd assemble(const LinearizedOperator& op);

/// Same-size block discretisation of -D^2.
Eigen::MatrixXd assemble_laplacian(int n);

/// Eigenvalues of the 3-point -D^2 with Dirichlet conditions on n interior points, ascending.
std::vector<double> dirichlet_spectrum(int n);

/// Eigenvalues of the block operator, ascending by real part.
std::vector<std::complex<double>> dirichlet_spectrum(const LinearizedOperator& op);

/// sign det via partial-pivot LU; degenerate if a pivot is below 1e-10 times
/// the geometric mean of all pivot magnitudes.
IndexValue determinant_sign(const Eigen::MatrixXd& m);

/// Leray-Schauder local index as sign det(M0^-1 M).
IndexValue local_index(const HomotopyField& field, const SolutionRecord& record, int n);
IndexValue local_index(const HomotopyField& field, double a, const ShootingVars& vars, int n);

/// Orientation relating sign det of the shooting Jacobian to the local index.
/// Fixed once from the constant field k0 a = 0.5, small branch (index +1, where
/// det J = -sin(omega_s)/k0 < 0) and never re-derived.
inline constexpr int kShootingOrientation = -1;

/// sign det J * kShootingOrientation, where J = d(miss)/d(theta0, v).
IndexValue shooting_index(const Jacobian2& jacobian);
IndexValue shooting_index(const SolutionRecord& record);

/// A scalar test profile with its first two derivatives.
struct Profile {
  std::function<double(double)> f;
  std::function<double(double)> d1;
  std::function<double(double)> d2;

  static Profile zero();
  /// c * sin(m pi t)
  static Profile sine(int m, double c = 1.0);
  static Profile sum(std::vector<Profile> parts);
};

/// Test perturbation V = alpha e + beta i e with e = e^{i(alpha0 + omega t)},
/// paired against V2 = lambda sin(pi t) e.
struct SpectralProbe {
  double omega = 0.0;
  double alpha0 = 0.0;
  double lambda = 1.0;
  Profile alpha = Profile::zero();
  Profile beta = Profile::zero();
};

struct QuadraticForms {
  double q22 = 0.0;  // <P V2, V2>
  double q11 = 0.0;  // <P V1, V1>
  double q12 = 0.0;  // <P V1, V2>
};

/// L^2 pairings of P V = -V'' - 2 omega <i e, V'> e (the operator reached at
/// the far end of the coupling homotopy on the large branch) by composite
/// Simpson quadrature with `panels` panels. Requires pi < omega < sqrt(2) pi.
QuadraticForms quadratic_form_checks(const SpectralProbe& probe, int panels = 4000);

/// Writes nonzero entries as CSV "i,j,value", row-major.
void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& out);

}  // namespace plateau
