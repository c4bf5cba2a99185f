#include "plateau/degree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "plateau/errors.hpp"

namespace plateau {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix2d J() {
  Eigen::Matrix2d j;
  j << 0.0, -1.0, 1.0, 0.0;
  return j;
}

}  // namespace

LinearizedOperator build_linearization(const HomotopyField& field, double a, const ShootingVars& vars, int n,
                                       double ivp_tol) {
  if (n < 50) throw Error("linearization needs at least 50 interior points");
  IvpOptions io;
  io.n_out = n + 2;
  io.tol = ivp_tol;
  const IvpResult ivp = integrate_ivp(field, a, vars, io);

  LinearizedOperator op;
  op.n = n;
  op.h = 1.0 / static_cast<double>(n + 1);
  op.B.resize(n);
  op.C.resize(n);
  for (int j = 0; j < n; ++j) {
    const std::size_t i = static_cast<std::size_t>(j + 1);
    const Vec2 p = ivp.curve.points()[i];
    const Vec2 dv = ivp.curve.velocities()[i];
    const double t = ivp.curve.params()[i];
    const Eigen::Vector2d gd(dv.x, dv.y);
    const Eigen::Vector2d jgd = J() * gd;
    const double speed = gd.norm();
    const double k = field.value(p.x, p.y, t);
    const auto g = field.gradient(p.x, p.y, t);
    op.B[j] = (k / speed) * jgd * gd.transpose() + speed * k * J();
    op.C[j] = speed * jgd * Eigen::RowVector2d(g[0], g[1]);
  }
  return op;
}

LinearizedOperator build_linearization(const HomotopyField& field, const SolutionRecord& record, int n) {
  return build_linearization(field, record.curve.a(), record.vars, n);
}

std::vector<Vec2> apply(const LinearizedOperator& op, const std::vector<Vec2>& V) {
  if (static_cast<int>(V.size()) != op.n) throw Error("apply: wrong number of interior values");
  const double h = op.h;
  auto at = [&](int j) -> Eigen::Vector2d {
    if (j < 0 || j >= op.n) return Eigen::Vector2d::Zero();
    return {V[j].x, V[j].y};
  };
  std::vector<Vec2> out(op.n);
  for (int j = 0; j < op.n; ++j) {
    const Eigen::Vector2d r = -(at(j + 1) - 2.0 * at(j) + at(j - 1)) / (h * h) +
                              op.B[j] * (at(j + 1) - at(j - 1)) / (2.0 * h) + op.C[j] * at(j);
    out[j] = {r.x(), r.y()};
  }
  return out;
}

Eigen::MatrixXd assemble(const LinearizedOperator& op) {
  const int n = op.n;
  const double h = op.h;
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    m.block<2, 2>(2 * j, 2 * j) = 2.0 / (h * h) * I + op.C[j];
    if (j > 0) m.block<2, 2>(2 * j, 2 * (j - 1)) = -1.0 / (h * h) * I - op.B[j] / (2.0 * h);
    if (j + 1 < n) m.block<2, 2>(2 * j, 2 * (j + 1)) = -1.0 / (h * h) * I + op.B[j] / (2.0 * h);
  }
  return m;
}

Eigen::MatrixXd assemble_laplacian(int n) {
  LinearizedOperator op;
  op.n = n;
  op.h = 1.0 / static_cast<double>(n + 1);
  op.B.assign(n, Eigen::Matrix2d::Zero());
  op.C.assign(n, Eigen::Matrix2d::Zero());
  return assemble(op);
}

std::vector<double> dirichlet_spectrum(int n) {
  if (n < 2) throw Error("dirichlet_spectrum needs at least 2 interior points");
  const double h = 1.0 / static_cast<double>(n + 1);
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 2.0 / (h * h));
  Eigen::VectorXd off = Eigen::VectorXd::Constant(n - 1, -1.0 / (h * h));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(NumericalError::Kind::Eigensolver, "tridiagonal eigensolver failed");
  }
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::complex<double>> dirichlet_spectrum(const LinearizedOperator& op) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(assemble(op), false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(NumericalError::Kind::Eigensolver, "eigensolver failed on the linearized operator");
  }
  const auto& ev = solver.eigenvalues();
  std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), [](auto l, auto r) {
    return l.real() < r.real() || (l.real() == r.real() && l.imag() < r.imag());
  });
  return out;
}

IndexValue determinant_sign(const Eigen::MatrixXd& m) {
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const auto& u = lu.matrixLU();
  int sign = static_cast<int>(std::lround(lu.permutationP().determinant()));
  double log_sum = 0.0, smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double p = u(i, i);
    if (p < 0.0) sign = -sign;
    const double mag = std::abs(p);
    smallest = std::min(smallest, mag);
    log_sum += std::log(mag);
  }
  const double geo_mean = std::exp(log_sum / static_cast<double>(u.rows()));
  IndexValue out;
  out.pivot_ratio = smallest / geo_mean;
  if (smallest == 0.0 || !(smallest >= 1e-10 * geo_mean)) {
    out.degenerate = true;
    out.value = 0;
  } else {
    out.value = sign;
  }
  return out;
}

IndexValue local_index(const HomotopyField& field, double a, const ShootingVars& vars, int n) {
  const LinearizedOperator op = build_linearization(field, a, vars, n);
  IndexValue m = determinant_sign(assemble(op));
  if (m.degenerate) return m;
  const IndexValue m0 = determinant_sign(assemble_laplacian(n));
  m.value *= m0.value;
  return m;
}

IndexValue local_index(const HomotopyField& field, const SolutionRecord& record, int n) {
  return local_index(field, record.curve.a(), record.vars, n);
}

IndexValue shooting_index(const Jacobian2& jac) {
  const double d = det(jac);
  const double scale = std::hypot(jac[0][0], jac[1][0]) * std::hypot(jac[0][1], jac[1][1]);
  IndexValue out;
  out.pivot_ratio = scale > 0.0 ? std::abs(d) / scale : 0.0;
  if (!(std::abs(d) >= 1e-12 * scale) || scale == 0.0) {
    out.degenerate = true;
    return out;
  }
  out.value = (d > 0.0 ? 1 : -1) * kShootingOrientation;
  return out;
}

IndexValue shooting_index(const SolutionRecord& record) { return shooting_index(record.jacobian); }

Profile Profile::zero() {
  auto z = [](double) { return 0.0; };
  return {z, z, z};
}

Profile Profile::sine(int m, double c) {
  const double w = m * kPi;
  return {[=](double t) { return c * std::sin(w * t); }, [=](double t) { return c * w * std::cos(w * t); },
          [=](double t) { return -c * w * w * std::sin(w * t); }};
}

Profile Profile::sum(std::vector<Profile> parts) {
  auto add = [](std::vector<std::function<double(double)>> fs) {
    return [fs = std::move(fs)](double t) {
      double s = 0.0;
      for (const auto& f : fs) s += f(t);
      return s;
    };
  };
  std::vector<std::function<double(double)>> f, d1, d2;
  for (auto& p : parts) {
    f.push_back(p.f);
    d1.push_back(p.d1);
    d2.push_back(p.d2);
  }
  return {add(f), add(d1), add(d2)};
}

QuadraticForms quadratic_form_checks(const SpectralProbe& probe, int panels) {
  const double w = probe.omega;
  if (!(w > kPi && w < std::sqrt(2.0) * kPi)) {
    throw HypothesisError("quadratic form checks need pi < omega < sqrt(2) pi (omega = " + std::to_string(w) + ")");
  }
  if (panels < 2 || panels % 2 != 0) throw Error("Simpson quadrature needs an even number of panels");

  struct Field2 {
    Eigen::Vector2d v, d1, d2;
  };
  // V = alpha e + beta (i e), e = e^{i phi}, phi' = omega; derivatives by the product rule
  // with e' = omega (i e) and (i e)' = -omega e.
  auto perturbation = [&](const Profile& al, const Profile& be, double t) {
    const double phi = probe.alpha0 + w * t;
    const Eigen::Vector2d e(std::cos(phi), std::sin(phi));
    const Eigen::Vector2d ie(-std::sin(phi), std::cos(phi));
    const double a0 = al.f(t), a1 = al.d1(t), a2 = al.d2(t);
    const double b0 = be.f(t), b1 = be.d1(t), b2 = be.d2(t);
    Field2 out;
    out.v = a0 * e + b0 * ie;
    out.d1 = a1 * e + a0 * w * ie + b1 * ie - b0 * w * e;
    out.d2 = a2 * e + 2.0 * a1 * w * ie - a0 * w * w * e + b2 * ie - 2.0 * b1 * w * e - b0 * w * w * ie;
    return std::pair{out, std::pair{e, ie}};
  };
  auto image = [&](const Field2& V, const Eigen::Vector2d& e, const Eigen::Vector2d& ie) -> Eigen::Vector2d {
    return -V.d2 - 2.0 * w * ie.dot(V.d1) * e;
  };

  const Profile v2_alpha = Profile::sine(1, probe.lambda);
  const Profile none = Profile::zero();
  const double h = 1.0 / panels;
  QuadraticForms q;
  for (int i = 0; i <= panels; ++i) {
    const double t = i * h;
    const double weight = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const auto [v1, frame] = perturbation(probe.alpha, probe.beta, t);
    const auto [v2, frame2] = perturbation(v2_alpha, none, t);
    const Eigen::Vector2d p1 = image(v1, frame.first, frame.second);
    const Eigen::Vector2d p2 = image(v2, frame2.first, frame2.second);
    q.q22 += weight * p2.dot(v2.v);
    q.q11 += weight * p1.dot(v1.v);
    q.q12 += weight * p1.dot(v2.v);
  }
  q.q22 *= h / 3.0;
  q.q11 *= h / 3.0;
  q.q12 *= h / 3.0;
  return q;
}

void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& out) {
  out << "i,j,value\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) out << i << ',' << j << ',' << m(i, j) << '\n';
    }
  }
}

}  // namespace plateau
