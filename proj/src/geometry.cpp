#include "plateau/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <numeric>

#include "plateau/errors.hpp"

namespace plateau {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGrid = 1099511627776.0;  // 2^40
constexpr double kMaxCoordinate = 2097152.0;  // 2^21, keeps cross products inside 128 bits

struct IPoint {
  std::int64_t x;
  std::int64_t y;
  friend bool operator==(IPoint, IPoint) = default;
};

IPoint snap(Vec2 p) {
  if (!(std::abs(p.x) < kMaxCoordinate && std::abs(p.y) < kMaxCoordinate)) {
    throw GeometryError("curve coordinate out of range for exact simplicity test");
  }
  return {std::llround(p.x * kGrid), std::llround(p.y * kGrid)};
}

int orient(IPoint p, IPoint q, IPoint r) {
  const __int128 v = static_cast<__int128>(q.x - p.x) * (r.y - p.y) - static_cast<__int128>(q.y - p.y) * (r.x - p.x);
  return (v > 0) - (v < 0);
}

// r collinear with [p, q]; is it inside the closed box of the segment?
bool within(IPoint p, IPoint q, IPoint r) {
  return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
         r.y <= std::max(p.y, q.y);
}

bool segments_touch(IPoint p1, IPoint p2, IPoint q1, IPoint q2) {
  const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && within(p1, p2, q1)) return true;
  if (o2 == 0 && within(p1, p2, q2)) return true;
  if (o3 == 0 && within(q1, q2, p1)) return true;
  if (o4 == 0 && within(q1, q2, p2)) return true;
  return false;
}

double signed_angle(Vec2 from, Vec2 to) { return std::atan2(cross(from, to), dot(from, to)); }

double corner(Vec2 from, Vec2 to, const char* where) {
  const double ang = signed_angle(from, to);
  if (std::abs(ang) > kPi - 1e-9) {
    throw GeometryError(std::string("tangent anti-parallel to the chord at ") + where);
  }
  return ang;
}

bool in_open(double v, double lo, double hi) { return v > lo + tol::kClass && v < hi - tol::kClass; }
bool near(double v, double target) { return std::abs(v - target) <= tol::kClass; }

struct CurveFacts {
  double k_min = 0.0;
  double k_max = 0.0;
  TangentLift lift;
  bool increasing = true;
};

CurveFacts facts(const Curve& c, double hint) {
  CurveFacts f;
  const auto k = curvature_profile(c);
  f.k_min = *std::min_element(k.begin(), k.end());
  f.k_max = *std::max_element(k.begin(), k.end());
  f.lift = lift_tangent(c, hint);
  for (std::size_t i = 1; i < f.lift.theta.size(); ++i) {
    if (!(f.lift.theta[i] > f.lift.theta[i - 1])) f.increasing = false;
  }
  return f;
}

}  // namespace

const char* to_string(Branch b) { return b == Branch::Small ? "small" : "large"; }

const char* to_string(ClassKind k) {
  switch (k) {
    case ClassKind::Small: return "small";
    case ClassKind::Large: return "large";
    case ClassKind::Neither: return "neither";
  }
  return "?";
}

bool is_simple_closed(const Curve& c) {
  // Vertices of the closed polygon; the last edge is the chord back to the first sample.
  std::vector<IPoint> v;
  v.reserve(c.size());
  for (Vec2 p : c.points()) v.push_back(snap(p));
  const std::size_t m = v.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (v[i] == v[(i + 1) % m]) throw GeometryError("zero-length polyline segment at sample " + std::to_string(i));
  }

  auto edge = [&](std::size_t e) { return std::pair{v[e], v[(e + 1) % m]}; };
  auto adjacent = [m](std::size_t e, std::size_t f) { return (e + 1) % m == f || (f + 1) % m == e; };

  // Sweep over edges sorted by their left end; only x-overlapping edges are tested.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto xmin = [&](std::size_t e) { return std::min(v[e].x, v[(e + 1) % m].x); };
  auto xmax = [&](std::size_t e) { return std::max(v[e].x, v[(e + 1) % m].x); };
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return xmin(l) < xmin(r); });

  for (std::size_t oi = 0; oi < m; ++oi) {
    const std::size_t e = order[oi];
    const auto [p1, p2] = edge(e);
    for (std::size_t oj = oi + 1; oj < m && xmin(order[oj]) <= xmax(e); ++oj) {
      const std::size_t f = order[oj];
      const auto [q1, q2] = edge(f);
      if (std::max(std::min(p1.y, p2.y), std::min(q1.y, q2.y)) > std::min(std::max(p1.y, p2.y), std::max(q1.y, q2.y))) {
        continue;
      }
      if (adjacent(e, f)) {
        if (m == 2) continue;
        // Shared vertex is allowed; a collinear overlap beyond it is not.
        const bool e_first = (e + 1) % m == f;
        const IPoint shared = e_first ? p2 : p1;
        const IPoint far_e = e_first ? p1 : p2;
        const IPoint far_f = e_first ? q2 : q1;
        if (orient(far_e, shared, far_f) == 0 &&
            (within(p1, p2, far_f) || within(q1, q2, far_e))) {
          return false;
        }
        continue;
      }
      if (segments_touch(p1, p2, q1, q2)) return false;
    }
  }
  return true;
}

CornerAngles corner_angles(const Curve& c) {
  const Vec2 chord{1.0, 0.0};
  return {corner(chord, c.velocities().front(), "(a,0)"), corner(c.velocities().back(), chord, "(-a,0)")};
}

double rotation_angle(const Curve& c) {
  const TangentLift lift = lift_tangent(c, kPi / 2.0);
  const CornerAngles corners = corner_angles(c);
  return (lift.theta_end() - lift.theta0()) + corners.start + corners.end;
}

double gauss_bonnet_residual(const Curve& c) {
  const CornerAngles corners = corner_angles(c);
  std::vector<double> integrand(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) integrand[i] = geodesic_curvature(c, i) * norm(c.velocities()[i]);
  const double total_curvature = integrate(c.params(), integrand);
  return std::abs(2.0 * kPi - corners.start - corners.end - total_curvature);
}

ClassTag classify(const Curve& c) {
  ClassTag out;
  const TangentLift lift = lift_tangent(c, kPi / 2.0);
  const double th0 = lift.theta0(), th1 = lift.theta_end();

  bool boundary_ok = boundary_error(c) <= tol::boundary(c.a());
  if (!boundary_ok) out.reasons.emplace_back("endpoints differ from (a,0), (-a,0)");
  bool simple = false;
  try {
    simple = is_simple_closed(c);
  } catch (const GeometryError& e) {
    out.reasons.emplace_back(std::string("simplicity undecidable: ") + e.what());
  }
  if (!simple) out.reasons.emplace_back("curve + chord is not simple");

  const bool s0 = in_open(th0, kPi / 2.0, kPi);
  const bool s1 = in_open(th1, kPi, 1.5 * kPi);
  if (!s0) out.reasons.emplace_back("small: theta(0) not in (pi/2, pi)");
  if (!s1) out.reasons.emplace_back("small: theta(1) not in (pi, 3pi/2)");

  const bool l0 = in_open(th0, -kPi / 2.0, kPi);
  const bool l1 = in_open(th1, kPi, 2.5 * kPi);
  const bool lor = in_open(th0, -kPi / 2.0, kPi / 2.0) || in_open(th1, 1.5 * kPi, 2.5 * kPi);
  if (!l0) out.reasons.emplace_back("large: theta(0) not in (-pi/2, pi)");
  if (!l1) out.reasons.emplace_back("large: theta(1) not in (pi, 5pi/2)");
  if (!lor) out.reasons.emplace_back("large: neither theta(0) in (-pi/2, pi/2) nor theta(1) in (3pi/2, 5pi/2)");

  if (boundary_ok && simple && s0 && s1) {
    out.tag = ClassKind::Small;
  } else if (boundary_ok && simple && l0 && l1 && lor) {
    out.tag = ClassKind::Large;
  }
  return out;
}

LemmaCheck check_lemma_min_estimate(const Curve& c) {
  LemmaCheck r;
  const CurveFacts f = facts(c, 0.75 * kPi);
  r.value = f.k_min;
  const double a = c.a();
  if (!(f.k_min > 0.0)) r.reasons.emplace_back("curvature not positive");
  if (norm(c.front() - Vec2{a, 0.0}) > tol::boundary(a)) r.reasons.emplace_back("does not start at (a,0)");
  if (std::abs(c.back().x + a) > tol::boundary(a)) r.reasons.emplace_back("does not end on x = -a");
  if (!f.increasing) r.reasons.emplace_back("tangent angle not strictly increasing");
  const double th0 = f.lift.theta0(), th1 = f.lift.theta_end();
  if (!(th0 >= kPi / 2.0 - tol::kClass && th0 < kPi - tol::kClass)) r.reasons.emplace_back("theta(0) not in [pi/2, pi)");
  if (!(th1 > kPi + tol::kClass && th1 <= 1.5 * kPi + tol::kClass)) r.reasons.emplace_back("theta(end) not in (pi, 3pi/2]");
  r.applicable = r.reasons.empty();
  r.holds = f.k_min <= 1.0 / a + tol::kLemma;
  return r;
}

LemmaCheck check_lemma_max_estimate(const Curve& c) {
  LemmaCheck r;
  const CurveFacts f = facts(c, 0.75 * kPi);
  r.value = f.k_max;
  const double a = c.a();
  if (!(f.k_min > 0.0)) r.reasons.emplace_back("curvature not positive");
  if (norm(c.front() - Vec2{a, 0.0}) > tol::boundary(a)) r.reasons.emplace_back("does not start at (a,0)");
  if (std::abs(c.back().x + a) > tol::boundary(a)) r.reasons.emplace_back("does not end on x = -a");
  if (!f.increasing) r.reasons.emplace_back("tangent angle not strictly increasing");
  const double th0 = f.lift.theta0(), th1 = f.lift.theta_end();
  if (!near(th0, kPi / 2.0)) r.reasons.emplace_back("theta(0) != pi/2");
  const double b = c.back().y;
  if (b > tol::boundary(a)) {
    if (!near(th1, 1.5 * kPi)) r.reasons.emplace_back("b > 0 but theta(end) != 3pi/2");
  } else if (!(th1 > kPi + tol::kClass && th1 <= 1.5 * kPi + tol::kClass)) {
    r.reasons.emplace_back("b <= 0 but theta(end) not in (pi, 3pi/2]");
  }
  r.applicable = r.reasons.empty();
  r.holds = f.k_max >= 1.0 / a - tol::kLemma;
  return r;
}

LemmaCheck check_lemma_nonex(const Curve& c) {
  LemmaCheck r;
  const CurveFacts f = facts(c, 0.0);
  const double a = c.a();
  r.value = f.k_max / (f.k_max * a + 1.0);
  if (!(f.k_min > 0.0)) r.reasons.emplace_back("curvature not positive");
  if (boundary_error(c) > tol::boundary(a)) r.reasons.emplace_back("endpoints differ from (a,0), (-a,0)");
  if (!f.increasing) r.reasons.emplace_back("tangent angle not strictly increasing");
  const double th0 = f.lift.theta0(), th1 = f.lift.theta_end();
  if (!near(th0, -kPi / 2.0)) r.reasons.emplace_back("theta(0) != -pi/2");
  if (!(th1 > kPi + tol::kClass && th1 <= 2.5 * kPi + tol::kClass)) r.reasons.emplace_back("theta(end) not in (pi, 5pi/2]");
  if (r.reasons.empty()) {
    bool simple = false;
    try {
      simple = is_simple_closed(c);
    } catch (const GeometryError&) {
    }
    if (!simple) r.reasons.emplace_back("curve + chord is not simple");
  }
  r.applicable = r.reasons.empty();
  r.holds = f.k_min <= r.value + tol::kLemma;
  return r;
}

LengthCheck check_length_bound(const Curve& c, const FieldBounds& b) {
  LengthCheck r;
  r.length = arclength(c);
  r.bound = 3.0 * kPi / b.k_inf;
  r.holds = r.length <= r.bound + tol::kLemma;
  return r;
}

}  // namespace plateau
