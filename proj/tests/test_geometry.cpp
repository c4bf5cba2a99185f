#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "plateau/analytic_arc.hpp"
#include "plateau/errors.hpp"
#include "plateau/geometry.hpp"
#include "test_curves.hpp"

using namespace plateau;
using namespace plateau::testing;

namespace {

constexpr double kPi = std::numbers::pi;

Curve small_arc(double k0 = 0.5, int n = 512) { return sample_arc(make_arc(Branch::Small, 1.0, k0), n); }
Curve large_arc(double k0 = 0.5, int n = 512) { return sample_arc(make_arc(Branch::Large, 1.0, k0), n); }

}  // namespace

TEST(Curve, ConstructorValidates) {
  const std::vector<double> t{0, 0.25, 0.5, 0.75, 1};
  const std::vector<Vec2> x(5, Vec2{0, 0}), v(5, Vec2{1, 0});
  EXPECT_NO_THROW(Curve(1.0, t, x, v));
  EXPECT_THROW(Curve(0.0, t, x, v), GeometryError);
  EXPECT_THROW(Curve(1.0, {0, 0.5, 0.4, 0.75, 1}, x, v), GeometryError);
  EXPECT_THROW(Curve(1.0, {0, 0.25, 0.5, 1}, {x.begin(), x.begin() + 4}, {v.begin(), v.begin() + 4}), GeometryError);
  EXPECT_THROW(Curve(1.0, t, x, std::vector<Vec2>(5, Vec2{0, 0})), GeometryError);
  EXPECT_THROW(Curve(1.0, t, x, std::vector<Vec2>(4, Vec2{1, 0})), GeometryError);
}

TEST(Curve, GeodesicCurvatureSignConvention) {
  const Curve ccw = circle_arc(1.0, {0, 0}, 1.0, 0.0, 2 * kPi, 64, false);
  const Curve cw = circle_arc(1.0, {0, 0}, 2.0, 0.0, -2 * kPi, 64);
  const Curve ccw_exact = circle_arc(1.0, {0, 0}, 1.0, 0.0, 2 * kPi, 64);
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    EXPECT_NEAR(geodesic_curvature(ccw, i), 1.0, 1e-6) << i;
    EXPECT_NEAR(geodesic_curvature(cw, i), -0.5, 1e-12);
    EXPECT_EQ(geodesic_curvature(ccw_exact.reflected(), i), -geodesic_curvature(ccw_exact, i));
  }
  const Curve seg = chord_segment(1.0, 20);
  for (std::size_t i = 0; i < seg.size(); ++i) EXPECT_EQ(geodesic_curvature(seg, i), 0.0);
}

TEST(Curve, FiniteDifferenceAccelerationIsFourthOrder) {
  double prev = 0.0;
  for (int n : {33, 65, 129}) {
    const Curve c = circle_arc(1.0, {0, 0}, 1.0, 0.3, 3.0, n, false);
    double err = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) err = std::max(err, std::abs(geodesic_curvature(c, i) - 1.0));
    if (prev > 0.0) EXPECT_GT(prev / err, 10.0);
    prev = err;
  }
}

TEST(Curve, LiftExamples) {
  TangentLift s = lift_tangent(small_arc(), kPi / 2);
  EXPECT_NEAR(s.theta0(), 5 * kPi / 6, 1e-12);
  EXPECT_NEAR(s.theta_end(), 7 * kPi / 6, 1e-12);
  TangentLift l = lift_tangent(large_arc(), kPi / 2);
  EXPECT_NEAR(l.theta0(), kPi / 6, 1e-12);
  EXPECT_NEAR(l.theta_end(), 11 * kPi / 6, 1e-12);
  TangentLift seg = lift_tangent(chord_segment(1.0, 10), kPi / 2);
  for (double th : seg.theta) EXPECT_NEAR(th, kPi, 1e-15);
}

TEST(Curve, LiftReconstructsTangentsAndIncreases) {
  const Curve c = large_arc(0.3, 300);
  const TangentLift lift = lift_tangent(c, kPi / 2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec2 u = (1.0 / norm(c.velocities()[i])) * c.velocities()[i];
    EXPECT_LT(norm(unit(lift.theta[i]) - u), tol::kAngle);
    if (i > 0) {
      EXPECT_GT(lift.theta[i], lift.theta[i - 1]);
      EXPECT_LT(std::abs(lift.theta[i] - lift.theta[i - 1]), kPi);
    }
  }
  EXPECT_LE(graph_break_count(lift), 2);
  EXPECT_LE(max_turn_per_segment(lift), 0.1);
}

TEST(Curve, UndersampledCurveIsRejected) {
  // Consecutive tangents turn by exactly pi.
  EXPECT_THROW(lift_tangent(circle_arc(1.0, {0, 0}, 1.0, 0.0, 4 * kPi, 5), 0.0), GeometryError);
}

TEST(Curve, GraphBreaksOnAnalyticArcs) {
  for (double k0 : {0.1, 0.5, 0.9}) {
    EXPECT_EQ(graph_break_count(lift_tangent(small_arc(k0), kPi / 2)), 0);
    EXPECT_EQ(graph_break_count(lift_tangent(large_arc(k0), kPi / 2)), 2);
  }
}

TEST(Curve, IntegrationRules) {
  std::vector<double> t(101), f(101);
  for (int i = 0; i <= 100; ++i) {
    t[i] = i / 100.0;
    f[i] = t[i] * t[i] * t[i];
  }
  EXPECT_NEAR(integrate(t, f), 0.25, 1e-14);  // Simpson exact on cubics, also with the 3/8 tail
  t.resize(100);
  f.resize(100);
  for (int i = 0; i < 100; ++i) {
    t[i] = i / 99.0;
    f[i] = t[i] * t[i] * t[i];
  }
  EXPECT_NEAR(integrate(t, f), 0.25, 1e-14);
  EXPECT_NEAR(arclength(small_arc()), 2 * kPi / 3, 1e-12);
}

TEST(Curve, BoundaryAndSpeed) {
  EXPECT_LT(boundary_error(small_arc()), 1e-15);
  EXPECT_LT(speed_variation(small_arc()), 1e-12);
  EXPECT_GT(boundary_error(circle_arc(1.0, {0, 0}, 1.0, 0.0, kPi / 2, 20)), 0.5);
}

TEST(Geometry, SimplicityExamples) {
  EXPECT_TRUE(is_simple_closed(small_arc()));
  EXPECT_TRUE(is_simple_closed(large_arc()));
  EXPECT_TRUE(all_pairs_simple(large_arc()));
  // Crosses the x-axis at x = +-1/2, inside the chord.
  const Curve eight = sample_curve(
      1.0, 200, [](double t) { return Vec2{std::cos(kPi * t), 0.5 * std::sin(3 * kPi * t)}; },
      [](double t) { return Vec2{-kPi * std::sin(kPi * t), 1.5 * kPi * std::cos(3 * kPi * t)}; },
      [](double t) { return Vec2{-kPi * kPi * std::cos(kPi * t), -4.5 * kPi * kPi * std::sin(3 * kPi * t)}; });
  EXPECT_FALSE(is_simple_closed(eight));
  EXPECT_FALSE(all_pairs_simple(eight));
  // More than a full turn of a circle overlaps itself.
  const Curve wound = circle_arc(1.0, {0, 2}, 1.0, 0.0, 3.5 * kPi, 400);
  EXPECT_FALSE(is_simple_closed(wound));
  EXPECT_FALSE(all_pairs_simple(wound));
}

TEST(Geometry, ZeroLengthSegmentIsAnError) {
  std::vector<double> t{0, 0.25, 0.5, 0.75, 1};
  std::vector<Vec2> x{{1, 0}, {0, 1}, {0, 1}, {-0.5, 0.5}, {-1, 0}};
  std::vector<Vec2> v(5, Vec2{-1, 0});
  EXPECT_THROW(is_simple_closed(Curve(1.0, t, x, v)), GeometryError);
}

TEST(Geometry, SimplicityAgreesWithAllPairsOracle) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> amp(0.02, 0.5);
  int simple = 0, not_simple = 0;
  for (int trial = 0; trial < 300; ++trial) {
    double cx[5], cy[5];
    const double sigma = amp(rng);
    for (int m = 0; m < 5; ++m) {
      cx[m] = sigma * g(rng) / (m + 1);
      cy[m] = sigma * g(rng) / (m + 1);
    }
    const double h = 0.2 + std::abs(g(rng));
    auto p = [&](double t) {
      Vec2 r{std::cos(kPi * t), h * std::sin(kPi * t)};
      for (int m = 0; m < 5; ++m) r += std::sin((m + 2) * kPi * t) * Vec2{cx[m], cy[m]};
      return r;
    };
    auto dp = [&](double t) {
      Vec2 r{-kPi * std::sin(kPi * t), h * kPi * std::cos(kPi * t)};
      for (int m = 0; m < 5; ++m) r += ((m + 2) * kPi * std::cos((m + 2) * kPi * t)) * Vec2{cx[m], cy[m]};
      return r;
    };
    std::vector<double> t(150);
    std::vector<Vec2> x(150), v(150);
    bool immersed = true;
    for (int i = 0; i < 150; ++i) {
      t[i] = i / 149.0;
      x[i] = p(t[i]);
      v[i] = dp(t[i]);
      immersed = immersed && norm(v[i]) > 1e-9;
    }
    if (!immersed) continue;
    const Curve c(1.0, t, x, v);
    const bool expected = all_pairs_simple(c);
    EXPECT_EQ(is_simple_closed(c), expected) << "trial " << trial;
    (expected ? simple : not_simple)++;
  }
  EXPECT_GT(simple, 20);
  EXPECT_GT(not_simple, 20);
}

TEST(Geometry, RotationAngleExamples) {
  const CornerAngles s = corner_angles(small_arc());
  EXPECT_NEAR(s.start, 5 * kPi / 6, 1e-12);
  EXPECT_NEAR(s.end, 5 * kPi / 6, 1e-12);
  EXPECT_NEAR(rotation_angle(small_arc()), 2 * kPi, 1e-12);
  const CornerAngles l = corner_angles(large_arc());
  EXPECT_NEAR(l.start, kPi / 6, 1e-12);
  EXPECT_NEAR(l.end, kPi / 6, 1e-12);
  EXPECT_NEAR(rotation_angle(large_arc()), 2 * kPi, 1e-12);
  EXPECT_THROW(rotation_angle(chord_segment(1.0, 10)), GeometryError);
}

TEST(Geometry, RotationAngleOfSimpleCurvesIsTwoPi) {
  for (double k0 = 0.1; k0 < 0.95; k0 += 0.1) {
    for (const Curve& c : {small_arc(k0), large_arc(k0)}) {
      ASSERT_TRUE(is_simple_closed(c));
      EXPECT_NEAR(rotation_angle(c), 2 * kPi, tol::kRotation);
    }
  }
}

TEST(Geometry, GaussBonnet) {
  EXPECT_LT(gauss_bonnet_residual(small_arc()), 1e-10);
  EXPECT_LT(gauss_bonnet_residual(large_arc()), 1e-10);
  // Same geometry but the stored accelerations claim curvature 0.6: the identity breaks.
  const AnalyticArc arc = make_arc(Branch::Small, 1.0, 0.5);
  const Curve good = sample_arc(arc, 256);
  std::vector<Vec2> acc(good.accelerations()->begin(), good.accelerations()->end());
  for (auto& q : acc) q = 1.2 * q;
  const Curve bad(1.0, {good.params().begin(), good.params().end()}, {good.points().begin(), good.points().end()},
                  {good.velocities().begin(), good.velocities().end()}, acc);
  EXPECT_NEAR(gauss_bonnet_residual(bad), 0.2 * (kPi / 3), 1e-9);
}

TEST(Geometry, ClassifyExamples) {
  EXPECT_EQ(classify(small_arc()).tag, ClassKind::Small);
  EXPECT_EQ(classify(large_arc()).tag, ClassKind::Large);
  const ClassTag seg = classify(chord_segment(1.0, 20));
  EXPECT_EQ(seg.tag, ClassKind::Neither);
  EXPECT_FALSE(seg.reasons.empty());
  const ClassTag refl = classify(small_arc().reflected());
  EXPECT_EQ(refl.tag, ClassKind::Neither);
  for (double k0 = 0.1; k0 < 0.95; k0 += 0.1) {
    EXPECT_EQ(classify(small_arc(k0)).tag, ClassKind::Small) << k0;
    EXPECT_EQ(classify(large_arc(k0)).tag, ClassKind::Large) << k0;
  }
}

TEST(Geometry, ClassificationMarginAtHalfCircle) {
  // k0 a -> 1: theta(0) -> pi/2, inside the margin for the small set.
  const Curve half = circle_arc(1.0, {0, 0}, 1.0, 0.0, kPi, 400);
  const ClassTag tag = classify(half);
  EXPECT_EQ(tag.tag, ClassKind::Neither);
}

TEST(Geometry, LemmaMinEstimate) {
  LemmaCheck r = check_lemma_min_estimate(small_arc());
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.value, 0.5, 1e-12);
  r = check_lemma_min_estimate(circle_arc(2.0, {0, 0}, 2.0, 0.0, kPi, 400));
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.value, 0.5, 1e-12);
  EXPECT_FALSE(check_lemma_min_estimate(large_arc()).applicable);
  EXPECT_FALSE(check_lemma_min_estimate(small_arc().reflected()).applicable);
}

TEST(Geometry, LemmaMaxEstimate) {
  const LemmaCheck r = check_lemma_max_estimate(circle_arc(1.5, {0, 0}, 1.5, 0.0, kPi, 400));
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.value, 1.0 / 1.5, 1e-12);
  EXPECT_FALSE(check_lemma_max_estimate(small_arc()).applicable);
}

TEST(Geometry, LemmaNonex) {
  EXPECT_FALSE(check_lemma_nonex(large_arc()).applicable);
  EXPECT_FALSE(check_lemma_nonex(small_arc()).applicable);
  // Heads straight down from (1,0), loops round to the right and over the top,
  // and comes down into (-1,0): simple, positive curvature, theta from -pi/2 to 3pi/2.
  const auto h = harmonic_arc(1.0, 0.0, 1.5, -kPi / 2, 1.5 * kPi);
  ASSERT_TRUE(h.has_value());
  const Curve loop = h->sample(800);
  ASSERT_TRUE(all_pairs_simple(loop));
  const LemmaCheck r = check_lemma_nonex(loop);
  EXPECT_TRUE(r.applicable) << (r.reasons.empty() ? "" : r.reasons.front());
  EXPECT_TRUE(r.holds);
  EXPECT_FALSE(check_lemma_nonex(loop.reflected()).applicable);
}

TEST(Geometry, LengthBound) {
  LengthCheck r = check_length_bound(small_arc(), FieldBounds{0.5, 0.5});
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.length, 2.0943951, 1e-7);
  EXPECT_NEAR(r.bound, 6 * kPi, 1e-12);
  r = check_length_bound(large_arc(), FieldBounds{0.5, 0.5});
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.length, 10.4719755, 1e-7);
  EXPECT_NEAR(check_length_bound(small_arc(), FieldBounds{0.55, 0.9}).bound, 17.13595993, 1e-8);  // 3 pi / 0.55
}
