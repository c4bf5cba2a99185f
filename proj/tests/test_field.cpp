#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "plateau/errors.hpp"
#include "plateau/field.hpp"

using namespace plateau;

TEST(Field, EvalMatchesExpression) {
  EXPECT_EQ(eval_field(parse_expr("0.5"), 1, 2, 0.3), 0.5);
  EXPECT_NEAR(eval_field(parse_expr("0.7+0.15*sin(pi*t)"), 0, 0, 1.0 / 6.0), 0.775, 1e-15);
}

TEST(Field, GradientExamples) {
  auto g = grad_field(parse_expr("0.5"), 0.3, 0.4, 0.5, 1e-5);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[1], 0.0);
  g = grad_field(parse_expr("0.7+0.1*x"), 2.0, -1.0, 0.1, 1e-5);
  EXPECT_NEAR(g[0], 0.1, 1e-9);
  EXPECT_NEAR(g[1], 0.0, 1e-9);
  g = grad_field(parse_expr("0.5*exp(-x^2)"), 1.0, 0.0, 0.0, default_gradient_step(1.0, 0.0));
  EXPECT_NEAR(g[0], -std::exp(-1.0), 1e-8);
  EXPECT_THROW(grad_field(parse_expr("x"), 0, 0, 0, 0.0), Error);
}

// Central differences of an affine field are exact up to roundoff of order
// eps |k| / h, so the fields here have curvature-sized values (|k| < 1).
TEST(Field, GradientOfAffineFieldsIsExact) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const double c0 = 0.5 * std::abs(u(rng)), cx = 0.1 * u(rng), cy = 0.1 * u(rng), ct = 0.1 * u(rng);
    char buf[200];
    std::snprintf(buf, sizeof buf, "%.17g + %.17g*x + %.17g*y + %.17g*t", c0, cx, cy, ct);
    const CurvatureExpr f = parse_expr(buf);
    for (double h : {1e-7, 1e-6, 1e-5, 1e-4}) {
      const auto g = grad_field(f, u(rng), u(rng), std::abs(u(rng)), h);
      EXPECT_NEAR(g[0], cx, 1e-9) << buf << " h=" << h;
      EXPECT_NEAR(g[1], cy, 1e-9) << buf << " h=" << h;
    }
  }
}

TEST(Field, EstimateBoundsExamples) {
  FieldBounds b = estimate_bounds(parse_expr("0.5"), Box{}, 5);
  EXPECT_EQ(b.k_inf, 0.5);
  EXPECT_EQ(b.k_sup, 0.5);
  EXPECT_EQ(b.provenance, FieldBounds::Provenance::Sampled);
  b = estimate_bounds(parse_expr("0.7+0.15*sin(pi*t)"), Box{-3, -3, 3, 3}, 3);
  EXPECT_NEAR(b.k_inf, 0.7, 1e-15);
  EXPECT_NEAR(b.k_sup, 0.85, 1e-15);
  b = estimate_bounds(parse_expr("0.7+0.1*x"), Box{-2, -1, 2, 1}, 2);
  EXPECT_NEAR(b.k_inf, 0.5, 1e-15);
  EXPECT_NEAR(b.k_sup, 0.9, 1e-15);
  EXPECT_THROW(estimate_bounds(parse_expr("1"), Box{}, 1), Error);
  EXPECT_THROW(estimate_bounds(parse_expr("1/x"), Box{-1, -1, 1, 1}, 3), EvalError);
}

TEST(Field, SampledBoundsContainEverySample) {
  const CurvatureExpr f = parse_expr("0.6+0.2*sin(3*x)*cos(2*y)+0.05*t");
  const Box box{-2, -1, 1, 3};
  const FieldBounds b = estimate_bounds(f, box, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j)
      for (int k = 0; k < 9; ++k) {
        const double v = f.eval(box.x0 + (box.x1 - box.x0) * i / 8.0, box.y0 + (box.y1 - box.y0) * j / 8.0, k / 8.0);
        EXPECT_GE(v, b.k_inf);
        EXPECT_LE(v, b.k_sup);
      }
}

TEST(Field, RefiningNestedLatticesNeverShrinksRange) {
  // n -> 2n - 1 keeps every old lattice point, so the sampled range can only grow.
  const CurvatureExpr f = parse_expr("0.6+0.2*sin(3*x)*cos(2*y)+0.05*t");
  FieldBounds prev = estimate_bounds(f, Box{}, 3);
  for (int n : {5, 9, 17, 33}) {
    const FieldBounds next = estimate_bounds(f, Box{}, n);
    EXPECT_LE(next.k_inf, prev.k_inf);
    EXPECT_GE(next.k_sup, prev.k_sup);
    prev = next;
  }
}

TEST(Field, PinchingExamples) {
  FieldBounds b{0.5, 0.5};
  PinchingReport p = check_pinching(b, 1.0);
  EXPECT_NEAR(p.ratio, 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(p.holds_basic);
  EXPECT_TRUE(p.holds_pinch);

  p = check_pinching(FieldBounds{0.55, 0.9}, 1.0);
  EXPECT_NEAR(p.ratio, 0.4736842, 1e-7);
  EXPECT_TRUE(p.holds_pinch);

  p = check_pinching(FieldBounds{0.35, 0.85}, 1.0);
  EXPECT_NEAR(p.ratio, 0.4594595, 1e-7);
  EXPECT_TRUE(p.holds_basic);
  EXPECT_FALSE(p.holds_pinch);

  EXPECT_FALSE(check_pinching(FieldBounds{1.2, 1.2}, 1.0).holds_basic);
  EXPECT_FALSE(check_pinching(FieldBounds{0.0, 0.5}, 1.0).holds_basic);
  EXPECT_THROW(check_pinching(b, 0.0), HypothesisError);
}

TEST(Field, HalfReciprocalConditionImpliesPinching) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const double a = 0.05 + 5.0 * u(rng);
    const double lo = (0.5 + 0.5 * u(rng)) / a;
    const double hi = lo + (1.0 / a - lo) * u(rng);
    if (!(0.5 / a < lo && hi < 1.0 / a && lo <= hi)) continue;
    ++checked;
    const PinchingReport p = check_pinching(FieldBounds{lo, hi}, a);
    EXPECT_TRUE(p.holds_basic);
    EXPECT_LT(p.ratio, 0.5 / a);
    EXPECT_TRUE(p.holds_pinch) << "a=" << a << " inf=" << lo << " sup=" << hi;
  }
  EXPECT_GT(checked, 4000);
}

TEST(Field, DeclaredBoundsConflict) {
  const FieldBounds sampled = estimate_bounds(parse_expr("0.75+0.1*tanh(x)"), Box{-12, -12, 12, 12}, 21);
  EXPECT_FALSE(bounds_conflict(FieldBounds{0.65, 0.85}, sampled));
  EXPECT_TRUE(bounds_conflict(FieldBounds{0.7, 0.8}, sampled));
}

TEST(Field, HomotopyBlend) {
  const CurvatureExpr k = parse_expr("0.7+0.15*sin(pi*t)");
  const HomotopyField h(k, 0.85, 0.25);
  EXPECT_NEAR(h.value(0, 0, 0.0), 0.75 * 0.85 + 0.25 * 0.7, 1e-15);
  EXPECT_EQ(h.at(0.0).value(4, 5, 0.3), 0.85);
  EXPECT_EQ(h.at(1.0).value(4, 5, 0.5), k.eval(4, 5, 0.5));
  const FieldBounds blended = h.blended_bounds(FieldBounds{0.7, 0.85});
  EXPECT_NEAR(blended.k_inf, 0.75 * 0.85 + 0.25 * 0.7, 1e-15);
  EXPECT_NEAR(blended.k_sup, 0.85, 1e-15);

  const HomotopyField g(parse_expr("0.75+0.1*x"), 0.85, 0.5);
  EXPECT_NEAR(g.gradient(0.2, 0.0, 0.0)[0], 0.05, 1e-9);
  EXPECT_EQ(g.at(0.0).gradient(0.2, 0.0, 0.0)[0], 0.0);
}

TEST(Field, PinchingPersistsAlongTheBlend) {
  const FieldBounds target{0.7, 0.85};
  ASSERT_TRUE(check_pinching(target, 1.0).holds_pinch);
  const HomotopyField h(parse_expr("0.7+0.15*sin(pi*t)"), 0.85);
  for (int i = 0; i <= 20; ++i) {
    EXPECT_TRUE(check_pinching(h.at(i / 20.0).blended_bounds(target), 1.0).holds_pinch);
  }
}
