#pragma once

#include <string>
#include <vector>

#include "plateau/curve.hpp"
#include "plateau/field.hpp"

namespace plateau {

enum class Branch { Small, Large };
enum class ClassKind { Small, Large, Neither };

const char* to_string(Branch b);
const char* to_string(ClassKind k);
inline ClassKind as_class(Branch b) { return b == Branch::Small ? ClassKind::Small : ClassKind::Large; }

struct ClassTag {
  ClassKind tag = ClassKind::Neither;
  std::vector<std::string> reasons;  // every failed clause, for both sets
};

/// Simplicity of the closed polyline samples + chord back to the first sample.
/// Coordinates are snapped to a 2^-40 grid and tested with exact integer
/// orientation predicates. Throws GeometryError on a zero-length segment.
bool is_simple_closed(const Curve& c);

/// Signed angle from incoming to outgoing direction at the corners (a,0) and
/// (-a,0) of the closed curve, each in (-pi, pi).
struct CornerAngles {
  double start = 0.0;  // chord -> gamma'(0)
  double end = 0.0;    // gamma'(1) -> chord
};
CornerAngles corner_angles(const Curve& c);

/// Total turning of gamma + chord; 2pi for a simple positively oriented curve.
double rotation_angle(const Curve& c);

/// |2pi - alpha_1 - alpha_2 - integral of k ds|.
double gauss_bonnet_residual(const Curve& c);

/// Membership in the small / large solution sets (open intervals shrunk by tol::kClass).
ClassTag classify(const Curve& c);

struct LemmaCheck {
  bool applicable = false;
  bool holds = false;
  double value = 0.0;  // min k, max k, or the nonexistence bound respectively
  std::vector<std::string> reasons;  // why not applicable
};

/// min k <= 1/a for positive-curvature curves from (a,0) to (-a,b) with
/// theta(0) in [pi/2, pi) and theta(end) in (pi, 3pi/2].
LemmaCheck check_lemma_min_estimate(const Curve& c);

/// max k >= 1/a for positive-curvature curves with theta(0) = pi/2 ending at (-a,b).
LemmaCheck check_lemma_max_estimate(const Curve& c);

/// k_min <= k_max / (k_max a + 1) for simple positive-curvature curves with
/// theta(0) = -pi/2 and theta(end) in (pi, 5pi/2].
LemmaCheck check_lemma_nonex(const Curve& c);

struct LengthCheck {
  bool holds = false;
  double length = 0.0;
  double bound = 0.0;  // 3pi / k_inf
};
LengthCheck check_length_bound(const Curve& c, const FieldBounds& b);

}  // namespace plateau
