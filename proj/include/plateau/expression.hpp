#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace plateau {

/// Node of a parsed curvature expression. Trees are immutable and shared.
struct ExprNode {
  enum class Kind { Number, VarX, VarY, VarT, Pi, Neg, Add, Sub, Mul, Div, Pow, Call };
  enum class Func { Sin, Cos, Exp, Sqrt, Abs, Tanh };

  Kind kind = Kind::Number;
  double number = 0.0;
  Func func = Func::Sin;
  std::vector<std::shared_ptr<const ExprNode>> args;
};

bool operator==(const ExprNode& lhs, const ExprNode& rhs);

/// A prescribed curvature k(x, y, t) given as text in the small arithmetic grammar
///
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := unary
///   unary  := "-" unary | power
///   power  := atom ("^" unary)?
///   atom   := number | x | y | t | pi | func "(" expr ")" | "(" expr ")"
///   func   := sin | cos | exp | sqrt | abs | tanh
///
/// Evaluation is a pure function of (x, y, t), so instances can be shared freely
/// between threads. Unary minus binds looser than "^": -x^2 means -(x^2).
class CurvatureExpr {
 public:
  CurvatureExpr(std::string source, std::shared_ptr<const ExprNode> root);

  const std::string& source() const { return source_; }
  const ExprNode& root() const { return *root_; }

  /// Throws EvalError on a domain failure.
  double eval(double x, double y, double t) const;

  /// Canonical fully parenthesised text; reparsing it yields an identical tree.
  std::string unparse() const;

  /// True if the tree mentions none of x, y, t.
  bool is_constant() const;

 private:
  std::string source_;
  std::shared_ptr<const ExprNode> root_;
};

/// Throws ParseError with the offending character offset.
CurvatureExpr parse_expr(std::string_view source);

}  // namespace plateau
