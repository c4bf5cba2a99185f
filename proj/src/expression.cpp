#include "plateau/expression.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "plateau/errors.hpp"

namespace plateau {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_leaf(ExprNode::Kind kind, double number = 0.0) {
  auto node = std::make_shared<ExprNode>();
  node->kind = kind;
  node->number = number;
  return node;
}

NodePtr make_op(ExprNode::Kind kind, std::vector<NodePtr> args) {
  auto node = std::make_shared<ExprNode>();
  node->kind = kind;
  node->args = std::move(args);
  return node;
}

NodePtr make_call(ExprNode::Func func, NodePtr arg) {
  auto node = std::make_shared<ExprNode>();
  node->kind = ExprNode::Kind::Call;
  node->func = func;
  node->args.push_back(std::move(arg));
  return node;
}

struct FuncName {
  std::string_view name;
  ExprNode::Func func;
};

constexpr FuncName kFunctions[] = {
    {"sin", ExprNode::Func::Sin},   {"cos", ExprNode::Func::Cos}, {"exp", ExprNode::Func::Exp},
    {"sqrt", ExprNode::Func::Sqrt}, {"abs", ExprNode::Func::Abs}, {"tanh", ExprNode::Func::Tanh},
};

std::string_view func_name(ExprNode::Func func) {
  for (const auto& f : kFunctions) {
    if (f.func == func) return f.name;
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    NodePtr node = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return node;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == src_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_op(ExprNode::Kind::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make_op(ExprNode::Kind::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_op(ExprNode::Kind::Mul, {lhs, factor()});
      } else if (accept('/')) {
        lhs = make_op(ExprNode::Kind::Div, {lhs, factor()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() { return unary(); }

  // Minus binds looser than ^, so -x^2 = -(x^2), while 2^-1 still parses.
  NodePtr unary() {
    if (accept('-')) return make_op(ExprNode::Kind::Neg, {unary()});
    return power();
  }

  // Right-associative: a^b^c = a^(b^c).
  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make_op(ExprNode::Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw ParseError("malformed exponent", pos_);
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return make_leaf(ExprNode::Kind::Number, value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    skip_ws();
    const bool called = pos_ < src_.size() && src_[pos_] == '(';

    for (const auto& f : kFunctions) {
      if (f.name != name) continue;
      if (!called) throw ParseError("function '" + std::string(name) + "' requires an argument list", pos_);
      ++pos_;
      std::vector<NodePtr> args;
      if (!accept(')')) {
        args.push_back(expr());
        while (accept(',')) args.push_back(expr());
        expect(')');
      }
      if (args.size() != 1) {
        throw ParseError("function '" + std::string(name) + "' takes 1 argument, got " + std::to_string(args.size()),
                         start);
      }
      return make_call(f.func, std::move(args.front()));
    }

    ExprNode::Kind kind;
    if (name == "x") {
      kind = ExprNode::Kind::VarX;
    } else if (name == "y") {
      kind = ExprNode::Kind::VarY;
    } else if (name == "t") {
      kind = ExprNode::Kind::VarT;
    } else if (name == "pi") {
      kind = ExprNode::Kind::Pi;
    } else {
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    if (called) throw ParseError("'" + std::string(name) + "' is not a function", start);
    return make_leaf(kind);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void unparse_into(const ExprNode& n, std::ostringstream& out) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::Number: out << format_number(n.number); return;
    case K::VarX: out << 'x'; return;
    case K::VarY: out << 'y'; return;
    case K::VarT: out << 't'; return;
    case K::Pi: out << "pi"; return;
    case K::Neg:
      out << "(-";
      unparse_into(*n.args[0], out);
      out << ')';
      return;
    case K::Call:
      out << func_name(n.func) << '(';
      unparse_into(*n.args[0], out);
      out << ')';
      return;
    default: break;
  }
  const char op = n.kind == K::Add ? '+' : n.kind == K::Sub ? '-' : n.kind == K::Mul ? '*' : n.kind == K::Div ? '/' : '^';
  out << '(';
  unparse_into(*n.args[0], out);
  out << op;
  unparse_into(*n.args[1], out);
  out << ')';
}

std::string describe(const ExprNode& n) {
  std::ostringstream out;
  unparse_into(n, out);
  return out.str();
}

[[noreturn]] void domain_error(const ExprNode& n, const char* what, double x, double y, double t) {
  std::ostringstream msg;
  msg << what << " in '" << describe(n) << "' at (x=" << x << ", y=" << y << ", t=" << t << ")";
  throw EvalError(msg.str());
}

double eval_node(const ExprNode& n, double x, double y, double t) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::Number: return n.number;
    case K::VarX: return x;
    case K::VarY: return y;
    case K::VarT: return t;
    case K::Pi: return std::numbers::pi;
    case K::Neg: return -eval_node(*n.args[0], x, y, t);
    case K::Add: return eval_node(*n.args[0], x, y, t) + eval_node(*n.args[1], x, y, t);
    case K::Sub: return eval_node(*n.args[0], x, y, t) - eval_node(*n.args[1], x, y, t);
    case K::Mul: return eval_node(*n.args[0], x, y, t) * eval_node(*n.args[1], x, y, t);
    case K::Div: {
      const double den = eval_node(*n.args[1], x, y, t);
      if (den == 0.0) domain_error(n, "division by zero", x, y, t);
      return eval_node(*n.args[0], x, y, t) / den;
    }
    case K::Pow: {
      const double r = std::pow(eval_node(*n.args[0], x, y, t), eval_node(*n.args[1], x, y, t));
      if (!std::isfinite(r)) domain_error(n, "invalid power", x, y, t);
      return r;
    }
    case K::Call: {
      const double arg = eval_node(*n.args[0], x, y, t);
      switch (n.func) {
        case ExprNode::Func::Sin: return std::sin(arg);
        case ExprNode::Func::Cos: return std::cos(arg);
        case ExprNode::Func::Exp: {
          const double r = std::exp(arg);
          if (!std::isfinite(r)) domain_error(n, "overflow", x, y, t);
          return r;
        }
        case ExprNode::Func::Sqrt:
          if (arg < 0.0) domain_error(n, "square root of a negative number", x, y, t);
          return std::sqrt(arg);
        case ExprNode::Func::Abs: return std::abs(arg);
        case ExprNode::Func::Tanh: return std::tanh(arg);
      }
    }
  }
  domain_error(n, "corrupt expression node", x, y, t);
}

bool mentions_variable(const ExprNode& n) {
  using K = ExprNode::Kind;
  if (n.kind == K::VarX || n.kind == K::VarY || n.kind == K::VarT) return true;
  for (const auto& arg : n.args) {
    if (mentions_variable(*arg)) return true;
  }
  return false;
}

}  // namespace

bool operator==(const ExprNode& lhs, const ExprNode& rhs) {
  if (lhs.kind != rhs.kind || lhs.args.size() != rhs.args.size()) return false;
  if (lhs.kind == ExprNode::Kind::Number && lhs.number != rhs.number) return false;
  if (lhs.kind == ExprNode::Kind::Call && lhs.func != rhs.func) return false;
  for (std::size_t i = 0; i < lhs.args.size(); ++i) {
    if (!(*lhs.args[i] == *rhs.args[i])) return false;
  }
  return true;
}

CurvatureExpr::CurvatureExpr(std::string source, std::shared_ptr<const ExprNode> root)
    : source_(std::move(source)), root_(std::move(root)) {}

double CurvatureExpr::eval(double x, double y, double t) const {
  const double v = eval_node(*root_, x, y, t);
  if (!std::isfinite(v)) domain_error(*root_, "non-finite value", x, y, t);
  return v;
}

std::string CurvatureExpr::unparse() const { return describe(*root_); }

bool CurvatureExpr::is_constant() const { return !mentions_variable(*root_); }

CurvatureExpr parse_expr(std::string_view source) {
  Parser parser(source);
  return CurvatureExpr(std::string(source), parser.parse());
}

}  // namespace plateau
