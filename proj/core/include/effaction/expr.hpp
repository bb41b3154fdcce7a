#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "effaction/jet.hpp"

namespace effaction {

enum class ExprKind {
  number,
  variable,  // the single admitted variable "x"
  negate,
  add,
  sub,
  mul,
  div,
  pow,
  call
};

enum class FuncId { sin, cos, exp, log, sqrt, tanh, sinh, cosh };

const char* func_name(FuncId f);

struct ExprNode {
  ExprKind kind;
  double number = 0.0;           // for ExprKind::number
  FuncId func = FuncId::sin;     // for ExprKind::call
  std::shared_ptr<const ExprNode> lhs;  // unary operand / left operand
  std::shared_ptr<const ExprNode> rhs;  // right operand of binary ops
};

/// An immutable parsed expression of the single variable x.
///
/// Copies share the underlying tree; evaluation is pure and safe to run
/// from any number of threads at once.
class Expression {
 public:
  Expression() = default;

  /// Parses under the usual precedence: ^ binds tightest and associates to
  /// the right, then unary minus, then * and /, then + and -.  Whitespace
  /// is insignificant.  Throws ParseError with the offending 0-based
  /// character position.
  static Expression parse(std::string_view text);

  bool empty() const { return root_ == nullptr; }

  /// Plain value at x.  Throws DomainEvalError outside the domain.
  double operator()(double x) const;

  /// Value and first four derivatives at x.  sqrt/log arguments must be
  /// strictly positive here (the derivatives are singular at the edge).
  Jet4 jet(double x) const;

  /// Deterministic text form that reparses to an identical tree.
  std::string str() const;

  /// Dense coefficient view (lowest power first) when the expression is a
  /// polynomial in x; detected once at parse time.  Constant subtrees such
  /// as sin(1) count as coefficients.
  const std::vector<double>* polynomial() const {
    return poly_ ? &*poly_ : nullptr;
  }
  bool is_polynomial() const { return poly_.has_value(); }

  const ExprNode* root() const { return root_.get(); }

 private:
  explicit Expression(std::shared_ptr<const ExprNode> root);

  std::shared_ptr<const ExprNode> root_;
  std::optional<std::vector<double>> poly_;
};

/// Structural equality of parse trees (numbers compared bitwise-exactly).
bool tree_equal(const ExprNode* a, const ExprNode* b);

}  // namespace effaction
