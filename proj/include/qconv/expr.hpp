#pragma once

#include <memory>
#include <string>

#include "qconv/errors.hpp"
#include "qconv/germ.hpp"

namespace qconv {

/// Closed-form expression in the variable t over {constant, t, +, *, /, exp,
/// log, integer power}. Immutable; shared subtrees are fine.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum Kind { Const, Var, Add, Mul, Div, ExpOp, LogOp, Pow };
  Kind kind = Const;
  complexd value{};    // Const
  ExprPtr lhs, rhs;    // binary ops; unary ops use lhs
  int ipow = 1;        // Pow
};

ExprPtr e_const(complexd v);
ExprPtr e_t();
ExprPtr e_add(ExprPtr a, ExprPtr b);
ExprPtr e_sub(ExprPtr a, ExprPtr b);
ExprPtr e_mul(ExprPtr a, ExprPtr b);
ExprPtr e_div(ExprPtr a, ExprPtr b);
ExprPtr e_exp(ExprPtr a);
ExprPtr e_log(ExprPtr a);
ExprPtr e_pow(ExprPtr a, int n);

/// Throws EvalDomain on division by zero or log of zero / negative real.
complexd eval(const ExprPtr& e, double t);

/// Grammar: sum of products; atoms are numbers (with optional trailing i),
/// "t", "pi", "exp(...)", "log(...)", parenthesized subexpressions; "^" takes
/// an integer literal exponent. Throws ScenarioParseError.
ExprPtr parse_expr(const std::string& text);

std::string to_string(const ExprPtr& e);

}  // namespace qconv
