#include "qconv/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qconv {

namespace {
ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
}  // namespace

ExprPtr e_const(complexd v) { return make({Expr::Const, v, nullptr, nullptr, 1}); }
ExprPtr e_t() { return make({Expr::Var, {}, nullptr, nullptr, 1}); }
ExprPtr e_add(ExprPtr a, ExprPtr b) { return make({Expr::Add, {}, std::move(a), std::move(b), 1}); }
ExprPtr e_sub(ExprPtr a, ExprPtr b) {
  return e_add(std::move(a), e_mul(e_const(-1.0), std::move(b)));
}
ExprPtr e_mul(ExprPtr a, ExprPtr b) { return make({Expr::Mul, {}, std::move(a), std::move(b), 1}); }
ExprPtr e_div(ExprPtr a, ExprPtr b) { return make({Expr::Div, {}, std::move(a), std::move(b), 1}); }
ExprPtr e_exp(ExprPtr a) { return make({Expr::ExpOp, {}, std::move(a), nullptr, 1}); }
ExprPtr e_log(ExprPtr a) { return make({Expr::LogOp, {}, std::move(a), nullptr, 1}); }
ExprPtr e_pow(ExprPtr a, int n) { return make({Expr::Pow, {}, std::move(a), nullptr, n}); }

complexd eval(const ExprPtr& e, double t) {
  switch (e->kind) {
    case Expr::Const:
      return e->value;
    case Expr::Var:
      return {t, 0};
    case Expr::Add:
      return eval(e->lhs, t) + eval(e->rhs, t);
    case Expr::Mul:
      return eval(e->lhs, t) * eval(e->rhs, t);
    case Expr::Div: {
      complexd d = eval(e->rhs, t);
      if (d == complexd{}) throw EvalDomain("eval: division by zero");
      return eval(e->lhs, t) / d;
    }
    case Expr::ExpOp:
      return std::exp(eval(e->lhs, t));
    case Expr::LogOp: {
      complexd v = eval(e->lhs, t);
      if (v == complexd{} || (v.imag() == 0 && v.real() < 0))
        throw EvalDomain("eval: log of zero or negative real");
      return std::log(v);
    }
    case Expr::Pow: {
      complexd b = eval(e->lhs, t);
      int n = e->ipow;
      if (n < 0) {
        if (b == complexd{}) throw EvalDomain("eval: negative power of zero");
        b = 1.0 / b;
        n = -n;
      }
      complexd r = 1.0;
      for (int i = 0; i < n; ++i) r *= b;
      return r;
    }
  }
  throw Error("eval: bad expression node");
}

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ScenarioParseError("expression parse error at position " +
                             std::to_string(pos) + ": " + what);
  }

  ExprPtr sum() {
    skip();
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    ExprPtr acc = product();
    if (neg) acc = e_mul(e_const(-1.0), acc);
    for (;;) {
      skip();
      if (eat('+')) acc = e_add(acc, product());
      else if (eat('-')) acc = e_sub(acc, product());
      else return acc;
    }
  }

  ExprPtr product() {
    ExprPtr acc = power();
    for (;;) {
      skip();
      if (eat('*')) acc = e_mul(acc, power());
      else if (eat('/')) acc = e_div(acc, power());
      else return acc;
    }
  }

  ExprPtr power() {
    ExprPtr base = atom();
    skip();
    if (eat('^')) {
      skip();
      bool neg = eat('-');
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) fail("integer exponent expected");
      int n = std::stoi(s.substr(start, pos - start));
      return e_pow(base, neg ? -n : n);
    }
    return base;
  }

  ExprPtr atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      ExprPtr inner = sum();
      if (!eat(')')) fail("')' expected");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos;
      while (pos < s.size() &&
             (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
              s[pos] == 'e' || s[pos] == 'E' ||
              ((s[pos] == '+' || s[pos] == '-') && pos > start &&
               (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
        ++pos;
      double v;
      try {
        v = std::stod(s.substr(start, pos - start));
      } catch (const std::exception&) {
        fail("bad number");
      }
      if (pos < s.size() && s[pos] == 'i') {
        ++pos;
        return e_const(complexd(0, v));
      }
      return e_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
      std::string name = s.substr(start, pos - start);
      if (name == "t") return e_t();
      if (name == "i") return e_const(complexd(0, 1));
      if (name == "pi") return e_const(std::numbers::pi);
      if (name == "exp" || name == "log") {
        if (!eat('(')) fail("'(' expected after " + name);
        ExprPtr inner = sum();
        if (!eat(')')) fail("')' expected");
        return name == "exp" ? e_exp(inner) : e_log(inner);
      }
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

void print(std::ostringstream& out, const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Const: {
      complexd v = e->value;
      if (v.imag() == 0) {
        out << v.real();
      } else if (v.real() == 0) {
        out << v.imag() << "i";
      } else {
        out << "(" << v.real() << (v.imag() >= 0 ? "+" : "-")
            << std::abs(v.imag()) << "i)";
      }
      break;
    }
    case Expr::Var:
      out << "t";
      break;
    case Expr::Add:
      out << "(";
      print(out, e->lhs);
      out << "+";
      print(out, e->rhs);
      out << ")";
      break;
    case Expr::Mul:
      out << "(";
      print(out, e->lhs);
      out << "*";
      print(out, e->rhs);
      out << ")";
      break;
    case Expr::Div:
      out << "(";
      print(out, e->lhs);
      out << "/";
      print(out, e->rhs);
      out << ")";
      break;
    case Expr::ExpOp:
      out << "exp(";
      print(out, e->lhs);
      out << ")";
      break;
    case Expr::LogOp:
      out << "log(";
      print(out, e->lhs);
      out << ")";
      break;
    case Expr::Pow:
      print(out, e->lhs);
      out << "^" << e->ipow;
      break;
  }
}

}  // namespace

ExprPtr parse_expr(const std::string& text) {
  Parser p(text);
  ExprPtr e = p.sum();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return e;
}

std::string to_string(const ExprPtr& e) {
  std::ostringstream out;
  out.precision(17);
  print(out, e);
  return out.str();
}

}  // namespace qconv
