#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "qconv/errors.hpp"

namespace qconv {

using complexd = std::complex<double>;

inline constexpr double kSymbolicTol = 1e-9;
inline constexpr double kFittedTol = 1e-6;

/// Asymptotic class alpha*t + beta*log(t) + gamma + o(1) of a complex-valued
/// function of t as t -> infinity.
struct Germ {
  complexd alpha{};  // coefficient of t
  complexd beta{};   // coefficient of log t
  complexd gamma{};  // constant term
  // Max held-out residual of the fit that produced this germ; 0 for germs of
  // analytic origin. Propagated through arithmetic.
  double residual = 0.0;

  Germ() = default;
  Germ(complexd a, complexd b, complexd c, double res = 0.0)
      : alpha(a), beta(b), gamma(c), residual(res) {}

  Germ operator+(const Germ& o) const {
    return {alpha + o.alpha, beta + o.beta, gamma + o.gamma, residual + o.residual};
  }
  Germ operator-(const Germ& o) const {
    return {alpha - o.alpha, beta - o.beta, gamma - o.gamma, residual + o.residual};
  }
  Germ operator-() const { return {-alpha, -beta, -gamma, residual}; }
  Germ operator*(complexd z) const { return {alpha * z, beta * z, gamma * z, residual * std::abs(z)}; }

  bool operator==(const Germ& o) const {
    return alpha == o.alpha && beta == o.beta && gamma == o.gamma;
  }
};

Germ germ_sub(const Germ& g1, const Germ& g2);

/// Value of the representative alpha*t + beta*log(t) + gamma at finite t.
complexd evaluate(const Germ& g, double t);

bool is_finite(const Germ& g);

/// Real or imaginary part of a Germ: a*t + b*log(t) + c.
struct RealGerm {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  RealGerm() = default;
  RealGerm(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {}

  RealGerm operator+(const RealGerm& o) const { return {a + o.a, b + o.b, c + o.c}; }
  RealGerm operator-(const RealGerm& o) const { return {a - o.a, b - o.b, c - o.c}; }
  RealGerm operator-() const { return {-a, -b, -c}; }
  RealGerm operator*(double s) const { return {a * s, b * s, c * s}; }
};

RealGerm real_part(const Germ& g);
RealGerm imag_part(const Germ& g);

double evaluate(const RealGerm& rg, double t);

/// Strict lexicographic comparison on (a, b, c) with per-component snapping:
/// returns -1, 0, +1. Components whose difference is within tol are treated
/// as equal.
int lex_compare(const RealGerm& x, const RealGerm& y, double tol = kSymbolicTol);

struct GermClassification {
  enum Kind { Converges, DivergesAlongRay, Inconclusive } kind = Converges;
  // limit value for Converges, unit direction for DivergesAlongRay.
  complexd value{};

  bool converges() const { return kind == Converges; }
  bool diverges() const { return kind == DivergesAlongRay; }
};

/// Classify the t->infinity behavior of the function underlying g. Components
/// within tol of zero are snapped to zero first. A fitted germ whose residual
/// exceeds residual_tol is Inconclusive.
GermClassification classify(const Germ& g, double tol = kSymbolicTol,
                            double residual_tol = kFittedTol);

struct RealGermSign {
  enum Kind { ToPlusInfinity, ToMinusInfinity, ConvergesTo } kind = ConvergesTo;
  double value = 0.0;  // limit, present iff ConvergesTo
};

RealGermSign real_germ_sign(const RealGerm& rg, double tol = kSymbolicTol);

/// lim g/(1+|g|): c/(1+|c|) when g converges to c, the unit ray direction
/// when it diverges. Throws InconclusiveGerm otherwise.
complexd normalized_limit(const Germ& g, double tol = kSymbolicTol,
                          double residual_tol = kFittedTol);

struct GermFit {
  Germ germ;        // germ.residual == residual
  double residual;  // max |value - fit| over held-out (smallest-t) samples
};

/// Least-squares fit of value ~ alpha*t + beta*log(t) + gamma over the
/// largest-t half of the samples (at least 3 points); the remaining samples
/// are held out and give the reported residual. Requires >= 4 samples with
/// strictly increasing t and max t >= 1e3. Throws DegenerateSamples when the
/// design matrix is rank-deficient.
GermFit fit_germ(const std::vector<std::pair<double, complexd>>& samples,
                 double residual_tol = kFittedTol);

}  // namespace qconv
