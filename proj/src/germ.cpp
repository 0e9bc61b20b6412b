#include "qconv/germ.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace qconv {

Germ germ_sub(const Germ& g1, const Germ& g2) { return g1 - g2; }

complexd evaluate(const Germ& g, double t) {
  return g.alpha * t + g.beta * std::log(t) + g.gamma;
}

bool is_finite(const Germ& g) {
  auto ok = [](complexd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  return ok(g.alpha) && ok(g.beta) && ok(g.gamma);
}

RealGerm real_part(const Germ& g) { return {g.alpha.real(), g.beta.real(), g.gamma.real()}; }
RealGerm imag_part(const Germ& g) { return {g.alpha.imag(), g.beta.imag(), g.gamma.imag()}; }

double evaluate(const RealGerm& rg, double t) { return rg.a * t + rg.b * std::log(t) + rg.c; }

int lex_compare(const RealGerm& x, const RealGerm& y, double tol) {
  const std::array<double, 3> d = {x.a - y.a, x.b - y.b, x.c - y.c};
  for (double v : d) {
    if (v > tol) return 1;
    if (v < -tol) return -1;
  }
  return 0;
}

namespace {
complexd snap(complexd z, double tol) {
  double re = std::abs(z.real()) <= tol ? 0.0 : z.real();
  double im = std::abs(z.imag()) <= tol ? 0.0 : z.imag();
  return {re, im};
}
}  // namespace

GermClassification classify(const Germ& g, double tol, double residual_tol) {
  if (g.residual > residual_tol) return {GermClassification::Inconclusive, {}};
  complexd a = snap(g.alpha, tol);
  complexd b = snap(g.beta, tol);
  if (a != complexd{}) return {GermClassification::DivergesAlongRay, a / std::abs(a)};
  if (b != complexd{}) return {GermClassification::DivergesAlongRay, b / std::abs(b)};
  return {GermClassification::Converges, g.gamma};
}

RealGermSign real_germ_sign(const RealGerm& rg, double tol) {
  if (rg.a > tol) return {RealGermSign::ToPlusInfinity, 0.0};
  if (rg.a < -tol) return {RealGermSign::ToMinusInfinity, 0.0};
  if (rg.b > tol) return {RealGermSign::ToPlusInfinity, 0.0};
  if (rg.b < -tol) return {RealGermSign::ToMinusInfinity, 0.0};
  return {RealGermSign::ConvergesTo, rg.c};
}

complexd normalized_limit(const Germ& g, double tol, double residual_tol) {
  GermClassification c = classify(g, tol, residual_tol);
  switch (c.kind) {
    case GermClassification::Converges:
      return c.value / (1.0 + std::abs(c.value));
    case GermClassification::DivergesAlongRay:
      return c.value;
    default:
      throw InconclusiveGerm("normalized_limit: germ classification inconclusive");
  }
}

namespace {

using ldouble = long double;
using lcomplex = std::complex<ldouble>;

// Least squares via modified Gram-Schmidt QR on the m x 3 design matrix with
// column scaling, carried out in extended precision so that the coefficient
// error is dominated by the rounding of the input samples rather than by the
// solver (the t column spans up to 1e8 and would otherwise eat ~8 digits).
// Returns false when rank-deficient.
bool solve_ls(const std::vector<double>& ts, const std::vector<complexd>& vals,
              std::array<complexd, 3>& coeffs) {
  const size_t m = ts.size();
  std::array<std::vector<ldouble>, 3> design;
  for (auto& c : design) c.resize(m);
  for (size_t i = 0; i < m; ++i) {
    design[0][i] = static_cast<ldouble>(ts[i]);
    design[1][i] = std::log(static_cast<ldouble>(ts[i]));
    design[2][i] = 1.0L;
  }
  auto cols = design;
  std::array<ldouble, 3> scale{};
  for (int j = 0; j < 3; ++j) {
    ldouble n = 0;
    for (size_t i = 0; i < m; ++i) n += cols[j][i] * cols[j][i];
    scale[j] = std::sqrt(n);
    if (scale[j] == 0) return false;
    for (size_t i = 0; i < m; ++i) cols[j][i] /= scale[j];
  }
  // MGS factorization Q R of the scaled design matrix.
  std::array<std::array<ldouble, 3>, 3> R{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < j; ++k) {
      ldouble dot = 0;
      for (size_t i = 0; i < m; ++i) dot += cols[k][i] * cols[j][i];
      R[k][j] = dot;
      for (size_t i = 0; i < m; ++i) cols[j][i] -= dot * cols[k][i];
    }
    ldouble n = 0;
    for (size_t i = 0; i < m; ++i) n += cols[j][i] * cols[j][i];
    n = std::sqrt(n);
    if (n < 1e-12L) return false;  // scaled columns: a tiny pivot means rank deficiency
    R[j][j] = n;
    for (size_t i = 0; i < m; ++i) cols[j][i] /= n;
  }
  auto solve = [&](const std::vector<lcomplex>& rhs) {
    std::array<lcomplex, 3> x{};
    std::array<lcomplex, 3> qtb{};
    for (int j = 0; j < 3; ++j) {
      lcomplex dot = 0;
      for (size_t i = 0; i < m; ++i) dot += cols[j][i] * rhs[i];
      qtb[j] = dot;
    }
    for (int j = 2; j >= 0; --j) {
      lcomplex s = qtb[j];
      for (int k = j + 1; k < 3; ++k) s -= R[j][k] * x[k];
      x[j] = s / R[j][j];
    }
    return x;
  };
  std::vector<lcomplex> b(m);
  for (size_t i = 0; i < m; ++i) b[i] = lcomplex(vals[i].real(), vals[i].imag());
  std::array<lcomplex, 3> x = solve(b);
  // one step of iterative refinement against the unscaled design matrix
  std::vector<lcomplex> resid(m);
  for (size_t i = 0; i < m; ++i) {
    lcomplex pred = 0;
    for (int j = 0; j < 3; ++j) pred += (x[j] / scale[j]) * design[j][i];
    resid[i] = b[i] - pred;
  }
  std::array<lcomplex, 3> dx = solve(resid);
  for (int j = 0; j < 3; ++j) {
    lcomplex c = (x[j] + dx[j]) / scale[j];
    coeffs[j] = complexd(static_cast<double>(c.real()), static_cast<double>(c.imag()));
  }
  return true;
}

}  // namespace

GermFit fit_germ(const std::vector<std::pair<double, complexd>>& samples,
                 double /*residual_tol*/) {
  const size_t n = samples.size();
  if (n < 4) throw DegenerateSamples("fit_germ: need at least 4 samples");
  for (size_t i = 0; i + 1 < n; ++i)
    if (!(samples[i].first < samples[i + 1].first))
      throw DegenerateSamples("fit_germ: t values must be strictly increasing");
  if (samples.back().first < 1e3)
    throw DegenerateSamples("fit_germ: largest t must be >= 1e3");

  const size_t nfit = std::max<size_t>((n + 1) / 2, 3);
  const size_t start = n - nfit;
  std::vector<double> ts;
  std::vector<complexd> vals;
  for (size_t i = start; i < n; ++i) {
    ts.push_back(samples[i].first);
    vals.push_back(samples[i].second);
  }
  std::array<complexd, 3> coeffs{};
  if (!solve_ls(ts, vals, coeffs))
    throw DegenerateSamples("fit_germ: rank-deficient design matrix");

  Germ g{coeffs[0], coeffs[1], coeffs[2]};
  // Held-out residual over the smallest-t samples; if none were held out,
  // fall back to the in-sample residual.
  double res = 0.0;
  const size_t lo = start > 0 ? 0 : start;
  const size_t hi = start > 0 ? start : n;
  for (size_t i = lo; i < hi; ++i)
    res = std::max(res, std::abs(samples[i].second - evaluate(g, samples[i].first)));
  g.residual = res;
  return {g, res};
}

}  // namespace qconv
