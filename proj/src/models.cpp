#include "qconv/models.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qconv {

using std::numbers::pi;

namespace {

SemistableFamily make_family(std::string id, LatticeVector cls, Germ logz) {
  SemistableFamily f;
  f.id = std::move(id);
  f.cls = std::move(cls);
  f.logz_germ = logz;
  f.phase_germ = imag_part(logz) * (1.0 / pi);
  return f;
}

std::string oname(int n) { return "O(" + std::to_string(n) + ")"; }
std::string tname(int d) { return "torsion(" + std::to_string(d) + ")"; }

}  // namespace

Model build_p1(const P1Scenario& s) {
  if (s.kappa == complexd{}) throw BadKappa("p1: kappa must be nonzero");
  if (s.kappa.imag() < -kSymbolicTol)
    throw BadKappa("p1: Im(kappa) < 0 leaves the upper half plane chart");
  const bool glued_regime = s.kappa.imag() > kSymbolicTol;
  const complexd two_kappa = 2.0 * s.kappa;

  Model m;
  m.name = "p1";
  m.ambient_rank = 2;

  // w(t) = 2*kappa*t + i*pi/2 (+ decay_c/t); Z(O(k-1)) = 1, Z(O_p) = e^w - 1
  ExprPtr w_expr = e_add(e_mul(e_const(two_kappa), e_t()), e_const(complexd(0, pi / 2)));
  if (s.include_decay) w_expr = e_add(w_expr, e_div(e_const(s.decay_c), e_t()));
  m.path.ambient_rank = 2;
  m.path.t0 = 1.0;
  m.path.basis_charges = {e_const(1.0), e_sub(e_exp(w_expr), e_const(1.0))};
  if (two_kappa.real() > 0) m.path.raw_t_max = 40.0;

  const complexd kappa = s.kappa;
  const bool decay = s.include_decay;
  const double dc = s.decay_c;
  auto w_of = [kappa, decay, dc](double t) {
    complexd w = 2.0 * kappa * t + complexd(0, pi / 2);
    if (decay) w += dc / t;
    return w;
  };
  // Branch-consistent log Z for class (a, b): Z = b*e^w + (a - b). The three
  // regimes keep the argument of the inner log away from the cut crossing.
  m.path.log_eval = [w_of](const LatticeVector& v, double t) -> complexd {
    double a = static_cast<double>(v.at(0));
    double b = static_cast<double>(v.at(1));
    complexd w = w_of(t);
    if (b == 0) {
      if (a == 0) throw ZeroCharge("p1 log: zero class");
      return a > 0 ? complexd(std::log(a), 0) : complexd(std::log(-a), pi);
    }
    if (w.real() >= 5.0) return w + std::log(b + (a - b) * std::exp(-w));
    if (w.real() <= -5.0) {
      if (a != b) return std::log((a - b) + b * std::exp(w));
      return w + std::log(complexd(b, 0));
    }
    complexd z = b * std::exp(w) + (a - b);
    if (z == complexd{}) throw ZeroCharge("p1 log: zero charge");
    return std::log(z);
  };

  auto add = [&m](SemistableFamily f) { m.registry[f.id] = std::move(f); };

  if (glued_regime) {
    add(make_family(oname(s.k - 1), {1, 0}, Germ{0.0, 0.0, 0.0}));
    add(make_family(oname(s.k), {1, 1}, Germ{two_kappa, 0.0, complexd(0, pi / 2)}));
    for (const auto& [id, f] : m.registry) m.objects.push_back({{{id, 0, 1}}});
    for (int n = s.k - s.N; n <= s.k + s.N; ++n)
      if (n != s.k - 1 && n != s.k)
        m.objects.push_back(decompose_nonstable_p1_object(n, s));
    m.analytic_support = {1.0, 1.0};
    return m;
  }

  // geometric regime: kappa real and nonzero
  if (kappa.real() > 0) {
    for (int n = s.k - s.N; n <= s.k + s.N; ++n) {
      int mcoef = n - s.k + 1;
      Germ g;
      if (mcoef >= 1)
        g = Germ{two_kappa, 0.0, complexd(std::log(static_cast<double>(mcoef)), pi / 2)};
      else if (mcoef == 0)
        g = Germ{0.0, 0.0, 0.0};
      else
        g = Germ{two_kappa, 0.0, complexd(std::log(static_cast<double>(-mcoef)), -pi / 2)};
      add(make_family(oname(n), {1, mcoef}, g));
    }
    for (int d = 1; d <= s.N; ++d)
      add(make_family(tname(d), {0, d},
                      Germ{two_kappa, 0.0, complexd(std::log(static_cast<double>(d)), pi / 2)}));
  } else {
    for (int n = s.k - s.N; n <= s.k + s.N; ++n) {
      int mcoef = n - s.k + 1;
      Germ g;
      if (mcoef == 1)
        g = Germ{two_kappa, 0.0, complexd(0, pi / 2)};
      else if (mcoef < 1)
        g = Germ{0.0, 0.0, complexd(std::log(static_cast<double>(1 - mcoef)), 0)};
      else
        g = Germ{0.0, 0.0, complexd(std::log(static_cast<double>(mcoef - 1)), pi)};
      add(make_family(oname(n), {1, mcoef}, g));
    }
    for (int d = 1; d <= s.N; ++d)
      add(make_family(tname(d), {0, d},
                      Germ{0.0, 0.0, complexd(std::log(static_cast<double>(d)), pi)}));
  }
  for (const auto& [id, f] : m.registry) m.objects.push_back({{{id, 0, 1}}});
  return m;
}

FormalObject decompose_nonstable_p1_object(int n, const P1Scenario& s) {
  if (!(s.kappa.imag() > kSymbolicTol))
    throw Error("decompose_nonstable_p1_object: needs Im(kappa) > 0");
  if (n == s.k - 1 || n == s.k)
    throw Error("decompose_nonstable_p1_object: object is already stable");
  int mcoef = n - s.k + 1;
  FormalObject obj;
  if (mcoef >= 1) {
    obj.constituents.push_back({oname(s.k), 0, mcoef});
    obj.constituents.push_back({oname(s.k - 1), 1, mcoef - 1});
  } else {
    obj.constituents.push_back({oname(s.k - 1), 0, 1 - mcoef});
    obj.constituents.push_back({oname(s.k), 1, -mcoef});
  }
  return obj;
}

Region region_of(const P1Scenario& s, double t, double tol) {
  double im = 2.0 * s.kappa.imag() * t + pi / 2;
  if (im > pi + tol) return Region::Glued;
  if (im < pi - tol) return Region::Geometric;
  return Region::Wall;
}

Model build_curve(const CurveScenario& s) {
  if (s.g < 1) throw Error("curve: genus must be >= 1");
  if (s.g == 1 && !s.custom_tau)
    throw Error("curve: genus 1 requires a user-supplied tau path");
  if (!(s.theta > -pi / 2 && s.theta < pi / 2))
    throw Error("curve: theta must lie in (-pi/2, pi/2)");

  Model m;
  m.name = "curve";
  m.ambient_rank = 2;
  const double ceu = std::numbers::egamma;
  ExprPtr tau = s.custom_tau;
  if (!tau)
    tau = e_div(e_const(complexd(0, 2 * pi)),
                e_add(e_mul(e_const(std::polar(1.0, s.theta)), e_t()),
                      e_const(2.0 * (s.g - 1) * ceu)));
  m.path.ambient_rank = 2;
  m.path.t0 = 1.0;
  m.path.basis_charges = {e_const(1.0), tau};

  auto add = [&m](SemistableFamily f) { m.registry[f.id] = std::move(f); };

  if (!s.custom_tau) {
    // log(d*tau(t)) = log(2*pi) + log d + i(pi/2 - theta) - log t + o(1);
    // the gamma real part is built as a sum of the same std::log calls the
    // support check uses, so the ratios cancel cleanly
    for (int d = 1; d <= s.N; ++d)
      add(make_family(tname(d), {0, d},
                      Germ{0.0, complexd(-1.0, 0.0),
                           complexd(std::log(2 * pi) + std::log(static_cast<double>(d)),
                                    pi / 2 - s.theta)}));
    for (int r = 1; r <= s.N; ++r)
      for (int d = -s.N; d <= s.N; ++d)
        add(make_family("bundle(" + std::to_string(r) + "," + std::to_string(d) + ")",
                        {r, d},
                        Germ{0.0, 0.0, complexd(std::log(static_cast<double>(r)), 0)}));
    m.analytic_support = {1.0, 1.0};
  } else {
    // custom path: germs are not known in closed form; fit them numerically
    auto fit_for = [&](const LatticeVector& cls) {
      auto grid = geometric_grid(1e3, 1e8, 25);
      std::vector<std::pair<double, complexd>> samples;
      complexd z0 = eval_Z(m.path, cls, grid.front());
      double seed = std::arg(z0) / pi;
      auto track = unwrap_phases(m.path, cls, grid, seed);
      for (size_t i = 0; i < grid.size(); ++i) {
        complexd z = eval_Z(m.path, cls, grid[i]);
        samples.emplace_back(grid[i],
                             complexd(std::log(std::abs(z)), pi * track[i]));
      }
      return fit_germ(samples).germ;
    };
    for (int d = 1; d <= s.N; ++d)
      add(make_family(tname(d), {0, d}, fit_for({0, d})));
    for (int r = 1; r <= s.N; ++r)
      for (int d = -s.N; d <= s.N; ++d)
        add(make_family("bundle(" + std::to_string(r) + "," + std::to_string(d) + ")",
                        {r, d}, fit_for({r, d})));
  }
  for (const auto& [id, f] : m.registry) m.objects.push_back({{{id, 0, 1}}});
  m.objects.push_back({{{"bundle(1,0)", 0, 1}, {tname(1), 0, 1}}});
  return m;
}

Model build_recovering(const RecoveringScenario& s) {
  if (s.n < 1) throw Error("recovering: need at least one block");
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> uphase(0.2, 0.9);
  std::vector<BlockStability> blocks;
  std::vector<double> speeds;
  HomAmplitude hom;
  for (int i = 0; i < s.n; ++i) {
    BlockStability b;
    b.id = i;
    b.rank = 1;
    double phase = uphase(rng);
    b.families.push_back({"A", phase, 1.0, {1}});
    b.basis_charge = {std::polar(1.0, pi * phase)};
    blocks.push_back(std::move(b));
    speeds.push_back(static_cast<double>(i + 1));
    for (int j = 0; j < i; ++j) hom.n[{j, i}] = 1;
  }
  GluedPath gp = build_recovering_path(blocks, hom, speeds);
  Model m;
  m.name = "recovering";
  m.ambient_rank = gp.path.ambient_rank;
  m.path = gp.path;
  m.registry = gp.registry;
  for (const auto& [id, f] : m.registry) m.objects.push_back({{{id, 0, 1}}});
  m.glued = std::move(gp);
  return m;
}

bool is_preset(const std::string& name) {
  return name == "p1-glued" || name == "p1-geometric-plus" ||
         name == "p1-geometric-minus" || name == "curve-genus-g" ||
         name == "recovering-sod-n3";
}

Model build_preset(const std::string& name) {
  if (name == "p1-glued") {
    P1Scenario s;
    s.kappa = std::polar(1.0, pi / 4);
    return build_p1(s);
  }
  if (name == "p1-geometric-plus") return build_p1(P1Scenario{});
  if (name == "p1-geometric-minus") {
    P1Scenario s;
    s.kappa = complexd(-1.0, 0.0);
    return build_p1(s);
  }
  if (name == "curve-genus-g") return build_curve(CurveScenario{});
  if (name == "recovering-sod-n3") return build_recovering(RecoveringScenario{});
  throw ScenarioParseError("unknown preset: " + name);
}

}  // namespace qconv
