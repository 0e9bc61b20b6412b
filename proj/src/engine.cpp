#include "qconv/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qconv {

using std::numbers::pi;

std::vector<double> validation_grid() {
  auto g = geometric_grid(1e3, 1e7, 5);
  auto top = geometric_grid(4e7, 1e8, 5);
  g.insert(g.end(), top.begin(), top.end());
  return g;
}

namespace {

std::vector<std::pair<double, complexd>> germ_samples(const ChargePath& path,
                                                      const SemistableFamily& f,
                                                      const std::vector<double>& grid) {
  std::vector<std::pair<double, complexd>> samples;
  samples.reserve(grid.size());
  if (path.log_eval) {
    for (double t : grid) samples.emplace_back(t, path.log_eval(f.cls, t));
    return samples;
  }
  // raw evaluations with the phase branch seeded at the germ's branch
  complexd z0 = eval_Z(path, f.cls, grid.front());
  if (z0 == complexd{}) throw ZeroCharge("germ validation: zero charge");
  double base = std::arg(z0) / pi;
  double germ_phi = evaluate(f.phase_germ, grid.front());
  double seed = base + 2.0 * std::round((germ_phi - base) / 2.0);
  auto track = unwrap_phases(path, f.cls, grid, seed);
  for (size_t i = 0; i < grid.size(); ++i) {
    complexd z = eval_Z(path, f.cls, grid[i]);
    samples.emplace_back(grid[i], complexd(std::log(std::abs(z)), pi * track[i]));
  }
  return samples;
}

double component_err(const Germ& a, const Germ& b) {
  double e = 0;
  e = std::max(e, std::abs(a.alpha.real() - b.alpha.real()));
  e = std::max(e, std::abs(a.alpha.imag() - b.alpha.imag()));
  e = std::max(e, std::abs(a.beta.real() - b.beta.real()));
  e = std::max(e, std::abs(a.beta.imag() - b.beta.imag()));
  e = std::max(e, std::abs(a.gamma.real() - b.gamma.real()));
  e = std::max(e, std::abs(a.gamma.imag() - b.gamma.imag()));
  return e;
}

}  // namespace

GermValidation validate_germs(const ChargePath& path, const FamilyRegistry& reg,
                              double tol) {
  GermValidation v;
  auto grid = validation_grid();
  for (const auto& [id, f] : reg) {
    GermFit fit = fit_germ(germ_samples(path, f, grid));
    double err = component_err(fit.germ, f.logz_germ);
    if (err > v.max_component_err) {
      v.max_component_err = err;
      v.worst_family = id;
    }
    v.max_residual = std::max(v.max_residual, fit.residual);
    if (err > tol) {
      std::ostringstream os;
      os << "germ validation failed for family " << id << ": refit disagrees by "
         << err << " (tol " << tol << ")";
      throw ScenarioError(os.str());
    }
  }
  return v;
}

std::string render_sod(const std::vector<SodBlock>& sod) {
  std::ostringstream os;
  os << "⟨";
  for (size_t i = 0; i < sod.size(); ++i) {
    if (i) os << ", ";
    if (sod[i].members.size() == 1) {
      os << sod[i].members.front();
    } else {
      os << "{";
      for (size_t j = 0; j < sod[i].members.size(); ++j) {
        if (j) os << " ";
        os << sod[i].members[j];
      }
      os << "}";
    }
  }
  os << "⟩";
  return os.str();
}

std::string render_filtration(const std::vector<FiltrationStep>& steps) {
  std::ostringstream os;
  os << "0";
  for (size_t i = 0; i < steps.size(); ++i) {
    os << " ⊊ ";
    if (i + 1 == steps.size()) {
      os << "D";
    } else {
      os << "⟨" << steps[i].representative;
      if (steps[i].members.size() > 1) os << ", …";
      os << "⟩";
    }
  }
  return os.str();
}

PipelineResult run_pipeline(const Model& m) {
  PipelineResult r;
  r.partitions = build_partitions(m.registry);
  r.qc = check_quasi_convergence(m.registry, m.objects);
  r.sod = build_sod(r.partitions.p_isim, m.registry, m.ambient_rank);
  r.filtration = build_filtration(r.partitions.p_sim, m.registry, m.ambient_rank);
  r.analytic_support = m.analytic_support;
  r.numericity = numericity_check(r.sod, m.ambient_rank);
  r.class_bound = class_count_bound(r.partitions.p_sim, m.ambient_rank);

  double tcheck = 1e6;
  if (!m.path.log_eval && m.path.raw_t_max < tcheck)
    tcheck = std::max(m.path.t0, m.path.raw_t_max);

  for (const auto& step : r.filtration) {
    LimitPrestability pre =
        limit_prestability(step.representative, step.members, m.registry);
    r.support.push_back(support_check(step, pre, m.registry));
    // C-action coherence over all ordered pairs in the class; same arithmetic
    // as c_action_compatibility but with the per-base charges cached
    {
      const auto& ids = step.members;
      const size_t n = ids.size();
      std::vector<complexd> gamma(n);
      std::vector<double> phc(n);
      for (size_t i = 0; i < n; ++i) {
        const auto& f = m.registry.at(ids[i]);
        gamma[i] = f.logz_germ.gamma;
        phc[i] = f.phase_germ.c;
      }
      std::vector<std::vector<complexd>> Z(n, std::vector<complexd>(n));
      for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k)
          Z[i][k] = std::polar(std::exp(gamma[k].real() - gamma[i].real()),
                               pi * (phc[k] - phc[i]));
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
          complexd scale = std::exp(gamma[j] - gamma[i]);
          double dev = 0;
          for (size_t k = 0; k < n; ++k)
            dev = std::max(dev, std::abs(Z[i][k] - scale * Z[j][k]));
          r.c_action_max_dev = std::max(r.c_action_max_dev, dev);
        }
    }
    // numeric cross-check of the limit charges against charge ratios
    complexd le = log_Z_class(m.path, m.registry.at(step.representative).cls, tcheck);
    for (const auto& id : step.members) {
      complexd ratio =
          std::exp(log_Z_class(m.path, m.registry.at(id).cls, tcheck) - le);
      complexd zlim = pre.charges.at(id);
      r.numeric_charge_dev =
          std::max(r.numeric_charge_dev, std::abs(ratio - zlim) / std::abs(zlim));
    }
    r.prestabs.push_back(std::move(pre));
  }

  r.sod_string = render_sod(r.sod);
  r.filtration_string = render_filtration(r.filtration);
  return r;
}

bool PipelineResult::all_pass() const {
  if (!qc.pass || !numericity || !class_bound) return false;
  for (const auto& s : support)
    if (!s.pass) return false;
  return c_action_max_dev < 1e-9 && numeric_charge_dev < 1e-4;
}

}  // namespace qconv
