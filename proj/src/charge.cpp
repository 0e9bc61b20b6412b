#include "qconv/charge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qconv {

using std::numbers::pi;

complexd eval_Z(const ChargePath& path, const LatticeVector& v, double t) {
  if (static_cast<int>(v.size()) != path.ambient_rank)
    throw Error("eval_Z: class has wrong dimension");
  if (t < path.t0) throw EvalDomain("eval_Z: t below domain start");
  complexd acc = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    acc += static_cast<double>(v[i]) * eval(path.basis_charges[i], t);
  }
  return acc;
}

complexd log_Z_class(const ChargePath& path, const LatticeVector& v, double t) {
  if (path.log_eval) return path.log_eval(v, t);
  if (t > path.raw_t_max)
    throw EvalDomain("log_Z_class: t beyond raw range and no log evaluator");
  complexd z = eval_Z(path, v, t);
  if (z == complexd{}) throw ZeroCharge("log_Z_class: zero charge");
  return std::log(z);
}

SemistableFamily shift(const SemistableFamily& f, int k) {
  SemistableFamily g = f;
  if (k == 0) return g;
  g.phase_germ.c += k;
  g.logz_germ.gamma += complexd(0, pi * k);
  if (k % 2 != 0) g.cls = lat_scale(-1, g.cls);
  return g;
}

LatticeVector object_class(const FormalObject& obj, const FamilyRegistry& reg,
                           int ambient_rank) {
  LatticeVector acc(ambient_rank, 0);
  for (const auto& c : obj.constituents) {
    const auto& f = reg.at(c.family_id);
    int64_t sgn = (c.shift % 2 == 0) ? 1 : -1;
    acc = lat_add(acc, lat_scale(sgn * c.multiplicity, f.cls));
  }
  return acc;
}

StabilitySnapshot make_snapshot(const ChargePath& path, const FamilyRegistry& reg,
                                double t) {
  StabilitySnapshot snap;
  snap.t = t;
  for (const auto& [id, f] : reg) {
    complexd z;
    double phi;
    if (t <= path.raw_t_max) {
      z = eval_Z(path, f.cls, t);
      if (z == complexd{}) throw ZeroCharge("make_snapshot: zero charge for " + id);
      // branch anchored to the family's phase germ
      double germ_phi = evaluate(f.phase_germ, t);
      double base = std::arg(z) / pi;
      double j = std::round((germ_phi - base) / 2.0);
      phi = base + 2.0 * j;
    } else {
      complexd lz = log_Z_class(path, f.cls, t);
      z = std::exp(lz);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw EvalDomain("make_snapshot: charge overflows double range at t=" +
                         std::to_string(t));
      phi = lz.imag() / pi;
    }
    snap.z[id] = z;
    snap.phase[id] = phi;
  }
  return snap;
}

namespace {

struct ConstituentView {
  complexd z;    // shift-adjusted charge
  double phase;  // shift-adjusted phase
  int mult;
};

std::vector<ConstituentView> views(const FormalObject& obj,
                                   const StabilitySnapshot& snap) {
  if (obj.constituents.empty()) throw Error("formal object must be nonempty");
  std::vector<ConstituentView> out;
  for (const auto& c : obj.constituents) {
    auto zit = snap.z.find(c.family_id);
    if (zit == snap.z.end())
      throw Error("snapshot does not cover family " + c.family_id);
    double sgn = (c.shift % 2 == 0) ? 1.0 : -1.0;
    out.push_back({sgn * zit->second, snap.phase.at(c.family_id) + c.shift,
                   c.multiplicity});
  }
  return out;
}

}  // namespace

MassPhase mass_and_phase(const FormalObject& obj, const StabilitySnapshot& snap) {
  auto vs = views(obj, snap);
  MassPhase mp;
  mp.phi_plus = -std::numeric_limits<double>::infinity();
  mp.phi_minus = std::numeric_limits<double>::infinity();
  double weighted = 0;
  for (const auto& v : vs) {
    double m = v.mult * std::abs(v.z);
    mp.mass += m;
    weighted += v.phase * m;
    mp.phi_plus = std::max(mp.phi_plus, v.phase);
    mp.phi_minus = std::min(mp.phi_minus, v.phase);
  }
  mp.phi_avg = weighted / mp.mass;
  return mp;
}

complexd log_Z(const FormalObject& obj, const StabilitySnapshot& snap) {
  auto vs = views(obj, snap);
  MassPhase mp = mass_and_phase(obj, snap);
  if (mp.phi_plus - mp.phi_minus >= 1.0)
    throw SpreadTooLarge("log_Z: phase spread >= 1");
  complexd z = 0;
  for (const auto& v : vs) z += static_cast<double>(v.mult) * v.z;
  if (z == complexd{}) throw ZeroCharge("log_Z: total charge is zero");
  double base = std::arg(z) / pi;
  // unique theta = base + 2j in [phi_minus, phi_plus]
  double j = std::ceil((mp.phi_minus - base) / 2.0 - 1e-12);
  double theta = base + 2.0 * j;
  if (theta > mp.phi_plus + 1e-12)
    throw Error("log_Z: no branch lands in the phase interval");
  return {std::log(std::abs(z)), pi * theta};
}

StabilitySnapshot c_action(complexd zc, const StabilitySnapshot& snap) {
  StabilitySnapshot out = snap;
  complexd f = std::exp(zc);
  double dphi = zc.imag() / pi;
  for (auto& [id, z] : out.z) z *= f;
  for (auto& [id, p] : out.phase) p += dphi;
  return out;
}

SemistableFamily c_action(complexd zc, const SemistableFamily& f) {
  SemistableFamily g = f;
  g.phase_germ.c += zc.imag() / pi;
  g.logz_germ.gamma += zc;
  return g;
}

complexd ell(const FormalObject& obj, const StabilitySnapshot& snap) {
  MassPhase mp = mass_and_phase(obj, snap);
  return {std::log(mp.mass), pi * mp.phi_avg};
}

Germ ell_germ(const SemistableFamily& f, int multiplicity) {
  Germ g = f.logz_germ;
  if (multiplicity != 1) g.gamma += std::log(static_cast<double>(multiplicity));
  return g;
}

std::vector<double> unwrap_phases(const ChargePath& path,
                                  const LatticeVector& family_class,
                                  const std::vector<double>& t_grid,
                                  double seed_phase) {
  std::vector<double> track;
  track.reserve(t_grid.size());
  complexd prev;
  for (size_t k = 0; k < t_grid.size(); ++k) {
    complexd z = eval_Z(path, family_class, t_grid[k]);
    if (z == complexd{}) throw ZeroCharge("unwrap_phases: zero charge");
    if (k == 0) {
      track.push_back(seed_phase);
    } else {
      double delta = std::arg(z * std::conj(prev));
      if (std::abs(delta) >= pi - 1e-9)
        throw GridTooCoarse("unwrap_phases: arg jump >= pi between grid points");
      track.push_back(track.back() + delta / pi);
    }
    prev = z;
  }
  return track;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g;
  g.reserve(n);
  for (int i = 0; i < n; ++i)
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return g;
}

}  // namespace qconv
