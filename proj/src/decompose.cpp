#include "qconv/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qconv {

using std::numbers::pi;

namespace {

std::vector<LatticeVector> block_classes(const std::vector<std::string>& ids,
                                         const FamilyRegistry& reg) {
  std::vector<LatticeVector> out;
  for (const auto& id : ids) out.push_back(reg.at(id).cls);
  return out;
}

}  // namespace

std::vector<SodBlock> build_sod(const OrderedPartition& p_isim,
                                const FamilyRegistry& reg, int ambient_rank) {
  std::vector<SodBlock> blocks;
  for (const auto& members : p_isim.blocks) {
    if (members.empty()) throw EmptyClass("build_sod: empty block");
    blocks.push_back(
        {members.front(), members, Subgroup(ambient_rank, block_classes(members, reg))});
  }
  return blocks;
}

std::vector<FiltrationStep> build_filtration(const OrderedPartition& p_sim,
                                             const FamilyRegistry& reg,
                                             int ambient_rank) {
  std::vector<FiltrationStep> steps;
  std::vector<LatticeVector> cumulative;
  Subgroup den = Subgroup::zero(ambient_rank);
  for (const auto& members : p_sim.blocks) {
    if (members.empty()) throw EmptyClass("build_filtration: empty class");
    for (const auto& v : block_classes(members, reg)) cumulative.push_back(v);
    Subgroup num(ambient_rank, cumulative);
    FiltrationStep step;
    step.representative = members.front();
    step.members = members;
    step.num = num;
    step.den = den;
    step.lambda = quotient_torsion_free(num, den);
    steps.push_back(std::move(step));
    den = num;
  }
  return steps;
}

LimitPrestability limit_prestability(const std::string& base,
                                     const std::vector<std::string>& sim_class,
                                     const FamilyRegistry& reg) {
  const SemistableFamily& e = reg.at(base);
  LimitPrestability out;
  out.base = base;
  for (const auto& id : sim_class) {
    const SemistableFamily& f = reg.at(id);
    double log_mag = f.logz_germ.gamma.real() - e.logz_germ.gamma.real();
    double phi = f.phase_germ.c - e.phase_germ.c;
    out.charges[id] = std::polar(std::exp(log_mag), pi * phi);
    out.phases[id] = phi;
  }
  return out;
}

double c_action_compatibility(const std::string& e, const std::string& eprime,
                              const std::vector<std::string>& sim_class,
                              const FamilyRegistry& reg) {
  LimitPrestability pe = limit_prestability(e, sim_class, reg);
  LimitPrestability pp = limit_prestability(eprime, sim_class, reg);
  complexd z = reg.at(eprime).logz_germ.gamma - reg.at(e).logz_germ.gamma;
  complexd scale = std::exp(z);
  double dev = 0;
  for (const auto& id : sim_class)
    dev = std::max(dev, std::abs(pe.charges.at(id) - scale * pp.charges.at(id)));
  return dev;
}

bool numericity_check(const std::vector<SodBlock>& blocks, int ambient_rank) {
  std::vector<Subgroup> images;
  int total = 0;
  for (const auto& b : blocks) {
    images.push_back(b.lattice_image);
    total += b.lattice_image.rank();
  }
  return independent_over_Q(images) && total == ambient_rank;
}

SupportResult support_check(const FiltrationStep& step,
                            const LimitPrestability& prestab,
                            const FamilyRegistry& reg) {
  if (step.members.empty()) throw EmptyClass("support_check: empty class");
  const SemistableFamily& e = reg.at(prestab.base);
  double log_eps = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& id : step.members) {
    const SemistableFamily& f = reg.at(id);
    auto proj = step.lambda.project(f.cls);
    int64_t norm = 0;
    for (int64_t x : proj) norm = std::max(norm, std::abs(x));
    if (norm == 0) continue;  // class dies in the quotient: no constraint
    // log |Z_E(F)| - log ||proj||; kept in log space so equal log terms cancel
    double v = (f.logz_germ.gamma.real() - e.logz_germ.gamma.real()) -
               std::log(static_cast<double>(norm));
    log_eps = std::min(log_eps, v);
    any = true;
  }
  if (!any) throw EmptyClass("support_check: no class member survives projection");
  SupportResult r;
  r.epsilon = std::exp(log_eps);
  r.pass = r.epsilon > 1e-9;
  return r;
}

bool class_count_bound(const OrderedPartition& p_sim, int lattice_rank) {
  return static_cast<int>(p_sim.blocks.size()) <= lattice_rank;
}

double mass_proportionality_check(const std::vector<FormalObject>& objects,
                                  const ChargePath& path, const FamilyRegistry& reg,
                                  const std::vector<double>& t_grid) {
  double min_ratio = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    StabilitySnapshot snap = make_snapshot(path, reg, t);
    for (const auto& obj : objects) {
      MassPhase mp = mass_and_phase(obj, snap);
      complexd z = 0;
      for (const auto& c : obj.constituents) {
        double sgn = (c.shift % 2 == 0) ? 1.0 : -1.0;
        z += sgn * static_cast<double>(c.multiplicity) * snap.z.at(c.family_id);
      }
      min_ratio = std::min(min_ratio, std::abs(z) / mp.mass);
    }
  }
  return min_ratio;
}

}  // namespace qconv
