#include "qconv/gluing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qconv {

using std::numbers::pi;

int HomAmplitude::get(int i, int j) const {
  auto it = n.find({i, j});
  if (it == n.end()) throw Error("HomAmplitude: no bound for pair");
  return it->second;
}

namespace {

std::string glued_id(int block, const std::string& fid) {
  return "b" + std::to_string(block) + ":" + fid;
}

double twist_phase(const Germ& z, double t) {
  return evaluate(imag_part(z), t) / pi;
}

}  // namespace

StabilitySnapshot glue(const std::vector<BlockStability>& blocks,
                       const std::vector<Germ>& twists, const HomAmplitude& hom,
                       double t) {
  if (blocks.size() != twists.size()) throw Error("glue: blocks/twists mismatch");
  if (!r_gluable(blocks, twists, hom, 1.0, t))
    throw NotGluable("glue: data is not 1-gluable at t=" + std::to_string(t));
  StabilitySnapshot snap;
  snap.t = t;
  for (size_t i = 0; i < blocks.size(); ++i) {
    complexd z = evaluate(twists[i], t);
    complexd scale = std::exp(complexd(z.real(), 0));
    double dphi = z.imag() / pi;
    for (const auto& f : blocks[i].families) {
      double phase = f.phase + dphi;
      snap.z[glued_id(blocks[i].id, f.id)] =
          scale * std::polar(f.mass, pi * phase);
      snap.phase[glued_id(blocks[i].id, f.id)] = phase;
    }
  }
  return snap;
}

bool r_gluable(const std::vector<BlockStability>& blocks,
               const std::vector<Germ>& twists, const HomAmplitude& hom, double r,
               double t, double eps) {
  if (r < 1.0) throw Error("r_gluable: r must be >= 1");
  const size_t n = blocks.size();
  if (n <= 1) return true;
  std::vector<double> psi(n);
  for (size_t i = 0; i < n; ++i) psi[i] = twist_phase(twists[i], t);
  // Shift n places a block family of twisted phase p at phase p + n; the shift
  // into the untwisted heart is then n itself (block phases lie in (0,1]).
  // n_min[i]: smallest shift landing some block-i phase in (-eps-r, 1+r];
  // n_max[j]: largest shift landing some block-j phase in (-r, 1+eps+r).
  // Hom^{<=0} between the windows vanishes iff n_max[j] - n_min[i] <= n_ij
  // for every i < j. The windows' open ends make the result piecewise
  // constant in eps.
  std::vector<long long> n_min(n), n_max(n);
  for (size_t i = 0; i < n; ++i) {
    long long mn = std::numeric_limits<long long>::max();
    long long mx = std::numeric_limits<long long>::min();
    for (const auto& f : blocks[i].families) {
      double p = f.phase + psi[i];
      mn = std::min(mn, static_cast<long long>(std::floor(-eps - r - p)) + 1);
      mx = std::max(mx, static_cast<long long>(std::ceil(1.0 + eps + r - p)) - 1);
    }
    n_min[i] = mn;
    n_max[i] = mx;
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (n_max[j] - n_min[i] > hom.get(blocks[i].id, blocks[j].id)) return false;
  return true;
}

double rho(const std::vector<BlockStability>& blocks, const std::vector<Germ>& twists,
           const HomAmplitude& hom, double t) {
  if (blocks.size() <= 1) return std::numeric_limits<double>::infinity();
  if (!r_gluable(blocks, twists, hom, 1.0, t))
    return -std::numeric_limits<double>::infinity();
  double lo = 1.0, hi = 2.0;
  while (r_gluable(blocks, twists, hom, hi, t)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) return std::numeric_limits<double>::infinity();
  }
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    if (r_gluable(blocks, twists, hom, mid, t)) lo = mid;
    else hi = mid;
  }
  return lo - 1.0;
}

double d_slice(const StabilitySnapshot& a, const StabilitySnapshot& b,
               const std::vector<FormalObject>& test_set) {
  double sup = 0;
  for (const auto& obj : test_set) {
    MassPhase ma = mass_and_phase(obj, a);
    MassPhase mb = mass_and_phase(obj, b);
    sup = std::max(sup, std::abs(ma.phi_plus - mb.phi_plus));
    sup = std::max(sup, std::abs(ma.phi_minus - mb.phi_minus));
  }
  return sup;
}

namespace {
std::vector<FormalObject> test_set_from_ids(const std::vector<std::string>& ids) {
  std::vector<FormalObject> out;
  for (const auto& id : ids)
    for (int k : {-1, 0, 1}) out.push_back({{{id, k, 1}}});
  for (size_t i = 0; i < ids.size(); ++i)
    for (size_t j = i + 1; j < ids.size(); ++j)
      out.push_back({{{ids[i], 0, 1}, {ids[j], 0, 1}}});
  return out;
}
}  // namespace

std::vector<FormalObject> d_slice_test_set(const FamilyRegistry& reg) {
  std::vector<std::string> ids;
  for (const auto& [id, f] : reg) ids.push_back(id);
  return test_set_from_ids(ids);
}

std::vector<FormalObject> d_slice_test_set(const StabilitySnapshot& snap) {
  std::vector<std::string> ids;
  for (const auto& [id, z] : snap.z) ids.push_back(id);
  return test_set_from_ids(ids);
}

double d_slice_glued(const std::vector<double>& blockwise) {
  double m = 0;
  for (double d : blockwise) m = std::max(m, d);
  return m;
}

std::vector<BlockStability> unglue(const StabilitySnapshot& snap,
                                   const std::vector<BlockStability>& blocks) {
  std::vector<BlockStability> out;
  for (const auto& b : blocks) {
    BlockStability r;
    r.id = b.id;
    r.rank = b.rank;
    for (const auto& f : b.families) {
      auto zit = snap.z.find(glued_id(b.id, f.id));
      auto pit = snap.phase.find(glued_id(b.id, f.id));
      if (zit == snap.z.end() || pit == snap.phase.end())
        throw NotInGluedLocus("unglue: snapshot does not cover " +
                              glued_id(b.id, f.id));
      r.families.push_back({f.id, pit->second, std::abs(zit->second), f.cls});
    }
    out.push_back(std::move(r));
  }
  return out;
}

GluedPath build_recovering_path(const std::vector<BlockStability>& blocks,
                                const HomAmplitude& hom,
                                const std::vector<double>& speeds) {
  if (blocks.size() != speeds.size())
    throw Error("build_recovering_path: blocks/speeds mismatch");
  for (size_t i = 0; i + 1 < speeds.size(); ++i)
    if (!(speeds[i] < speeds[i + 1]))
      throw BadTwistDirections(
          "build_recovering_path: twist speeds must be strictly increasing so "
          "every pairwise direction lies in the open upper half plane");
  GluedPath gp;
  gp.blocks = blocks;
  gp.speeds = speeds;
  gp.hom = hom;
  int total = 0;
  for (const auto& b : blocks) {
    if (static_cast<int>(b.basis_charge.size()) != b.rank)
      throw Error("build_recovering_path: block basis charges missing");
    gp.offsets.push_back(total);
    total += b.rank;
  }
  gp.path.ambient_rank = total;
  gp.path.t0 = 0.0;
  for (size_t i = 0; i < blocks.size(); ++i) {
    gp.twists.push_back(Germ{complexd(0, speeds[i]), 0.0, 0.0});
    ExprPtr tw = e_exp(e_mul(e_const(complexd(0, speeds[i])), e_t()));
    for (int k = 0; k < blocks[i].rank; ++k)
      gp.path.basis_charges.push_back(
          e_mul(tw, e_const(blocks[i].basis_charge[k])));
  }
  // branch-consistent log for pure-block classes: i*s_i*t + log Z_i(v)
  auto blocks_copy = blocks;
  auto offsets = gp.offsets;
  auto spd = speeds;
  gp.path.log_eval = [blocks_copy, offsets, spd, total](const LatticeVector& v,
                                                        double t) -> complexd {
    int hit = -1;
    for (size_t i = 0; i < blocks_copy.size(); ++i) {
      for (int k = 0; k < blocks_copy[i].rank; ++k) {
        if (v.at(offsets[i] + k) != 0) {
          if (hit >= 0 && hit != static_cast<int>(i))
            throw EvalDomain("glued log: class mixes blocks");
          hit = static_cast<int>(i);
        }
      }
    }
    if (hit < 0) throw ZeroCharge("glued log: zero class");
    complexd zi = 0;
    for (int k = 0; k < blocks_copy[hit].rank; ++k)
      zi += static_cast<double>(v[offsets[hit] + k]) *
            blocks_copy[hit].basis_charge[k];
    if (zi == complexd{}) throw ZeroCharge("glued log: zero block charge");
    return complexd(0, spd[hit] * t) + std::log(zi);
  };
  for (size_t i = 0; i < blocks.size(); ++i) {
    for (const auto& f : blocks[i].families) {
      SemistableFamily fam;
      fam.id = glued_id(blocks[i].id, f.id);
      fam.cls.assign(total, 0);
      for (size_t k = 0; k < f.cls.size(); ++k)
        fam.cls[gp.offsets[i] + k] = f.cls[k];
      fam.phase_germ = RealGerm{speeds[i] / pi, 0.0, f.phase};
      fam.logz_germ = Germ{complexd(0, speeds[i]), 0.0,
                           complexd(std::log(f.mass), pi * f.phase)};
      gp.registry[fam.id] = fam;
    }
  }
  return gp;
}

double uniform_spread_check(const ChargePath& path, const FamilyRegistry& reg,
                            const std::vector<FormalObject>& objects,
                            const std::vector<double>& t_grid) {
  double sup = 0;
  for (double t : t_grid) {
    StabilitySnapshot snap = make_snapshot(path, reg, t);
    for (const auto& obj : objects) {
      MassPhase mp = mass_and_phase(obj, snap);
      sup = std::max(sup, mp.phi_plus - mp.phi_minus);
    }
  }
  return sup;
}

}  // namespace qconv
