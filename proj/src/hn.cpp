#include "qconv/hn.hpp"

#include <algorithm>

namespace qconv {

RealGerm constituent_phase_germ(const Constituent& c, const FamilyRegistry& reg) {
  RealGerm g = reg.at(c.family_id).phase_germ;
  g.c += c.shift;
  return g;
}

LimitHNFiltration limit_hn(const FormalObject& obj, const FamilyRegistry& reg,
                           double tol) {
  if (obj.constituents.empty()) throw Error("limit_hn: empty formal object");
  // canonical constituent order first so grouping is input-order independent
  std::vector<Constituent> cs = obj.constituents;
  std::sort(cs.begin(), cs.end(), [](const Constituent& x, const Constituent& y) {
    if (x.family_id != y.family_id) return x.family_id < y.family_id;
    return x.shift < y.shift;
  });
  LimitHNFiltration out;
  for (const auto& c : cs) {
    RealGerm g = constituent_phase_germ(c, reg);
    auto it = std::find_if(out.factors.begin(), out.factors.end(),
                           [&](const LimitHNFiltration::Factor& f) {
                             return lex_compare(f.phase_germ, g, tol) == 0;
                           });
    if (it == out.factors.end()) {
      out.factors.push_back({{{c}}, g});
    } else {
      // merge equal family+shift into multiplicity
      auto& parts = it->part.constituents;
      auto same = std::find_if(parts.begin(), parts.end(), [&](const Constituent& p) {
        return p.family_id == c.family_id && p.shift == c.shift;
      });
      if (same != parts.end()) same->multiplicity += c.multiplicity;
      else parts.push_back(c);
    }
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [tol](const LimitHNFiltration::Factor& a, const LimitHNFiltration::Factor& b) {
              return lex_compare(a.phase_germ, b.phase_germ, tol) > 0;
            });
  return out;
}

SumTrichotomy sum_trichotomy(const SemistableFamily& e, const SemistableFamily& f,
                             double tol) {
  int c = lex_compare(e.phase_germ, f.phase_germ, tol);
  if (c == 0) return SumTrichotomy::Merged;
  return c > 0 ? SumTrichotomy::EOnTop : SumTrichotomy::FOnTop;
}

LimitHNFiltration concatenate(const std::vector<LimitHNFiltration>& filtrations,
                              double tol) {
  LimitHNFiltration out;
  for (const auto& fl : filtrations) {
    for (const auto& fac : fl.factors) {
      if (!out.factors.empty() &&
          lex_compare(out.factors.back().phase_germ, fac.phase_germ, tol) <= 0)
        throw PhaseOverlap("concatenate: blocks not strictly decreasing");
      out.factors.push_back(fac);
    }
  }
  return out;
}

}  // namespace qconv
