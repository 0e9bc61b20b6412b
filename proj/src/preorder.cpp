#include "qconv/preorder.hpp"

#include <algorithm>
#include <array>

#include "qconv/hn.hpp"

namespace qconv {

PairVerdict classify_pair(const SemistableFamily& e, const SemistableFamily& f,
                          double tol) {
  Germ d = ell_germ(f) - ell_germ(e);
  if (d.residual > kFittedTol)
    throw InconclusiveGerm("classify_pair: fitted residual too large for " +
                           e.id + " vs " + f.id);
  PairVerdict v;
  RealGermSign im = real_germ_sign(imag_part(d), tol);
  if (im.kind == RealGermSign::ToPlusInfinity) {
    v.imag = PairVerdict::IPrec;
    return v;
  }
  if (im.kind == RealGermSign::ToMinusInfinity) {
    v.imag = PairVerdict::ISucc;
    return v;
  }
  v.imag = PairVerdict::ISim;
  RealGermSign re = real_germ_sign(real_part(d), tol);
  switch (re.kind) {
    case RealGermSign::ToPlusInfinity:
      v.real_within_isim = PairVerdict::Prec;
      break;
    case RealGermSign::ToMinusInfinity:
      v.real_within_isim = PairVerdict::Succ;
      break;
    case RealGermSign::ConvergesTo:
      v.real_within_isim = PairVerdict::Sim;
      v.ell_limit = d.gamma;
      break;
  }
  return v;
}

namespace {

// comparison keys: (Im a, Im b) for the prec^i order, then (Re a, Re b) for
// the prec refinement; gamma never matters for either relation
std::array<double, 4> order_key(const SemistableFamily& f) {
  const Germ& g = f.logz_germ;
  return {g.alpha.imag(), g.beta.imag(), g.alpha.real(), g.beta.real()};
}

int key_compare(const std::array<double, 4>& x, const std::array<double, 4>& y,
                size_t ncomp, double tol) {
  for (size_t i = 0; i < ncomp; ++i) {
    double d = x[i] - y[i];
    if (d > tol) return 1;
    if (d < -tol) return -1;
  }
  return 0;
}

OrderedPartition group_by(const std::vector<std::string>& sorted_ids,
                          const FamilyRegistry& reg, size_t ncomp, double tol) {
  OrderedPartition p;
  for (const auto& id : sorted_ids) {
    if (!p.blocks.empty() &&
        key_compare(order_key(reg.at(p.blocks.back().front())),
                    order_key(reg.at(id)), ncomp, tol) == 0) {
      p.blocks.back().push_back(id);
    } else {
      p.blocks.push_back({id});
    }
  }
  // tolerance chains make grouping ill-defined; verify every in-block pair
  // compares equal and report the offending triple otherwise
  for (const auto& b : p.blocks)
    for (size_t i = 0; i < b.size(); ++i)
      for (size_t j = i + 1; j < b.size(); ++j)
        if (key_compare(order_key(reg.at(b[i])), order_key(reg.at(b[j])), ncomp,
                        tol) != 0)
          throw NonTransitive("build_partitions: tolerance chain between " +
                              b.front() + ", " + b[i] + ", " + b[j]);
  return p;
}

}  // namespace

Partitions build_partitions(const FamilyRegistry& reg, double tol) {
  std::vector<std::string> ids;
  for (const auto& [id, f] : reg) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), [&](const std::string& x, const std::string& y) {
    int c = key_compare(order_key(reg.at(x)), order_key(reg.at(y)), 4, tol);
    if (c != 0) return c < 0;
    return x < y;  // deterministic within a class
  });
  Partitions parts;
  parts.p_isim = group_by(ids, reg, 2, tol);
  parts.p_sim = group_by(ids, reg, 4, tol);
  return parts;
}

QuasiConvergenceVerdict check_quasi_convergence(const FamilyRegistry& reg,
                                                const std::vector<FormalObject>& objects,
                                                double tol, double residual_tol) {
  for (auto it1 = reg.begin(); it1 != reg.end(); ++it1)
    for (auto it2 = std::next(it1); it2 != reg.end(); ++it2) {
      Germ d = ell_germ(it2->second) - ell_germ(it1->second);
      if (d.residual > residual_tol)
        return {false, it1->first + " vs " + it2->first + ": inconclusive germ"};
      auto c = classify(d, tol, residual_tol);
      if (c.kind == GermClassification::Inconclusive)
        return {false, it1->first + " vs " + it2->first + ": inconclusive germ"};
    }
  for (const auto& obj : objects) {
    if (obj.constituents.empty()) return {false, "empty formal object"};
    for (const auto& c : obj.constituents)
      if (!reg.count(c.family_id))
        return {false, "object references unregistered family " + c.family_id};
    limit_hn(obj, reg, tol);
  }
  return {true, ""};
}

}  // namespace qconv
