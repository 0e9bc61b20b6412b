#pragma once

#include "qconv/charge.hpp"
#include "qconv/lattice.hpp"
#include "qconv/preorder.hpp"

namespace qconv {

/// One block of the semiorthogonal decomposition: a sim^i-class with the
/// subgroup of the charge lattice its classes span.
struct SodBlock {
  std::string representative;
  std::vector<std::string> members;
  Subgroup lattice_image;
};

std::vector<SodBlock> build_sod(const OrderedPartition& p_isim,
                                const FamilyRegistry& reg, int ambient_rank);

/// One step of the refining filtration: a sim-class with the cumulative
/// lattice data and the torsion-free quotient presentation.
struct FiltrationStep {
  std::string representative;
  std::vector<std::string> members;
  Subgroup num;  // classes of everything preceq this class
  Subgroup den;  // classes of everything strictly prec
  QuotientPresentation lambda;
};

std::vector<FiltrationStep> build_filtration(const OrderedPartition& p_sim,
                                             const FamilyRegistry& reg,
                                             int ambient_rank);

/// The limit prestability data on one sim-class, normalized at `base`:
/// Z_base(F) = exp(lim ell_t(F) - ell_t(base)), phases from phase-germ
/// constant differences (so Z_base(base) = 1, phi = 0 identically).
struct LimitPrestability {
  std::string base;
  std::map<std::string, complexd> charges;
  std::map<std::string, double> phases;
};

LimitPrestability limit_prestability(const std::string& base,
                                     const std::vector<std::string>& sim_class,
                                     const FamilyRegistry& reg);

/// Max |Z_E(F) - e^z Z_E'(F)| over the class, z = limit of ell(E') - ell(E).
double c_action_compatibility(const std::string& e, const std::string& eprime,
                              const std::vector<std::string>& sim_class,
                              const FamilyRegistry& reg);

/// Blocks' lattice images independent over Q and jointly spanning full rank.
bool numericity_check(const std::vector<SodBlock>& blocks, int ambient_rank);

struct SupportResult {
  double epsilon = 0.0;  // window infimum of |Z_E(F)| / sup-norm of proj v(F)
  bool pass = false;     // epsilon > 1e-9
};

/// Infimum over the enumerated class members (classes projecting to zero are
/// unconstrained and skipped). Throws EmptyClass.
SupportResult support_check(const FiltrationStep& step,
                            const LimitPrestability& prestab,
                            const FamilyRegistry& reg);

bool class_count_bound(const OrderedPartition& p_sim, int lattice_rank);

/// Min over objects and grid points of |Z_t(class)| / mass.
double mass_proportionality_check(const std::vector<FormalObject>& objects,
                                  const ChargePath& path, const FamilyRegistry& reg,
                                  const std::vector<double>& t_grid);

}  // namespace qconv
