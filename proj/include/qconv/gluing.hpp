#pragma once

#include "qconv/charge.hpp"
#include "qconv/hn.hpp"

namespace qconv {

/// A constant (t-independent) stability datum on one SOD block.
struct GluedFamily {
  std::string id;
  double phase = 0.5;  // in (0,1] for input blocks
  double mass = 1.0;   // > 0
  LatticeVector cls;   // class in the block lattice
};

struct BlockStability {
  int id = 0;
  int rank = 1;                         // rank of the block lattice
  std::vector<GluedFamily> families;
  std::vector<complexd> basis_charge;   // Z_i on each basis vector of the block lattice
};

/// Hom-amplitude bounds: Hom^{<= n_ij}(A_i, A_j) = 0 for i < j. Model input.
struct HomAmplitude {
  std::map<std::pair<int, int>, int> n;
  int get(int i, int j) const;
};

/// Snapshot of the glued data at time t: family ids are "b<i>:<fid>",
/// phases are block phases shifted by Im z_i(t)/pi, charges scaled by e^{z_i(t)}.
StabilitySnapshot glue(const std::vector<BlockStability>& blocks,
                       const std::vector<Germ>& twists, const HomAmplitude& hom,
                       double t);

/// Integer-shift criterion over the widened phase windows (-eps-r, 1+r] for
/// block i and (-r, 1+eps+r) for block j, i < j: the largest shift landing a
/// block-j family in its window minus the smallest shift landing a block-i
/// family in its window must not exceed n_ij. Piecewise constant in eps; as
/// twist phases separate (psi_j - psi_i large) the gap shrinks, so the
/// criterion turns true for t beyond a threshold t(r) increasing in r.
bool r_gluable(const std::vector<BlockStability>& blocks,
               const std::vector<Germ>& twists, const HomAmplitude& hom, double r,
               double t, double eps = 1e-3);

/// sup{r - 1 : r-gluable}; -infinity when not even 1-gluable, +infinity for a
/// single block. Binary search to tolerance 1e-6.
double rho(const std::vector<BlockStability>& blocks, const std::vector<Germ>& twists,
           const HomAmplitude& hom, double t);

double d_slice(const StabilitySnapshot& a, const StabilitySnapshot& b,
               const std::vector<FormalObject>& test_set);

/// Singles, their shifts by +-1, and all pairwise direct sums.
std::vector<FormalObject> d_slice_test_set(const FamilyRegistry& reg);
std::vector<FormalObject> d_slice_test_set(const StabilitySnapshot& snap);

double d_slice_glued(const std::vector<double>& blockwise);

/// Inverse of glue: per-block restriction of the glued snapshot (phases and
/// charges as they appear in the snapshot, i.e. the twisted blocks).
std::vector<BlockStability> unglue(const StabilitySnapshot& snap,
                                   const std::vector<BlockStability>& blocks);

/// The recovering construction: twists z_i(t) = i*s_i*t with s strictly
/// increasing, derived charge path on the direct sum lattice, and a family
/// registry feeding the decomposition pipeline.
struct GluedPath {
  std::vector<BlockStability> blocks;
  std::vector<double> speeds;
  std::vector<Germ> twists;
  std::vector<int> offsets;  // block i occupies coords [offsets[i], offsets[i]+rank)
  ChargePath path;
  FamilyRegistry registry;
  HomAmplitude hom;
};

GluedPath build_recovering_path(const std::vector<BlockStability>& blocks,
                                const HomAmplitude& hom,
                                const std::vector<double>& speeds);

/// Max snapshot phase spread over objects and grid points.
double uniform_spread_check(const ChargePath& path, const FamilyRegistry& reg,
                            const std::vector<FormalObject>& objects,
                            const std::vector<double>& t_grid);

}  // namespace qconv
