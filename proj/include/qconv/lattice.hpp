#pragma once

#include <cstdint>
#include <vector>

#include "qconv/errors.hpp"

namespace qconv {

using LatticeVector = std::vector<int64_t>;  // class coordinates in a fixed basis

LatticeVector lat_add(const LatticeVector& a, const LatticeVector& b);
LatticeVector lat_sub(const LatticeVector& a, const LatticeVector& b);
LatticeVector lat_scale(int64_t s, const LatticeVector& v);
bool lat_is_zero(const LatticeVector& v);

using IntMatrix = std::vector<std::vector<int64_t>>;  // row-major

/// Row-style Hermite normal form: echelon rows, positive pivots, entries
/// above each pivot reduced into [0, pivot). Zero rows are dropped. The
/// result is the canonical representative of the row span.
IntMatrix hermite_normal_form(IntMatrix rows);

/// Smith normal form of A: returns the diagonal d_1 | d_2 | ... and, when
/// requested, the inverse of the accumulated column transform (A * R has the
/// diagonal as its echelon; rows of R_inv spanning the same column space).
struct SmithResult {
  std::vector<int64_t> diagonal;  // nonzero invariant factors, d_i | d_{i+1}
  IntMatrix col_inv;              // n x n, inverse of the column transform
  IntMatrix col;                  // n x n, the column transform itself
};
SmithResult smith_normal_form(IntMatrix a);

/// A finitely generated subgroup of Z^n, canonically represented by the HNF
/// basis of its generators.
class Subgroup {
 public:
  Subgroup() = default;
  Subgroup(int ambient_rank, std::vector<LatticeVector> generators);

  static Subgroup zero(int ambient_rank);

  int ambient_rank() const { return ambient_rank_; }
  int rank() const { return static_cast<int>(basis_.size()); }
  const IntMatrix& hermite_basis() const { return basis_; }
  const std::vector<LatticeVector>& generators() const { return generators_; }

  bool contains(const LatticeVector& v) const;
  bool contains(const Subgroup& other) const;
  bool operator==(const Subgroup& o) const {
    return ambient_rank_ == o.ambient_rank_ && basis_ == o.basis_;
  }

  /// Coordinates of v in the HNF basis; throws NotInSubgroup.
  std::vector<int64_t> coordinates(const LatticeVector& v) const;

 private:
  int ambient_rank_ = 0;
  std::vector<LatticeVector> generators_;
  IntMatrix basis_;  // HNF, cached
};

Subgroup span(int ambient_rank, const std::vector<LatticeVector>& vectors);

/// {v : m*v in S for some m >= 1}; same rank, primitive basis.
Subgroup saturate(const Subgroup& s);

Subgroup subgroup_sum(const Subgroup& a, const Subgroup& b);
Subgroup subgroup_intersection(const Subgroup& a, const Subgroup& b);

/// Presentation of Num / {v in Num : m*v in Den}, i.e. of the torsion-free
/// quotient Num / (saturate(Den) ∩ Num).
struct QuotientPresentation {
  int rank = 0;
  std::vector<int64_t> torsion_orders;  // invariant factors > 1 of Num/Den itself
  // Rational projection: for v in Num, quotient coords =
  // (projection_num * v) / projection_den, guaranteed integral on Num.
  IntMatrix projection_num;  // rank x ambient
  int64_t projection_den = 1;

  std::vector<int64_t> project(const LatticeVector& v) const;
};

/// Requires Den ⊆ Num (else NotASubgroup).
QuotientPresentation quotient_torsion_free(const Subgroup& num, const Subgroup& den);

/// True iff rank of the sum equals the sum of ranks.
bool independent_over_Q(const std::vector<Subgroup>& subgroups);

}  // namespace qconv
