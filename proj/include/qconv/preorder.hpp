#pragma once

#include <optional>

#include "qconv/charge.hpp"

namespace qconv {

/// Verdict for an ordered pair (E, F): the imaginary-asymptotics relation and,
/// when the phase difference converges, the real refinement. IPrec means
/// E comes strictly before F (E prec^i F), i.e. phi(F) - phi(E) -> +inf.
struct PairVerdict {
  enum Imag { IPrec, ISucc, ISim } imag = ISim;
  enum Real { Prec, Succ, Sim, NotApplicable } real_within_isim = NotApplicable;
  std::optional<complexd> ell_limit;  // present iff real_within_isim == Sim
};

PairVerdict classify_pair(const SemistableFamily& e, const SemistableFamily& f,
                          double tol = kSymbolicTol);

/// Blocks of family ids, strictly ordered ascending by the induced relation.
struct OrderedPartition {
  std::vector<std::vector<std::string>> blocks;
};

struct Partitions {
  OrderedPartition p_isim;  // SOD blocks, prec^i ascending
  OrderedPartition p_sim;   // filtration classes, prec ascending
};

/// Throws NonTransitive (with the offending triple in the message) when the
/// pairwise verdicts are inconsistent at tolerance.
Partitions build_partitions(const FamilyRegistry& reg, double tol = kSymbolicTol);

struct QuasiConvergenceVerdict {
  bool pass = true;
  std::string witness;  // offending pair or object when pass == false
};

QuasiConvergenceVerdict check_quasi_convergence(
    const FamilyRegistry& reg, const std::vector<FormalObject>& objects,
    double tol = kSymbolicTol, double residual_tol = kFittedTol);

}  // namespace qconv
