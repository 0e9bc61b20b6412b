#pragma once

#include "qconv/charge.hpp"

namespace qconv {

/// Ordered factors of a limit HN filtration: phase germs strictly decreasing.
struct LimitHNFiltration {
  struct Factor {
    FormalObject part;    // constituents sharing one phase germ
    RealGerm phase_germ;  // shift-adjusted
  };
  std::vector<Factor> factors;
};

RealGerm constituent_phase_germ(const Constituent& c, const FamilyRegistry& reg);

LimitHNFiltration limit_hn(const FormalObject& obj, const FamilyRegistry& reg,
                           double tol = kSymbolicTol);

enum class SumTrichotomy { Merged, EOnTop, FOnTop };

SumTrichotomy sum_trichotomy(const SemistableFamily& e, const SemistableFamily& f,
                             double tol = kSymbolicTol);

/// Consecutive blocks must be strictly separated: min phase germ of block i
/// above max phase germ of block i+1. Throws PhaseOverlap otherwise.
LimitHNFiltration concatenate(const std::vector<LimitHNFiltration>& filtrations,
                              double tol = kSymbolicTol);

}  // namespace qconv
