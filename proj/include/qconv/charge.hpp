#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qconv/errors.hpp"
#include "qconv/expr.hpp"
#include "qconv/germ.hpp"
#include "qconv/lattice.hpp"

namespace qconv {

/// t |-> Z_t on the charge lattice, one closed-form expression per basis
/// vector. Models whose raw values overflow double range supply a log-space
/// evaluator and a raw-evaluation cutoff.
struct ChargePath {
  int ambient_rank = 0;
  std::vector<ExprPtr> basis_charges;
  double t0 = 0.0;
  // branch-consistent log Z for registered classes; optional
  std::function<complexd(const LatticeVector&, double)> log_eval;
  double raw_t_max = std::numeric_limits<double>::infinity();
};

complexd eval_Z(const ChargePath& path, const LatticeVector& v, double t);

/// log Z via the path's log-space evaluator when present, else the principal
/// log of the raw value (branch untracked).
complexd log_Z_class(const ChargePath& path, const LatticeVector& v, double t);

/// A family of limit-semistable objects along the path.
struct SemistableFamily {
  std::string id;
  LatticeVector cls;        // class at shift 0
  RealGerm phase_germ;      // phi_t
  Germ logz_germ;           // branch-consistent log Z_t; imag part = pi*phase_germ
  std::vector<int64_t> discrete_params;
};

SemistableFamily shift(const SemistableFamily& f, int k);

struct Constituent {
  std::string family_id;
  int shift = 0;
  int multiplicity = 1;
};

struct FormalObject {
  std::vector<Constituent> constituents;  // nonempty
};

using FamilyRegistry = std::map<std::string, SemistableFamily>;

LatticeVector object_class(const FormalObject& obj, const FamilyRegistry& reg,
                           int ambient_rank);

/// Per-family charge value and branch-consistent phase at a fixed t. The
/// phase branch is anchored to each family's phase germ.
struct StabilitySnapshot {
  double t = 0.0;
  std::map<std::string, complexd> z;      // family id -> Z_t
  std::map<std::string, double> phase;    // family id -> phi_t
};

StabilitySnapshot make_snapshot(const ChargePath& path, const FamilyRegistry& reg,
                                double t);

struct MassPhase {
  double mass = 0.0;
  double phi_avg = 0.0;
  double phi_plus = 0.0;
  double phi_minus = 0.0;
};

MassPhase mass_and_phase(const FormalObject& obj, const StabilitySnapshot& snap);

/// The unique branch log Z(class(obj)) with imaginary part in
/// [pi*phi_minus, pi*phi_plus]. Throws SpreadTooLarge when the phase spread
/// is >= 1 and ZeroCharge when the total charge vanishes.
complexd log_Z(const FormalObject& obj, const StabilitySnapshot& snap);

/// z.(Z,P): charges scaled by e^z, phases shifted by Im(z)/pi.
StabilitySnapshot c_action(complexd zc, const StabilitySnapshot& snap);
SemistableFamily c_action(complexd zc, const SemistableFamily& f);

complexd ell(const FormalObject& obj, const StabilitySnapshot& snap);
Germ ell_germ(const SemistableFamily& f, int multiplicity = 1);

/// Continuous phase track (in units of pi) of Z_t(family_class) over t_grid,
/// seeded at the first grid point. Throws GridTooCoarse when arg jumps by
/// >= pi between consecutive points.
std::vector<double> unwrap_phases(const ChargePath& path,
                                  const LatticeVector& family_class,
                                  const std::vector<double>& t_grid,
                                  double seed_phase);

/// Geometric grid lo..hi inclusive, n points.
std::vector<double> geometric_grid(double lo, double hi, int n);

}  // namespace qconv
