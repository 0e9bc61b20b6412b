#pragma once

#include "qconv/decompose.hpp"
#include "qconv/models.hpp"

namespace qconv {

/// Sample grid for germ cross-validation: spans [1e3, 1e8] with the
/// largest-t half (the fitting window) concentrated in [4e7, 1e8] so the
/// o(1) tails of the model paths stay below the comparison tolerance.
std::vector<double> validation_grid();

struct GermValidation {
  double max_component_err = 0.0;
  double max_residual = 0.0;
  std::string worst_family;
};

/// Refit every registered germ from path evaluations and compare
/// componentwise. Disagreement beyond tol is a hard scenario error.
GermValidation validate_germs(const ChargePath& path, const FamilyRegistry& reg,
                              double tol = 1e-3);

struct PipelineResult {
  Partitions partitions;
  std::vector<SodBlock> sod;
  std::vector<FiltrationStep> filtration;
  std::vector<LimitPrestability> prestabs;  // one per filtration step
  std::vector<SupportResult> support;       // computed, per step
  std::vector<double> analytic_support;     // model-supplied, may be empty
  bool numericity = false;
  bool class_bound = false;
  double c_action_max_dev = 0.0;
  double numeric_charge_dev = 0.0;  // relative, at the cross-check time
  QuasiConvergenceVerdict qc;
  std::string sod_string;
  std::string filtration_string;
  bool all_pass() const;
};

std::string render_sod(const std::vector<SodBlock>& sod);
std::string render_filtration(const std::vector<FiltrationStep>& steps);

/// Partitions -> SOD -> filtration -> limit prestabilities -> support,
/// numericity, class-count, C-action coherence, and a numeric cross-check of
/// the limit charges against charge ratios at t = 1e6 (tol 1e-4 relative).
PipelineResult run_pipeline(const Model& m);

}  // namespace qconv
