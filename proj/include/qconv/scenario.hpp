#pragma once

#include "qconv/models.hpp"

namespace qconv {

/// Deliberate perturbation of one registered germ component; used as a
/// negative control for the germ cross-validation.
struct TamperSpec {
  std::string family;
  std::string component;  // alpha_re, alpha_im, beta_re, beta_im, gamma_re, gamma_im
  double delta = 0.0;
};

/// Parsed scenario file: either a named preset or one inline model
/// definition, plus requested checks and optional tamper section.
struct ScenarioSpec {
  std::string preset;  // nonempty iff a preset was named
  std::string model;   // "p1" | "curve" | "recovering" when inline
  P1Scenario p1;
  CurveScenario curve;
  RecoveringScenario rec;
  std::vector<std::string> checks;  // subset of {germs, decompose, gluing}
  std::optional<TamperSpec> tamper;
  double tol = kSymbolicTol;
  double residual_tol = 1e-3;
  std::vector<double> t_grid;  // plotting grid; empty = model default
};

/// Flat INI-style format: a [scenario] section of key = value lines and an
/// optional [tamper] section. Unknown sections or keys are rejected.
ScenarioSpec parse_scenario_text(const std::string& text);
ScenarioSpec parse_scenario_file(const std::string& path);

/// Build the model (preset or inline) and apply the tamper, if any.
Model realize(const ScenarioSpec& spec);

}  // namespace qconv
