#pragma once

#include <optional>

#include "qconv/charge.hpp"
#include "qconv/gluing.hpp"

namespace qconv {

/// Projective-line model in the basis ([O(k-1)], [O_p]); [O(n)] = (1, n-k+1).
/// Charges are normalized so that Z(O(k-1)) = 1, and
/// log Z(O(k)) = w(t) = 2*kappa*t + i*pi/2 (+ optional decay_c/t).
struct P1Scenario {
  int k = 0;
  complexd kappa{1.0, 0.0};
  int N = 12;
  bool include_decay = false;
  double decay_c = 1.0;
};

/// Smooth curve model on (rank, degree): Z_t(r, d) = r + d*tau(t) with
/// tau(t) = 2*pi*i / (e^{i*theta} t + 2(g-1)*C_euler), or a custom tau.
struct CurveScenario {
  int g = 2;
  double theta = 0.0;
  int N = 12;
  ExprPtr custom_tau;  // required when g == 1
};

/// Recovering construction: n rank-1 blocks with unit masses, twists
/// z_i(t) = i*s_i*t, Hom amplitude n_ij = 1.
struct RecoveringScenario {
  int n = 3;
  unsigned seed = 1;
};

struct Model {
  std::string name;
  int ambient_rank = 2;
  ChargePath path;
  FamilyRegistry registry;
  std::vector<FormalObject> objects;       // extra formal objects to exercise
  std::vector<double> analytic_support;    // per filtration step, may be empty
  std::optional<GluedPath> glued;          // present for recovering scenarios
};

Model build_p1(const P1Scenario& s);
Model build_curve(const CurveScenario& s);
Model build_recovering(const RecoveringScenario& s);

/// Glued-region constituents of O(n) for Im(kappa) > 0, n outside {k-1, k}.
FormalObject decompose_nonstable_p1_object(int n, const P1Scenario& s);

enum class Region { Geometric, Glued, Wall };
Region region_of(const P1Scenario& s, double t, double tol = 1e-9);

/// Named presets: "p1-glued", "p1-geometric-plus", "p1-geometric-minus",
/// "curve-genus-g", "recovering-sod-n3".
Model build_preset(const std::string& name);
bool is_preset(const std::string& name);

}  // namespace qconv
