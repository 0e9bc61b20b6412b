#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "qconv/report.hpp"
#include "qconv/scenario.hpp"

using namespace qconv;
using std::numbers::pi;

namespace {

struct PlotData {
  std::vector<std::string> ids;
  std::vector<double> grid;
  // rows[i][k]: snapshot of family ids[i] at grid[k]
  std::vector<std::vector<StabilitySnapshot>> cache;
};

std::vector<double> plot_grid(const Model& m, const ScenarioSpec& spec,
                              double t_max_flag) {
  if (!spec.t_grid.empty()) return spec.t_grid;
  double lo = std::max(m.path.t0, 1.0);
  double hi = t_max_flag > 0 ? t_max_flag : 100.0;
  hi = std::min(hi, m.path.raw_t_max);
  if (hi <= lo) hi = lo * 2;
  return geometric_grid(lo, hi, 200);
}

void write_csv(std::ostream& os, const Model& m,
               const std::vector<std::string>& classes,
               const std::vector<double>& grid) {
  os.precision(17);
  os << "t,re_z,im_z,phase,class\n";
  for (double t : grid) {
    StabilitySnapshot snap = make_snapshot(m.path, m.registry, t);
    for (const auto& id : classes) {
      const complexd& z = snap.z.at(id);
      os << t << "," << z.real() << "," << z.imag() << "," << snap.phase.at(id)
         << "," << id << "\n";
    }
  }
}

void write_svg(std::ostream& os, const Model& m,
               const std::vector<std::string>& classes,
               const std::vector<double>& grid, const ScenarioSpec& spec) {
  const int W = 800, H = 500, M = 50;
  std::vector<std::vector<double>> tracks;
  double pmin = 0, pmax = 1;
  for (const auto& id : classes) {
    std::vector<double> tr;
    for (double t : grid) {
      StabilitySnapshot snap = make_snapshot(m.path, m.registry, t);
      tr.push_back(snap.phase.at(id));
    }
    for (double p : tr) {
      pmin = std::min(pmin, p);
      pmax = std::max(pmax, p);
    }
    tracks.push_back(std::move(tr));
  }
  double tlo = grid.front(), thi = grid.back();
  auto X = [&](double t) {
    return M + (W - 2 * M) * (std::log(t / tlo) / std::log(thi / tlo));
  };
  auto Y = [&](double p) { return H - M - (H - 2 * M) * (p - pmin) / (pmax - pmin); };
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
     << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">phase tracks: "
     << m.name << "</text>\n";
  // wall crossing marker for the glued-regime projective line path
  if (m.name == "p1" && spec.model == "p1" && spec.p1.kappa.imag() > kSymbolicTol) {
    double twall = pi / (4.0 * spec.p1.kappa.imag());
    if (twall > tlo && twall < thi)
      os << "<line x1=\"" << X(twall) << "\" y1=\"" << M << "\" x2=\"" << X(twall)
         << "\" y2=\"" << H - M
         << "\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n";
  }
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  for (size_t i = 0; i < tracks.size(); ++i) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[i % 8] << "\" points=\"";
    for (size_t k = 0; k < grid.size(); ++k)
      os << X(grid[k]) << "," << Y(tracks[i][k]) << " ";
    os << "\"/>\n";
    os << "<text x=\"" << W - M + 4 << "\" y=\"" << Y(tracks[i].back())
       << "\" font-size=\"10\" fill=\"" << colors[i % 8] << "\">" << classes[i]
       << "</text>\n";
  }
  os << "</svg>\n";
}

bool wants(const ScenarioSpec& spec, const std::string& check) {
  if (spec.checks.empty()) return true;
  return std::find(spec.checks.begin(), spec.checks.end(), check) !=
         spec.checks.end();
}

int run_property_suite(const Model& m, const ScenarioSpec& spec, unsigned seed) {
  int failures = 0;
  auto verdict = [&failures](const std::string& name, bool ok,
                             const std::string& detail = "") {
    std::cout << (ok ? "pass" : "FAIL") << "  " << name;
    if (!ok && !detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  PipelineResult pr = run_pipeline(m);
  verdict("quasi-convergence", pr.qc.pass, pr.qc.witness);
  verdict("numericity", pr.numericity);
  verdict("class-count-bound", pr.class_bound);
  bool support_ok = true;
  for (const auto& s : pr.support) support_ok = support_ok && s.pass;
  verdict("support", support_ok);
  verdict("c-action-coherence", pr.c_action_max_dev < 1e-9,
          "dev " + std::to_string(pr.c_action_max_dev));
  verdict("charge-crosscheck", pr.numeric_charge_dev < 1e-4,
          "dev " + std::to_string(pr.numeric_charge_dev));

  // logZ bounds on random small-spread formal objects
  {
    std::mt19937_64 rng(seed);
    std::vector<std::string> ids;
    for (const auto& [id, f] : m.registry) ids.push_back(id);
    double t = std::min(std::max(2.0, m.path.t0 + 1.0), m.path.raw_t_max);
    StabilitySnapshot snap = make_snapshot(m.path, m.registry, t);
    std::uniform_int_distribution<size_t> pick(0, ids.size() - 1);
    std::uniform_int_distribution<int> mult(1, 3);
    int tested = 0;
    bool ok = true;
    std::string detail;
    for (int it = 0; it < 500 && tested < 100; ++it) {
      FormalObject obj;
      size_t n = 1 + pick(rng) % 3;
      for (size_t c = 0; c < n; ++c)
        obj.constituents.push_back({ids[pick(rng)], 0, mult(rng)});
      MassPhase mp = mass_and_phase(obj, snap);
      double eps = mp.phi_plus - mp.phi_minus;
      if (eps > 0.2) continue;
      ++tested;
      complexd lz, l;
      try {
        lz = log_Z(obj, snap);
        l = ell(obj, snap);
      } catch (const ZeroCharge&) {
        continue;
      }
      double re_bound = std::abs(std::log(std::cos(pi * eps / 2.0))) + 1e-12;
      double im_bound = pi * eps + 1e-12;
      if (std::abs((l - lz).real()) > re_bound ||
          std::abs((l - lz).imag()) > im_bound) {
        ok = false;
        detail = "object at t=" + std::to_string(t);
        break;
      }
    }
    verdict("logZ-bounds (" + std::to_string(tested) + " objects)", ok, detail);
  }

  if (m.glued) {
    const GluedPath& gp = *m.glued;
    // rho sampled at the twist period t = k*pi, where the integer-shift
    // sawtooth cancels and the trend is exactly monotone
    bool mono = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 12; ++k) {
      double r = rho(gp.blocks, gp.twists, gp.hom, k * pi);
      if (r < prev - 1e-5) mono = false;
      prev = r;
    }
    verdict("rho-monotone", mono);
    // d_slice gluing law on snapshots at two times
    bool law = true;
    for (double t1 : {25.0, 40.0}) {
      StabilitySnapshot a = glue(gp.blocks, gp.twists, gp.hom, t1);
      StabilitySnapshot b = glue(gp.blocks, gp.twists, gp.hom, t1 + 0.25);
      double enumerated = d_slice(a, b, d_slice_test_set(a));
      std::vector<double> blockwise;
      auto ua = unglue(a, gp.blocks), ub = unglue(b, gp.blocks);
      for (size_t i = 0; i < ua.size(); ++i) {
        StabilitySnapshot sa, sb;
        sa.t = a.t;
        sb.t = b.t;
        for (const auto& f : ua[i].families) {
          sa.z[f.id] = std::polar(f.mass, pi * f.phase);
          sa.phase[f.id] = f.phase;
        }
        for (const auto& f : ub[i].families) {
          sb.z[f.id] = std::polar(f.mass, pi * f.phase);
          sb.phase[f.id] = f.phase;
        }
        blockwise.push_back(d_slice(sa, sb, d_slice_test_set(sa)));
      }
      if (std::abs(enumerated - d_slice_glued(blockwise)) > 1e-9) law = false;
    }
    verdict("d-slice-gluing-law", law);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-convergent path analyzer"};
  std::string scenario, out_dir, format = "json", classes_arg = "*";
  unsigned seed = 1;
  double t_max = 0;
  int window = 0;
  bool do_plot = false, do_check = false;
  app.add_option("--scenario", scenario, "scenario file or preset name")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized suites");
  app.add_option("--t-max", t_max, "largest plot time");
  app.add_option("--window", window, "override window size N");
  app.add_option("--format", format, "report format: json or text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--classes", classes_arg,
                 "comma-separated family ids to plot ('*' = all, '' = none)");
  app.add_flag("--plot", do_plot, "emit CSV + SVG phase tracks");
  app.add_flag("--check", do_check, "run the property suites");
  CLI11_PARSE(app, argc, argv);

  try {
    ScenarioSpec spec;
    try {
      if (is_preset(scenario)) {
        spec.preset = scenario;
      } else {
        spec = parse_scenario_file(scenario);
      }
      if (window > 0) {
        spec.p1.N = window;
        spec.curve.N = window;
      }
      if (app.count("--seed")) spec.rec.seed = seed;
    } catch (const ScenarioParseError& e) {
      std::cerr << "parse error: " << e.what() << "\n";
      return 2;
    }

    Model m;
    try {
      m = realize(spec);
    } catch (const ScenarioParseError& e) {
      std::cerr << "parse error: " << e.what() << "\n";
      return 2;
    } catch (const Error& e) {
      std::cerr << "invalid scenario: " << e.what() << "\n";
      return 2;
    }

    std::optional<GermValidation> gv;
    if (wants(spec, "germs")) {
      try {
        gv = validate_germs(m.path, m.registry);
      } catch (const ScenarioError& e) {
        std::cerr << "scenario inconsistency: " << e.what() << "\n";
        return 3;
      }
    }

    PipelineResult pr = run_pipeline(m);
    ordered_json report = make_report(scenario, m, pr, gv, spec.tol,
                                      spec.residual_tol);
    std::string rendered = format == "json" ? report.dump(2) + "\n"
                                            : render_text(report);
    if (out_dir.empty()) {
      std::cout << rendered;
    } else {
      std::string ext = format == "json" ? ".json" : ".txt";
      std::ofstream f(out_dir + "/report" + ext);
      if (!f) {
        std::cerr << "cannot write to " << out_dir << "\n";
        return 2;
      }
      f << rendered;
    }

    if (do_plot) {
      std::vector<std::string> classes;
      if (classes_arg == "*") {
        for (const auto& [id, f] : m.registry) classes.push_back(id);
      } else if (!classes_arg.empty()) {
        std::stringstream ss(classes_arg);
        std::string item;
        while (std::getline(ss, item, ',')) {
          if (item.empty()) continue;
          if (!m.registry.count(item)) {
            std::cerr << "unknown class: " << item << "\n";
            return 2;
          }
          classes.push_back(item);
        }
      }
      auto grid = plot_grid(m, spec, t_max);
      std::string base = out_dir.empty() ? "." : out_dir;
      {
        std::ofstream csv(base + "/plot.csv");
        write_csv(csv, m, classes, grid);
      }
      if (!classes.empty()) {
        std::ofstream svg(base + "/plot.svg");
        write_svg(svg, m, classes, grid, spec);
      }
    }

    if (do_check) {
      int rc = run_property_suite(m, spec, seed);
      if (rc != 0) return 1;
    }

    if (wants(spec, "decompose") && !pr.all_pass()) {
      std::cerr << "check failure: pipeline checks did not all pass\n";
      return 1;
    }
    return 0;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario inconsistency: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
