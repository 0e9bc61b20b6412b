#include "qconv/report.hpp"

#include <sstream>

namespace qconv {

namespace {

ordered_json germ_json(const Germ& g) {
  ordered_json j;
  j["alpha"] = {g.alpha.real(), g.alpha.imag()};
  j["beta"] = {g.beta.real(), g.beta.imag()};
  j["gamma"] = {g.gamma.real(), g.gamma.imag()};
  j["residual"] = g.residual;
  return j;
}

ordered_json real_germ_json(const RealGerm& g) {
  return ordered_json::array({g.a, g.b, g.c});
}

ordered_json partition_json(const OrderedPartition& p) {
  ordered_json j = ordered_json::array();
  for (const auto& blk : p.blocks) j.push_back(blk);
  return j;
}

}  // namespace

ordered_json make_report(const std::string& scenario_name, const Model& m,
                         const PipelineResult& pr,
                         const std::optional<GermValidation>& germs,
                         double tol, double residual_tol) {
  ordered_json j;
  j["schema_version"] = 1;
  j["scenario"] = scenario_name;
  j["model"] = m.name;
  j["ambient_rank"] = m.ambient_rank;

  j["verdict"]["quasi_convergent"] = pr.qc.pass;
  j["verdict"]["witness"] = pr.qc.witness;

  ordered_json fams = ordered_json::array();
  for (const auto& [id, f] : m.registry) {
    ordered_json fj;
    fj["id"] = id;
    fj["class"] = f.cls;
    fj["phase_germ"] = real_germ_json(f.phase_germ);
    fj["logz_germ"] = germ_json(f.logz_germ);
    fams.push_back(std::move(fj));
  }
  j["families"] = std::move(fams);

  j["p_isim"] = partition_json(pr.partitions.p_isim);
  j["p_sim"] = partition_json(pr.partitions.p_sim);
  j["sod"] = pr.sod_string;
  j["filtration"] = pr.filtration_string;

  ordered_json steps = ordered_json::array();
  for (size_t i = 0; i < pr.filtration.size(); ++i) {
    const auto& step = pr.filtration[i];
    ordered_json sj;
    sj["representative"] = step.representative;
    sj["members"] = step.members;
    sj["lambda_rank"] = step.lambda.rank;
    sj["lambda_torsion"] = step.lambda.torsion_orders;
    ordered_json charges;
    for (const auto& [id, z] : pr.prestabs[i].charges)
      charges[id] = {z.real(), z.imag()};
    sj["limit_charges"] = std::move(charges);
    ordered_json phases;
    for (const auto& [id, p] : pr.prestabs[i].phases) phases[id] = p;
    sj["limit_phases"] = std::move(phases);
    sj["support_epsilon"] = pr.support[i].epsilon;
    sj["support_pass"] = pr.support[i].pass;
    if (i < pr.analytic_support.size()) {
      sj["support_norm"] = "analytic";
      sj["support_epsilon_analytic"] = pr.analytic_support[i];
    } else {
      sj["support_norm"] = "sup-norm";
    }
    steps.push_back(std::move(sj));
  }
  j["filtration_steps"] = std::move(steps);

  j["checks"]["numericity"] = pr.numericity;
  j["checks"]["class_count_bound"] = pr.class_bound;
  j["checks"]["c_action_max_dev"] = pr.c_action_max_dev;
  j["checks"]["numeric_charge_dev"] = pr.numeric_charge_dev;
  if (germs) {
    j["checks"]["germ_validation"]["max_component_err"] = germs->max_component_err;
    j["checks"]["germ_validation"]["max_residual"] = germs->max_residual;
    j["checks"]["germ_validation"]["worst_family"] = germs->worst_family;
  }
  j["checks"]["all_pass"] = pr.all_pass();

  j["tolerances"]["symbolic"] = tol;
  j["tolerances"]["fitted"] = kFittedTol;
  j["tolerances"]["residual"] = residual_tol;
  j["tolerances"]["support_floor"] = 1e-9;
  j["tolerances"]["charge_crosscheck"] = 1e-4;
  return j;
}

std::string render_text(const ordered_json& r) {
  std::ostringstream os;
  os.precision(17);
  os << "scenario: " << r["scenario"].get<std::string>() << " (model "
     << r["model"].get<std::string>() << ", rank " << r["ambient_rank"] << ")\n";
  os << "quasi-convergent: "
     << (r["verdict"]["quasi_convergent"].get<bool>() ? "yes" : "no");
  auto witness = r["verdict"]["witness"].get<std::string>();
  if (!witness.empty()) os << " (witness: " << witness << ")";
  os << "\n";
  os << "sod: " << r["sod"].get<std::string>() << "\n";
  os << "filtration: " << r["filtration"].get<std::string>() << "\n";
  os << "families (" << r["families"].size() << "):\n";
  for (const auto& f : r["families"]) {
    os << "  " << f["id"].get<std::string>() << "  class " << f["class"].dump()
       << "  logz " << f["logz_germ"].dump() << "\n";
  }
  os << "filtration steps:\n";
  for (const auto& s : r["filtration_steps"]) {
    os << "  <" << s["representative"].get<std::string>() << "> rank "
       << s["lambda_rank"] << ", support eps " << s["support_epsilon"].dump()
       << " [" << s["support_norm"].get<std::string>() << "] "
       << (s["support_pass"].get<bool>() ? "pass" : "FAIL") << "\n";
  }
  const auto& c = r["checks"];
  os << "numericity: " << (c["numericity"].get<bool>() ? "pass" : "FAIL") << "\n";
  os << "class count bound: "
     << (c["class_count_bound"].get<bool>() ? "pass" : "FAIL") << "\n";
  os << "c-action max dev: " << c["c_action_max_dev"].get<double>() << "\n";
  os << "numeric charge dev: " << c["numeric_charge_dev"].get<double>() << "\n";
  if (c.contains("germ_validation"))
    os << "germ validation: max err "
       << c["germ_validation"]["max_component_err"].get<double>() << " (worst "
       << c["germ_validation"]["worst_family"].get<std::string>() << ")\n";
  os << "all checks: " << (c["all_pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace qconv
