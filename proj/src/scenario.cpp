#include "qconv/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace qconv {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ScenarioParseError("scenario: bad integer for " + key + ": " + v);
  }
}

double parse_real(const std::string& key, const std::string& v) {
  // accept closed-form expressions so values like pi/6 work
  complexd z = eval(parse_expr(v), 1.0);
  if (z.imag() != 0.0)
    throw ScenarioParseError("scenario: " + key + " must be real: " + v);
  return z.real();
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ScenarioParseError("scenario: bad boolean for " + key + ": " + v);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

ScenarioSpec parse_scenario_text(const std::string& text) {
  std::map<std::string, std::string> scenario_kv, tamper_kv;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ScenarioParseError("scenario: malformed section header at line " +
                                 std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "tamper")
        throw ScenarioParseError("scenario: unknown section [" + section + "]");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ScenarioParseError("scenario: expected key = value at line " +
                               std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (section.empty())
      throw ScenarioParseError("scenario: key outside any section: " + key);
    auto& kv = section == "scenario" ? scenario_kv : tamper_kv;
    if (!kv.emplace(key, val).second)
      throw ScenarioParseError("scenario: duplicate key " + key);
  }

  ScenarioSpec spec;
  auto take = [](std::map<std::string, std::string>& kv, const std::string& key)
      -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = take(scenario_kv, "preset")) spec.preset = *v;
  if (auto v = take(scenario_kv, "model")) spec.model = *v;
  if (spec.preset.empty() == spec.model.empty())
    throw ScenarioParseError(
        "scenario: exactly one of preset / model must be given");
  if (!spec.preset.empty() && !is_preset(spec.preset))
    throw ScenarioParseError("scenario: unknown preset: " + spec.preset);

  if (auto v = take(scenario_kv, "checks")) spec.checks = split_list(*v);
  for (const auto& c : spec.checks)
    if (c != "germs" && c != "decompose" && c != "gluing")
      throw ScenarioParseError("scenario: unknown check: " + c);
  if (auto v = take(scenario_kv, "tol")) spec.tol = parse_real("tol", *v);
  if (auto v = take(scenario_kv, "residual_tol"))
    spec.residual_tol = parse_real("residual_tol", *v);
  if (auto v = take(scenario_kv, "t_grid")) {
    std::vector<std::string> fields;
    {
      std::stringstream fs(*v);
      std::string f;
      while (std::getline(fs, f, ':')) fields.push_back(trim(f));
    }
    if (fields.size() != 3)
      throw ScenarioParseError("scenario: t_grid must be lo:hi:n");
    double lo = parse_real("t_grid", fields[0]);
    double hi = parse_real("t_grid", fields[1]);
    int n = parse_int("t_grid", fields[2]);
    if (!(lo > 0 && hi > lo && n >= 2))
      throw ScenarioParseError("scenario: t_grid must satisfy 0 < lo < hi, n >= 2");
    spec.t_grid = geometric_grid(lo, hi, n);
  }

  std::set<std::string> allowed;
  if (spec.model == "p1") {
    allowed = {"k", "kappa", "N", "include_decay", "decay_c"};
  } else if (spec.model == "curve") {
    allowed = {"g", "theta", "N", "tau"};
  } else if (spec.model == "recovering") {
    allowed = {"n", "seed"};
  } else if (!spec.model.empty()) {
    throw ScenarioParseError("scenario: unknown model: " + spec.model);
  }
  for (const auto& [key, val] : scenario_kv)
    if (!allowed.count(key))
      throw ScenarioParseError("scenario: unknown key: " + key);

  if (spec.model == "p1") {
    if (auto v = take(scenario_kv, "k")) spec.p1.k = parse_int("k", *v);
    if (auto v = take(scenario_kv, "kappa")) spec.p1.kappa = eval(parse_expr(*v), 1.0);
    if (auto v = take(scenario_kv, "N")) spec.p1.N = parse_int("N", *v);
    if (auto v = take(scenario_kv, "include_decay"))
      spec.p1.include_decay = parse_bool("include_decay", *v);
    if (auto v = take(scenario_kv, "decay_c")) spec.p1.decay_c = parse_real("decay_c", *v);
  } else if (spec.model == "curve") {
    if (auto v = take(scenario_kv, "g")) spec.curve.g = parse_int("g", *v);
    if (auto v = take(scenario_kv, "theta")) spec.curve.theta = parse_real("theta", *v);
    if (auto v = take(scenario_kv, "N")) spec.curve.N = parse_int("N", *v);
    if (auto v = take(scenario_kv, "tau")) spec.curve.custom_tau = parse_expr(*v);
  } else if (spec.model == "recovering") {
    if (auto v = take(scenario_kv, "n")) spec.rec.n = parse_int("n", *v);
    if (auto v = take(scenario_kv, "seed"))
      spec.rec.seed = static_cast<unsigned>(parse_int("seed", *v));
  }

  if (!tamper_kv.empty()) {
    TamperSpec t;
    if (auto v = take(tamper_kv, "family")) t.family = *v;
    else throw ScenarioParseError("scenario: [tamper] requires family");
    if (auto v = take(tamper_kv, "component")) t.component = *v;
    else throw ScenarioParseError("scenario: [tamper] requires component");
    if (auto v = take(tamper_kv, "delta")) t.delta = parse_real("delta", *v);
    else throw ScenarioParseError("scenario: [tamper] requires delta");
    for (const auto& [key, val] : tamper_kv)
      throw ScenarioParseError("scenario: unknown key in [tamper]: " + key);
    static const std::set<std::string> comps = {"alpha_re", "alpha_im", "beta_re",
                                               "beta_im",  "gamma_re", "gamma_im"};
    if (!comps.count(t.component))
      throw ScenarioParseError("scenario: unknown tamper component: " + t.component);
    spec.tamper = t;
  }
  return spec;
}

ScenarioSpec parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError("scenario: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

Model realize(const ScenarioSpec& spec) {
  Model m;
  if (!spec.preset.empty()) {
    m = build_preset(spec.preset);
  } else if (spec.model == "p1") {
    m = build_p1(spec.p1);
  } else if (spec.model == "curve") {
    m = build_curve(spec.curve);
  } else if (spec.model == "recovering") {
    m = build_recovering(spec.rec);
  } else {
    throw ScenarioParseError("scenario: no model to build");
  }
  if (spec.tamper) {
    auto it = m.registry.find(spec.tamper->family);
    if (it == m.registry.end())
      throw ScenarioParseError("scenario: tamper family not in registry: " +
                               spec.tamper->family);
    Germ& g = it->second.logz_germ;
    const std::string& c = spec.tamper->component;
    double d = spec.tamper->delta;
    if (c == "alpha_re") g.alpha += d;
    else if (c == "alpha_im") g.alpha += complexd(0, d);
    else if (c == "beta_re") g.beta += d;
    else if (c == "beta_im") g.beta += complexd(0, d);
    else if (c == "gamma_re") g.gamma += d;
    else g.gamma += complexd(0, d);
  }
  return m;
}

}  // namespace qconv
