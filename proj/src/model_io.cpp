#include "qcomp/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "qcomp/errors.hpp"

namespace qcomp {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidModel(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw InvalidModel(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) && !j.at(key).is_null() ? number(j, key) : fallback;
}

int integer(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer()) throw InvalidModel(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

Expr expression(const json& v, const std::string& key) {
  if (v.is_number()) return Expr::constant(v.get<double>());
  if (!v.is_string()) throw InvalidModel("field '" + key + "' must be an expression string");
  try {
    return parse(v.get<std::string>());
  } catch (const Error& e) {
    throw InvalidModel("field '" + key + "': " + e.what());
  }
}

std::vector<std::string> strings(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_array()) throw InvalidModel(std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) throw InvalidModel(std::string("field '") + key + "' must hold strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

Box box_of(const json& j, const char* key, const std::vector<std::string>& vars) {
  Box b = Box::unit(vars);
  if (!j.contains(key) || j.at(key).is_null()) return b;
  const json& v = j.at(key);
  auto interval = [&](const json& p, const std::string& var) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number() ||
        !(p[0].get<double>() < p[1].get<double>()))
      throw InvalidModel(std::string("field '") + key + "' entry for '" + var +
                         "' must be [lo, hi] with lo < hi");
    return std::pair<double, double>{p[0].get<double>(), p[1].get<double>()};
  };
  if (v.is_object()) {
    for (const auto& [name, p] : v.items()) {
      auto it = std::find(vars.begin(), vars.end(), name);
      if (it == vars.end())
        throw InvalidModel(std::string("field '") + key + "' names unknown variable '" + name + "'");
      b.bounds[it - vars.begin()] = interval(p, name);
    }
  } else if (v.is_array()) {
    if (v.size() != vars.size())
      throw InvalidModel(std::string("field '") + key + "' must have one interval per variable");
    for (std::size_t i = 0; i < vars.size(); ++i) b.bounds[i] = interval(v[i], vars[i]);
  } else {
    throw InvalidModel(std::string("field '") + key + "' must be an object or array");
  }
  return b;
}

double positive_eps(const json& j) {
  double eps = number_or(j, "eps", 1.0);
  if (!(eps > 0.0)) throw InvalidModel("field 'eps' must be positive");
  return eps;
}

BoundaryModel parse_measure(const json& j) {
  BoundaryModel m;
  m.dim = integer(j, "n");
  m.a = expression(require(j, "a"), "a");
  m.phi = j.contains("phi") ? expression(j.at("phi"), "phi") : Expr::constant(0.0);
  m.eps = positive_eps(j);
  m.x_vars = j.contains("x_vars") ? strings(j, "x_vars") : std::vector<std::string>{};
  m.box = box_of(j, "x_box", m.x_vars);
  m.validate();
  return m;
}

ConeModel parse_cone(const json& j) {
  ConeModel c{integer(j, "n"), number(j, "alpha"), positive_eps(j)};
  if (c.n < 2) throw InvalidModel("field 'n' must be >= 2");
  return c;
}

CurvatureModel parse_curvature(const json& j) {
  CurvatureModel m;
  m.n = integer(j, "n");
  const json& reg = require(j, "regime");
  if (!reg.is_string() || (reg != "quadratic" && reg != "superquadratic"))
    throw InvalidModel("field 'regime' must be \"quadratic\" or \"superquadratic\"");
  m.regime = reg.get<std::string>();
  m.eps = positive_eps(j);
  m.h_eps_max = number(j, "h_eps_max");
  if (m.regime == "quadratic") {
    m.a1 = number(j, "a1");
    m.a2 = number(j, "a2");
    if (!(m.a1 >= m.a2) || !(m.a2 > 1.0)) throw InvalidModel("fields 'a1', 'a2' need a1 >= a2 > 1");
  } else {
    m.c1 = number(j, "c1");
    m.c2 = number(j, "c2");
    m.r = number(j, "r");
    if (!(m.r > 2.0)) throw InvalidModel("field 'r' must exceed 2");
    if (!(m.c1 > 0.0) || !(m.c2 > 0.0)) throw InvalidModel("fields 'c1', 'c2' must be positive");
  }
  if (m.n < 2) throw InvalidModel("field 'n' must be >= 2");
  return m;
}

KwssModel parse_kwss(const json& j) {
  KwssModel m;
  m.n = integer(j, "n");
  m.eps = positive_eps(j);
  if (j.contains("kappa") && !j.at("kappa").is_null()) m.kappa = number(j, "kappa");
  m.nu_bound = number_or(j, "nu_bound", 0.0);
  const json& strata = require(j, "strata");
  if (!strata.is_array() || strata.empty()) throw InvalidModel("field 'strata' must be a non-empty array");
  for (const auto& s : strata) {
    Stratum st;
    st.k = integer(s, "k");
    st.V = expression(require(s, "V"), "strata[].V");
    if (st.k < 0 || st.k >= m.n) throw InvalidModel("field 'strata[].k' must satisfy 0 <= k < n");
    m.strata.push_back(std::move(st));
  }
  return m;
}

GeneratingFamily parse_ars(const json& j) {
  std::vector<std::string> vars = strings(j, "vars");
  std::string t_var = j.contains("t_var") ? require(j, "t_var").get<std::string>() : "";
  const json& fields = require(j, "fields");
  if (!fields.is_array()) throw InvalidModel("field 'fields' must be an array");
  std::vector<std::vector<std::string>> comps;
  for (const auto& f : fields) {
    if (!f.is_array()) throw InvalidModel("field 'fields' must hold arrays");
    std::vector<std::string> c;
    for (const auto& p : f) {
      if (p.is_string()) c.push_back(p.get<std::string>());
      else if (p.is_number()) c.push_back(p.dump());
      else throw InvalidModel("field 'fields' components must be polynomial strings");
    }
    comps.push_back(std::move(c));
  }
  GeneratingFamily g;
  try {
    g = GeneratingFamily::from_strings(vars, comps, t_var);
  } catch (const InvalidModel& e) {
    throw InvalidModel(std::string("field 'fields': ") + e.what());
  } catch (const Error& e) {
    throw InvalidModel(std::string("field 'fields': ") + e.what());
  }
  g.box = box_of(j, "box", t_var.empty() ? g.vars : g.x_vars());
  g.eps = number_or(j, "eps", 0.5);
  if (j.contains("det_fields")) {
    for (const auto& i : j.at("det_fields")) {
      if (!i.is_number_integer()) throw InvalidModel("field 'det_fields' must hold integers");
      g.det_fields.push_back(i.get<int>());
    }
  }
  g.validate();
  return g;
}

PotentialFn parse_potential(const json& j) {
  PotentialFn p;
  p.expr = expression(require(j, "expr"), "expr");
  p.eps = positive_eps(j);
  p.x_vars = j.contains("x_vars") ? strings(j, "x_vars") : std::vector<std::string>{};
  p.box = box_of(j, "x_box", p.x_vars);
  for (const auto& v : free_variables(p.expr))
    if (v != "t" && std::find(p.x_vars.begin(), p.x_vars.end(), v) == p.x_vars.end())
      throw InvalidModel("field 'expr' uses undeclared variable '" + v + "'");
  p.provenance = "user potential";
  return p;
}

}  // namespace

Model parse_model(const json& j) {
  if (!j.is_object()) throw InvalidModel("model must be a JSON object");
  const json& type = require(j, "type");
  if (!type.is_string()) throw InvalidModel("field 'type' must be a string");
  std::string t = type.get<std::string>();
  if (t == "measure") return parse_measure(j);
  if (t == "cone") return parse_cone(j);
  if (t == "curvature") return parse_curvature(j);
  if (t == "kwss") return parse_kwss(j);
  if (t == "ars") return parse_ars(j);
  if (t == "potential") return parse_potential(j);
  throw InvalidModel("field 'type' has unknown value '" + t + "'");
}

std::string model_type(const Model& m) {
  static const char* names[] = {"measure", "cone", "curvature", "kwss", "ars", "potential"};
  return names[m.index()];
}

void override_eps(Model& m, double eps) {
  if (!(eps > 0.0)) throw InvalidModel("eps must be positive");
  std::visit([eps](auto& x) { x.eps = eps; }, m);
}

// ---------------------------------------------------------------- catalog

namespace {

const std::map<std::string, json>& catalog() {
  static const std::map<std::string, json> c = {
      {"grushin", json::parse(R"j({"type":"ars","vars":["x","y"],"t_var":"x",
          "fields":[["1","0"],["0","x"]],"box":{"y":[-1,1]}})j")},
      {"cone-n2-a3", json::parse(R"j({"type":"cone","n":2,"alpha":3,"eps":1})j")},
      {"example-4.1", json::parse(R"j({"type":"measure","n":2,"a":"-1",
          "phi":"-1/2*ln(t^2 + x^2)","eps":1,"x_vars":["x"],"x_box":{"x":[-1,1]}})j")},
      {"example-7.1", json::parse(R"j({"type":"ars","vars":["t","x"],"t_var":"t",
          "fields":[["1","0"],["0","t*(t^2 + x^2)"]],"box":{"x":[-1,1]}})j")},
      {"example-7.2", json::parse(R"j({"type":"ars","vars":["t","x","y"],"t_var":"t",
          "fields":[["1","0","0"],["0","t*(t^2 + x^2)","0"],["0","t","1"]],
          "box":{"x":[-1,1],"y":[-1,1]}})j")},
      {"example-7.3", json::parse(R"j({"type":"ars","vars":["t","x","y","z"],"t_var":"t",
          "fields":[["1","0","0","0"],["0","1","0","0"],["0","0","1","x^2"],["0","0","0","t^2"]],
          "box":{"x":[-1,1],"y":[-1,1],"z":[-1,1]}})j")},
      {"kwss-codim4", json::parse(R"j({"type":"kwss","n":5,"strata":[{"k":1,"V":"0"}],
          "eps":1,"kappa":0,"nu_bound":0})j")},
  };
  return c;
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : catalog()) out.push_back(k);
  return out;
}

json catalog_fixture(const std::string& name) {
  auto it = catalog().find(name);
  if (it == catalog().end()) throw UnknownFixture("no fixture named '" + name + "'");
  return it->second;
}

// ---------------------------------------------------------------- checks

CheckResult run_check(const Model& m, const SamplingOptions& opt) {
  CheckResult r;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoundaryModel>) {
          r.primary = check_measure(x, opt);
          r.cross_checks.push_back(check_main(effective_potential(x), opt));
        } else if constexpr (std::is_same_v<T, ConeModel>) {
          r.primary = check_cone(x.n, x.alpha);
          BoundaryModel bm = cone_model(x.n, x.alpha, x.eps);
          r.cross_checks.push_back(check_measure(bm, opt));
          r.cross_checks.push_back(check_main(effective_potential(bm), opt));
          r.cross_checks.push_back(check_cone_zero_mode(x.n, x.alpha, x.eps));
        } else if constexpr (std::is_same_v<T, CurvatureModel>) {
          r.primary = x.regime == "quadratic" ? check_quadratic_curvature(x)
                                              : check_superquadratic_curvature(x);
        } else if constexpr (std::is_same_v<T, KwssModel>) {
          r.primary = check_kwss(x, opt);
        } else if constexpr (std::is_same_v<T, GeneratingFamily>) {
          r.primary = classify_ars(x, opt);
        } else {
          r.primary = check_main(x, opt);
        }
      },
      m);
  return r;
}

json to_json(const CriterionVerdict& v) {
  json j;
  j["criterion"] = v.criterion;
  j["verdict"] = to_string(v.verdict);
  j["kappa_hat"] = v.kappa_hat ? json(*v.kappa_hat) : json(nullptr);
  j["margin"] = v.margin ? json(*v.margin) : json(nullptr);
  if (v.witness) j["witness"] = {{"t", v.witness->t}, {"x", v.witness->x}, {"value", v.witness->value}};
  else j["witness"] = nullptr;
  j["reason"] = v.reason;
  j["evidence"] = json::object();
  for (const auto& [k, x] : v.evidence) j["evidence"][k] = x;
  return j;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Holds: return 0;
    case Verdict::Fails: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

}  // namespace qcomp
