#include "qcomp/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qcomp/ars.hpp"
#include "qcomp/errors.hpp"
#include "qcomp/model_io.hpp"
#include "qcomp/riccati.hpp"
#include "qcomp/weyl.hpp"

namespace qcomp {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string model_path;
  std::string fixture;
  std::string json_path;
  std::optional<double> eps;
  std::uint64_t seed = SamplingOptions{}.seed;
  int grid_decades = 6;
  int x_samples = 128;
  bool serial = false;
};

struct Loaded {
  json doc;
  std::string source;
  std::string digest;
};

Loaded load(const Flags& f) {
  if (f.model_path.empty() == f.fixture.empty())
    throw UsageError("give exactly one of a model path or --fixture NAME");
  Loaded l;
  std::string bytes;
  if (!f.fixture.empty()) {
    l.doc = catalog_fixture(f.fixture);
    bytes = l.doc.dump();
    l.source = "fixture:" + f.fixture;
  } else {
    std::ifstream in(f.model_path, std::ios::binary);
    if (!in) throw UsageError("cannot open model file '" + f.model_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    bytes = ss.str();
    try {
      l.doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
      throw InvalidModel(std::string("malformed JSON: ") + e.what());
    }
    l.source = f.model_path;
  }
  l.digest = "fnv1a64:" + fnv1a_hex(bytes);
  return l;
}

SamplingOptions sampling(const Flags& f) {
  if (f.grid_decades < 1) throw UsageError("--grid-decades must be >= 1");
  if (f.x_samples < 1) throw UsageError("--x-samples must be >= 1");
  SamplingOptions o;
  o.grid_decades = f.grid_decades;
  o.x_samples = f.x_samples;
  o.seed = f.seed;
  o.parallel = !f.serial;
  return o;
}

json options_json(const Flags& f) {
  return {{"eps", f.eps ? json(*f.eps) : json(nullptr)},
          {"seed", f.seed},
          {"grid_decades", f.grid_decades},
          {"x_samples", f.x_samples},
          {"parallel", !f.serial}};
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

void print_verdict(std::ostream& out, const CriterionVerdict& v, const char* label,
                   const char* indent) {
  out << indent << label << v.criterion << ": " << to_string(v.verdict);
  if (v.margin) out << "  margin=" << fmt(*v.margin);
  if (v.kappa_hat) out << "  kappa_hat=" << fmt(*v.kappa_hat);
  out << "\n";
  if (!v.reason.empty()) out << indent << "  " << v.reason << "\n";
  if (v.witness) {
    out << indent << "  witness t=" << fmt(v.witness->t);
    for (double x : v.witness->x) out << " " << fmt(x);
    out << " value=" << fmt(v.witness->value) << "\n";
  }
}

Model model_from(const Loaded& l, const Flags& f) {
  Model m = parse_model(l.doc);
  if (f.eps) override_eps(m, *f.eps);
  return m;
}

std::vector<Rational> parse_point(const std::string& s, std::size_t dim) {
  std::vector<Rational> q;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      q.push_back(parse_rational(part));
    } catch (const Error&) {
      throw UsageError("--point: '" + part + "' is not a number");
    }
  }
  if (q.size() != dim)
    throw UsageError("--point needs " + std::to_string(dim) + " comma-separated coordinates");
  return q;
}

std::string growth_string(const std::vector<int>& g) {
  std::string s = "(";
  for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
  return s + ")";
}

int cmd_check(const Flags& f, std::ostream& out, json& report) {
  Loaded l = load(f);
  Model m = model_from(l, f);
  CheckResult r = run_check(m, sampling(f));
  report["input"] = {{"source", l.source}, {"digest", l.digest}};
  report["model_type"] = model_type(m);
  report["model"] = l.doc;
  if (f.eps) report["model"]["eps"] = *f.eps;
  report["verdict"] = to_string(r.primary.verdict);
  report["primary"] = to_json(r.primary);
  report["cross_checks"] = json::array();
  for (const auto& c : r.cross_checks) report["cross_checks"].push_back(to_json(c));
  report["options"] = options_json(f);

  out << "model: " << model_type(m) << " (" << l.source << ")\n";
  print_verdict(out, r.primary, "", "");
  bool agree = true;
  for (const auto& c : r.cross_checks) {
    print_verdict(out, c, "cross-check ", "  ");
    if (c.verdict != r.primary.verdict) agree = false;
  }
  if (!r.cross_checks.empty()) {
    report["cross_checks_agree"] = agree;
    if (!agree) out << "note: cross-checks disagree with the primary verdict\n";
  }
  out << "verdict: " << to_string(r.primary.verdict) << "\n";
  return exit_code(r.primary.verdict);
}

int cmd_effpot(const Flags& f, std::ostream& out, json& report) {
  Loaded l = load(f);
  Model m = model_from(l, f);
  PotentialFn v;
  if (auto* b = std::get_if<BoundaryModel>(&m)) v = effective_potential(*b);
  else if (auto* c = std::get_if<ConeModel>(&m)) v = effective_potential(cone_model(c->n, c->alpha, c->eps));
  else if (auto* g = std::get_if<GeneratingFamily>(&m)) v = ars_effective_potential(*g);
  else if (auto* p = std::get_if<PotentialFn>(&m)) v = *p;
  else throw InvalidModel("field 'type': effpot needs a measure, cone, ars or potential model");

  std::vector<double> x0;
  for (const auto& [lo, hi] : v.box.bounds) x0.push_back(0.5 * (lo + hi));
  LeadingBehavior lb = leading_behavior(v, x0, v.eps);
  std::string s = print(v.expr);
  out << "V_eff(" << v.t_var;
  for (const auto& x : v.x_vars) out << ", " << x;
  out << ") = " << s << "\n";
  out << "at x0 = box centre, t^2 V = c2 - kappa t fits c2=" << fmt(lb.c2_hat + 0.0)
      << " kappa=" << fmt(lb.kappa_hat + 0.0) << " (quality " << fmt(lb.quality) << ")\n";
  report["input"] = {{"source", l.source}, {"digest", l.digest}};
  report["model_type"] = model_type(m);
  report["veff"] = s;
  report["leading_behavior"] = {
      {"x0", x0}, {"c2_hat", lb.c2_hat}, {"kappa_hat", lb.kappa_hat}, {"quality", lb.quality}};
  return 0;
}

struct RiccatiFlags {
  std::optional<double> a, m, c, r, h_eps;
};

int cmd_riccati(const Flags& f, const RiccatiFlags& rf, std::ostream& out, json& report) {
  double eps = f.eps.value_or(1.0);
  RiccatiSolution exact;
  std::function<double(double)> R;
  bool critical = false;
  if (rf.a) {
    if (rf.c || rf.r) throw UsageError("--a/--m and --c/--r select different problems");
    QuadraticProblem p{*rf.a, rf.m.value_or(0.0), eps};
    exact = solve_quadratic(p);
    double a = p.a;
    R = [a](double t) { return -(a * a - 1.0) / (4.0 * t * t); };
    out << "quadratic: a=" << fmt(p.a) << " m=" << fmt(p.m) << " eps=" << fmt(eps) << "\n";
    report["problem"] = {{"kind", "quadratic"}, {"a", p.a}, {"m", p.m}, {"eps", eps}};
  } else if (rf.c) {
    SuperQuadraticProblem p{*rf.c, rf.r.value_or(4.0), eps, 0.0};
    if (!(p.c > 0.0) || !(p.r > 2.0)) throw UsageError("--c must be > 0 and --r > 2");
    double hs = critical_datum(p.c, p.r, eps);
    p.h_eps = rf.h_eps.value_or(hs);
    critical = p.h_eps == hs;
    exact = solve_superquadratic(p);
    double c = p.c, r = p.r;
    R = [c, r](double t) { return -c / std::pow(t, r); };
    out << "super-quadratic: c=" << fmt(p.c) << " r=" << fmt(p.r) << " eps=" << fmt(eps) << "\n";
    out << "critical datum h* = " << fmt(hs) << "\n";
    report["problem"] = {{"kind", "superquadratic"}, {"c", p.c}, {"r", p.r}, {"eps", eps}};
    report["critical_datum"] = hs;
  } else {
    throw UsageError("riccati needs --a (quadratic) or --c (super-quadratic)");
  }
  out << "h(eps) = " << fmt(exact.h_eps) << "\n";
  out << "asymptote: " << to_string(exact.asymptote) << "  t* = " << fmt(exact.t_star)
      << "  h ~ " << fmt(exact.leading_coefficient) << " (t - t*)^-" << fmt(exact.leading_power) << "\n";

  // numerical cross-check
  double t_min = exact.t_star > 0.0 ? 0.5 * exact.t_star : 1e-4 * eps;
  RiccatiSolution num = integrate_riccati(R, exact.h_eps, eps, t_min);
  out << "integrated: t* = " << fmt(num.t_star)
      << (num.reached_t_min ? "  (no blow-up down to t_min)" : "") << "\n";
  if (critical)
    out << "note: the critical solution is unstable under backward integration; rounding in h* "
           "moves the integrated t* off 0\n";
  report["h_eps"] = exact.h_eps;
  report["exact"] = {{"asymptote", to_string(exact.asymptote)},
                     {"t_star", exact.t_star},
                     {"leading_coefficient", exact.leading_coefficient},
                     {"leading_power", exact.leading_power}};
  report["integrated"] = {{"t_star", num.t_star}, {"reached_t_min", num.reached_t_min}, {"t_min", t_min}};
  return 0;
}

int endpoint_exit(EndpointClass c) {
  switch (c) {
    case EndpointClass::LimitPoint: return 0;
    case EndpointClass::LimitCircle: return 1;
    case EndpointClass::Inconclusive: return 2;
  }
  return 2;
}

json endpoint_json(const EndpointClassification& e) {
  return {{"class", to_string(e.cls)}, {"p1", e.p1}, {"p2", e.p2},
          {"oscillatory", e.oscillatory}, {"note", e.note}};
}

int cmd_weyl(const Flags& f, std::optional<double> c, const std::string& potential, std::ostream& out,
             json& report) {
  double eps = f.eps.value_or(1.0);
  if (c.has_value() == !potential.empty()) throw UsageError("weyl needs exactly one of --c or --potential");
  std::function<double(double)> W;
  EndpointClassification primary;
  if (c) {
    primary = classify_inverse_square(*c);
    double cc = *c;
    W = [cc](double t) { return cc / (t * t); };
    report["potential"] = fmt(cc) + "/t^2";
  } else {
    Expr e;
    try {
      e = parse(potential);
    } catch (const Error& ex) {
      throw InvalidModel(std::string("--potential: ") + ex.what());
    }
    for (const auto& v : free_variables(e))
      if (v != "t") throw InvalidModel("--potential may only use the variable t, found '" + v + "'");
    CompiledExpr ce(e, {"t"});
    W = [ce](double t) { return ce.eval(std::span<const double>(&t, 1)); };
    report["potential"] = print(e);
  }
  EndpointClassification num = classify_endpoint(W, eps);
  if (!c) primary = num;
  out << "endpoint t=0: " << to_string(primary.cls) << "  p1=" << fmt(primary.p1)
      << " p2=" << fmt(primary.p2) << "\n";
  if (!primary.note.empty()) out << "  " << primary.note << "\n";
  if (c) {
    out << "  numerical: " << to_string(num.cls) << "  p2=" << fmt(num.p2) << "\n";
    report["numerical"] = endpoint_json(num);
  }
  report["classification"] = endpoint_json(primary);
  report["verdict"] = to_string(primary.cls);
  return endpoint_exit(primary.cls);
}

struct ArsFlags {
  bool growth = false, det = false, regular = false, classify = false;
  std::string point;
};

int cmd_ars(const Flags& f, const ArsFlags& af, std::ostream& out, json& report) {
  Loaded l = load(f);
  Model m = model_from(l, f);
  auto* g = std::get_if<GeneratingFamily>(&m);
  if (!g) throw InvalidModel("field 'type': ars subcommand needs an ars model");
  int actions = af.growth + af.det + af.regular + af.classify;
  if (actions != 1) throw UsageError("ars needs exactly one of --growth, --det, --regular, --classify");
  report["input"] = {{"source", l.source}, {"digest", l.digest}};
  report["model_type"] = "ars";
  if (af.growth) {
    if (af.point.empty()) throw UsageError("--growth needs --point");
    std::vector<Rational> q = parse_point(af.point, g->dim());
    std::vector<int> gv = growth_vector(*g, q);
    out << growth_string(gv) << "\n";
    report["growth_vector"] = gv;
    report["point"] = af.point;
    return 0;
  }
  if (af.det) {
    std::string s = det_xi(*g).to_string(g->vars);
    out << "det = " << s << "\n";
    report["det"] = s;
    return 0;
  }
  if (af.regular) {
    Regularity r = regularity_check(*g);
    out << to_string(r.kind) << " (k=" << r.k << ")";
    if (!r.reason.empty()) out << "  " << r.reason;
    out << "\n";
    report["regularity"] = {{"kind", to_string(r.kind)}, {"k", r.k}, {"reason", r.reason}};
    return r.kind == Regularity::Kind::Regular ? 0 : r.kind == Regularity::Kind::NonRegular ? 1 : 2;
  }
  CriterionVerdict v = classify_ars(*g, sampling(f));
  print_verdict(out, v, "", "");
  report["verdict"] = to_string(v.verdict);
  report["primary"] = to_json(v);
  report["options"] = options_json(f);
  return exit_code(v.verdict);
}

int cmd_catalog(const std::string& name, std::ostream& out, json& report) {
  if (name.empty() || name == "list") {
    for (const auto& n : catalog_names()) out << n << "\n";
    report["fixtures"] = catalog_names();
    return 0;
  }
  json doc = catalog_fixture(name);
  out << doc.dump(2) << "\n";
  report["fixture"] = doc;
  return 0;
}

void add_common(CLI::App* sub, Flags& f, bool model) {
  if (model) {
    sub->add_option("model", f.model_path, "model file (JSON)");
    sub->add_option("--fixture", f.fixture, "use a built-in fixture instead of a file");
  }
  sub->add_option("--json", f.json_path, "write the machine-readable report here");
  sub->add_option("--eps", f.eps, "collar width override");
}

void add_sampling(CLI::App* sub, Flags& f) {
  sub->add_option("--seed", f.seed, "x-sampling seed")->capture_default_str();
  sub->add_option("--grid-decades", f.grid_decades, "decades of the t-grid")->capture_default_str();
  sub->add_option("--x-samples", f.x_samples, "Latin-hypercube samples over the box")
      ->capture_default_str();
  sub->add_flag("--serial", f.serial, "use the serial sampling kernel");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-completeness criteria for incomplete Riemannian and almost-Riemannian models",
               "qcomp"};
  app.set_version_flag("--version", QCOMP_VERSION);
  app.require_subcommand(1);

  Flags f;
  RiccatiFlags rf;
  ArsFlags af;
  std::optional<double> weyl_c;
  std::string weyl_potential, fixture_name;

  auto* check = app.add_subcommand("check", "evaluate the criteria for a model file");
  add_common(check, f, true);
  add_sampling(check, f);

  auto* effpot = app.add_subcommand("effpot", "print the symbolic effective potential");
  add_common(effpot, f, true);

  auto* riccati = app.add_subcommand("riccati", "solve the Riccati comparison problem");
  add_common(riccati, f, false);
  riccati->add_option("--a", rf.a, "quadratic: exponent a > 1");
  riccati->add_option("--m", rf.m, "quadratic: offset of h(eps)");
  riccati->add_option("--c", rf.c, "super-quadratic: coefficient c > 0");
  riccati->add_option("--r", rf.r, "super-quadratic: power r > 2");
  riccati->add_option("--h-eps", rf.h_eps, "super-quadratic: datum h(eps), default h*");

  auto* weyl = app.add_subcommand("weyl", "classify the endpoint t = 0 of -u'' + W u");
  add_common(weyl, f, false);
  weyl->add_option("--c", weyl_c, "W = c / t^2");
  weyl->add_option("--potential", weyl_potential, "W as an expression in t");

  auto* ars = app.add_subcommand("ars", "almost-Riemannian structure tools");
  add_common(ars, f, true);
  add_sampling(ars, f);
  ars->add_flag("--growth", af.growth, "growth vector at --point");
  ars->add_option("--point", af.point, "comma-separated coordinates");
  ars->add_flag("--det", af.det, "determinant of the generating family");
  ars->add_flag("--regular", af.regular, "regularity check");
  ars->add_flag("--classify", af.classify, "essential self-adjointness verdict");

  auto* catalog = app.add_subcommand("catalog", "list fixtures or emit one");
  add_common(catalog, f, false);
  catalog->add_option("name", fixture_name, "fixture name, or 'list'");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << QCOMP_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "qcomp: " << e.what() << "\n";
    return kExitUsage;
  }

  auto sub = app.get_subcommands().front();
  std::string command = sub->get_name();
  json report = {{"tool", "qcomp"}, {"version", QCOMP_VERSION}, {"command", command}};
  auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (sub == check) code = cmd_check(f, out, report);
    else if (sub == effpot) code = cmd_effpot(f, out, report);
    else if (sub == riccati) code = cmd_riccati(f, rf, out, report);
    else if (sub == weyl) code = cmd_weyl(f, weyl_c, weyl_potential, out, report);
    else if (sub == ars) code = cmd_ars(f, af, out, report);
    else code = cmd_catalog(fixture_name, out, report);
  } catch (const UsageError& e) {
    err << "qcomp " << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownFixture& e) {
    err << "qcomp " << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "qcomp " << command << ": " << e.kind() << ": " << e.what() << "\n";
    return kExitInvalid;
  }
  report["exit_code"] = code;
  report["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!f.json_path.empty()) {
    std::ofstream js(f.json_path);
    if (!js) {
      err << "qcomp: cannot write '" << f.json_path << "'\n";
      return kExitUsage;
    }
    js << report.dump(2) << "\n";
  }
  return code;
}

}  // namespace qcomp
