#include "qcomp/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcomp/errors.hpp"
#include "qcomp/riccati.hpp"
#include "qcomp/weyl.hpp"

namespace qcomp {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

std::string point_string(double t, const std::vector<double>& x) {
  std::ostringstream os;
  os << "t=" << t;
  for (double v : x) os << ", " << v;
  return os.str();
}

// Decides boundedness of sup_x f(t, x) as t -> 0 from a sampled profile:
// bounded if the last decade no longer increases, divergent if the last
// decade follows a positive power of 1/t.
CriterionVerdict analyze_profile(const SupProfile& p, int per_decade, const std::string& name) {
  CriterionVerdict v;
  v.criterion = name;
  const std::size_t n = p.sup.size();
  const std::size_t first = n > static_cast<std::size_t>(per_decade) ? n - 1 - per_decade : 0;

  double kappa = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p.sup[i] > kappa) {
      kappa = p.sup[i];
      arg = i;
    }
  }
  double scale = 1.0;
  for (std::size_t i = first; i < n; ++i)
    if (std::isfinite(p.sup[i])) scale = std::max(scale, 1.0 + std::fabs(p.sup[i]));
  double s_first = p.sup[first], s_last = p.sup[n - 1];
  double rise = (std::isfinite(s_last) ? s_last : -INFINITY) -
                (std::isfinite(s_first) ? s_first : -INFINITY);
  if (std::isnan(rise)) rise = 0.0;  // both -inf
  v.evidence["last_decade_rise"] = std::isfinite(rise) ? rise : 0.0;
  v.evidence["sup_at_floor"] = std::isfinite(s_last) ? s_last : -1e308;

  if (rise <= 1e-3 * scale) {
    v.verdict = Verdict::Holds;
    v.kappa_hat = kappa;
    v.margin = kappa - (std::isfinite(s_last) ? s_last : -1e308);
    if (kappa > 0.0) v.witness = Witness{p.t[arg], p.argmax[arg], p.sup[arg]};
    v.reason = "supremum stabilises over the last sampled decade";
    return v;
  }

  // fit log S = beta log(1/t) + const on the last decade
  bool positive = true;
  for (std::size_t i = first; i < n; ++i) positive = positive && p.sup[i] > 0.0;
  v.witness = Witness{p.t[n - 1], p.argmax[n - 1], s_last};
  if (positive) {
    double mx = 0, my = 0, m = static_cast<double>(n - first);
    std::vector<double> xs, ys;
    for (std::size_t i = first; i < n; ++i) {
      xs.push_back(-std::log(p.t[i]));
      ys.push_back(std::log(p.sup[i]));
      mx += xs.back();
      my += ys.back();
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double beta = sxy / sxx, quality = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      quality = std::max(quality, std::fabs(ys[i] - (my + beta * (xs[i] - mx))));
    v.evidence["divergence_exponent"] = beta;
    v.evidence["fit_quality"] = quality;
    if (beta > 0.1 && quality < 0.1) {
      v.verdict = Verdict::Fails;
      std::ostringstream os;
      os << "supremum grows like t^-" << beta << " (witness " << point_string(p.t[n - 1], p.argmax[n - 1])
         << ")";
      v.reason = os.str();
      return v;
    }
  }
  v.verdict = Verdict::Inconclusive;
  v.reason = "supremum neither stabilises nor follows a power law over the last decade";
  return v;
}

std::vector<std::vector<double>> x_samples(const Box& box, const SamplingOptions& opt) {
  if (box.dim() == 0) return {};
  return latin_hypercube(box, opt.x_samples, opt.seed);
}

SupProfile profile_of(const Expr& f, const std::string& t_var, const Box& box, double eps,
                      const SamplingOptions& opt) {
  std::vector<std::string> vars{t_var};
  vars.insert(vars.end(), box.vars.begin(), box.vars.end());
  CompiledExpr cf(f, vars);
  auto t = geometric_grid(eps, opt.grid_decades, opt.per_decade);
  auto x = x_samples(box, opt);
  SupProfile p = opt.parallel ? sup_profile(cf, t, x, box, opt.sup)
                              : sup_profile_serial(cf, t, x, box, opt.sup);
  if (p.nonfinite)
    throw NonFiniteSample("non-finite sample at " + point_string(p.bad_t, p.bad_x));
  return p;
}

}  // namespace

CriterionVerdict check_main(const PotentialFn& p, const SamplingOptions& opt) {
  Expr t = Expr::variable(p.t_var);
  Expr d = t * (Expr::constant(0.75) / pow(t, Expr::constant(2.0)) - p.expr);
  SupProfile prof = profile_of(d, p.t_var, p.box, p.eps, opt);
  CriterionVerdict v = analyze_profile(prof, opt.per_decade, "main");
  if (v.verdict == Verdict::Fails)
    v.reason = "V_eff drops below 3/(4t^2) - kappa/t for every kappa: " + v.reason;
  return v;
}

CriterionVerdict check_measure(const BoundaryModel& m, const SamplingOptions& opt) {
  m.validate();
  Expr a = fold(m.a);
  auto in_band = [](double v) { return v > -1.0 && v < 3.0; };
  if (a.is_constant()) {
    if (in_band(a.value())) {
      CriterionVerdict v;
      v.criterion = "measure";
      v.verdict = Verdict::Fails;
      v.margin = std::max(-1.0 - a.value(), a.value() - 3.0);
      v.reason = "exponent test: a = " + std::to_string(a.value()) + " lies in (-1, 3)";
      return v;
    }
  } else {
    CompiledExpr ca(a, m.box.vars);
    for (const auto& x : x_samples(m.box, opt)) {
      double av = ca.eval(x);
      if (!std::isfinite(av)) throw NonFiniteSample("a(x) not finite at " + point_string(0, x));
      if (in_band(av)) {
        CriterionVerdict v;
        v.criterion = "measure";
        v.verdict = Verdict::Fails;
        v.witness = Witness{0.0, x, av};
        v.reason = "exponent test: a(x) = " + std::to_string(av) + " lies in (-1, 3)";
        return v;
      }
    }
  }
  Expr t = Expr::variable(m.t_var);
  Expr phi = fold(m.phi);
  Expr d1 = differentiate(phi, m.t_var);
  Expr d2 = differentiate(d1, m.t_var);
  Expr q = a * d1 + t * (pow(d1, Expr::constant(2.0)) + d2);
  CriterionVerdict v = analyze_profile(profile_of(-q, m.t_var, m.box, m.eps, opt), opt.per_decade,
                                       "measure");
  if (v.verdict == Verdict::Fails)
    v.reason = "a d_t phi + t((d_t phi)^2 + d_t^2 phi) is unbounded below: " + v.reason;
  return v;
}

CriterionVerdict check_cone(int n, double alpha) {
  if (n < 2) throw InvalidDimension("cone dimension must be >= 2");
  CriterionVerdict v;
  v.criterion = "cone";
  double hi = 3.0 / (n - 1), lo = -1.0 / (n - 1);
  v.margin = std::max(alpha - hi, lo - alpha);
  if (alpha >= hi || alpha <= lo) {
    v.verdict = Verdict::Holds;
    v.kappa_hat = 0.0;
    v.reason = "alpha outside (-1/(n-1), 3/(n-1))";
  } else {
    v.verdict = Verdict::Fails;
    v.reason = "sharp: the cone is not essentially self-adjoint for -1/(n-1) < alpha < 3/(n-1)";
  }
  return v;
}

CriterionVerdict check_cone_zero_mode(int n, double alpha, double eps) {
  PotentialFn p = effective_potential(cone_model(n, alpha, eps));
  auto W = [&p](double t) { return p(t); };
  EndpointClassification e = classify_endpoint(W, eps);
  CriterionVerdict v;
  v.criterion = "cone_zero_mode";
  v.evidence["p1"] = e.p1;
  v.evidence["p2"] = e.p2;
  v.reason = e.note;
  switch (e.cls) {
    case EndpointClass::LimitPoint: v.verdict = Verdict::Holds; break;
    case EndpointClass::LimitCircle: v.verdict = Verdict::Fails; break;
    case EndpointClass::Inconclusive: v.verdict = Verdict::Inconclusive; break;
  }
  return v;
}

CriterionVerdict check_kwss(const KwssModel& m, const SamplingOptions& opt) {
  if (m.n < 2) throw InvalidDimension("n must be >= 2");
  if (m.strata.empty()) throw InvalidModel("no strata");
  if (!(m.eps > 0.0)) throw InvalidModel("eps must be positive");
  CriterionVerdict out;
  out.criterion = "kwss";
  out.verdict = Verdict::Holds;
  double kappa = 0.0;
  Expr d = Expr::variable(m.d_var);
  for (const Stratum& s : m.strata) {
    if (s.k < 0 || s.k >= m.n)
      throw InvalidModel("stratum dimension k=" + std::to_string(s.k) + " out of range");
    for (const auto& v : free_variables(s.V))
      if (v != m.d_var) throw InvalidModel("stratum potential may only use '" + m.d_var + "'");
    int codim = m.n - s.k;
    std::string tag = "k=" + std::to_string(s.k);
    double c = -static_cast<double>(codim) * (codim - 4) / 4.0;
    Expr g = d * (Expr::constant(c) / pow(d, Expr::constant(2.0)) - s.V);
    CriterionVerdict v = analyze_profile(profile_of(g, m.d_var, Box{}, m.eps, opt),
                                         opt.per_decade, "kwss");
    // far field: V >= -nu^2 on [eps, 10 eps]
    CompiledExpr cv(s.V, {m.d_var});
    for (int i = 0; i <= 100; ++i) {
      double dd = m.eps * std::pow(10.0, i / 100.0);
      double val = cv.eval(std::span<const double>(&dd, 1));
      if (!std::isfinite(val)) throw NonFiniteSample("V not finite at d=" + std::to_string(dd));
      if (val < -m.nu_bound * m.nu_bound) {
        v.verdict = Verdict::Fails;
        v.witness = Witness{dd, {}, val};
        v.reason = "V < -nu^2 in the far field";
        break;
      }
    }
    out.evidence["codim[" + tag + "]"] = codim;
    if (v.kappa_hat) kappa = std::max(kappa, *v.kappa_hat);
    if (v.verdict == Verdict::Fails && out.verdict != Verdict::Fails) {
      out.verdict = Verdict::Fails;
      out.witness = v.witness;
      out.reason = "stratum " + tag + ": " + v.reason;
    } else if (v.verdict == Verdict::Inconclusive && out.verdict == Verdict::Holds) {
      out.verdict = Verdict::Inconclusive;
      out.reason = "stratum " + tag + ": " + v.reason;
    }
  }
  if (out.verdict == Verdict::Holds) {
    out.kappa_hat = kappa;
    out.reason = "near-field bound holds on every stratum";
    if (m.kappa) {
      out.margin = *m.kappa - kappa;
      if (kappa > *m.kappa) out.reason += " (estimated kappa exceeds the declared one)";
    }
  }
  return out;
}

namespace {

void check_curvature_common(const CurvatureModel& m) {
  if (m.n < 2) throw InvalidDimension("n must be >= 2");
  if (!(m.eps > 0.0)) throw InvalidModel("eps must be positive");
}

}  // namespace

CriterionVerdict check_quadratic_curvature(const CurvatureModel& m) {
  if (m.regime != "quadratic") throw InvalidRegime("model regime is '" + m.regime + "'");
  check_curvature_common(m);
  if (!(m.a1 >= m.a2) || !(m.a2 > 1.0)) throw InvalidModel("need a1 >= a2 > 1");
  const double n = m.n, a1 = m.a1, a2 = m.a2;
  double main = (n - 1.0) / 16.0 *
                (2.0 * (a2 * a2 - 1.0) - (1.0 - a1) * (1.0 - a1) + (n - 2.0) * (1.0 - a2) * (1.0 - a2));
  double bound = (1.0 + a2) / (2.0 * m.eps);
  CriterionVerdict v;
  v.criterion = "quadratic_curvature";
  v.margin = main - 0.75;
  v.evidence["main_coefficient"] = main;
  v.evidence["h_eps_bound"] = bound;
  bool coeff_ok = main >= 0.75, datum_ok = m.h_eps_max < bound;
  if (coeff_ok && datum_ok) {
    v.verdict = Verdict::Holds;
    v.reason = "leading coefficient >= 3/4 and initial mean curvature below (1+a2)/(2 eps)";
  } else {
    v.verdict = Verdict::Fails;
    v.reason = !coeff_ok ? "leading coefficient below 3/4"
                         : "initial mean curvature not below (1+a2)/(2 eps)";
  }
  return v;
}

CriterionVerdict check_superquadratic_curvature(const CurvatureModel& m) {
  if (m.regime != "superquadratic") throw InvalidRegime("model regime is '" + m.regime + "'");
  check_curvature_common(m);
  if (!(m.r > 2.0)) throw InvalidModel("need r > 2");
  if (!(m.c1 > 0.0) || !(m.c2 > 0.0)) throw InvalidModel("need c1, c2 > 0");
  double hstar = critical_datum(m.c2, m.r, m.eps);
  CriterionVerdict v;
  v.criterion = "superquadratic_curvature";
  v.evidence["critical_datum"] = hstar;
  v.margin = hstar - m.h_eps_max;
  bool pinch = m.c2 <= m.c1 && m.c1 < m.n * m.c2;
  bool datum_ok = m.h_eps_max <= hstar;
  if (pinch && datum_ok) {
    v.verdict = Verdict::Holds;
    v.reason = "pinching c2 <= c1 < n c2 and initial mean curvature at most h*";
  } else {
    v.verdict = Verdict::Fails;
    v.reason = !pinch ? "pinching condition c2 <= c1 < n c2 violated"
                      : "initial mean curvature exceeds the critical datum";
  }
  return v;
}

std::function<double(double)> veff_from_level_sets(std::vector<std::function<double(double)>> h,
                                                   std::function<double(double)> trace_r) {
  return [h = std::move(h), trace_r = std::move(trace_r)](double t) {
    double sum = 0.0, sq = 0.0;
    for (const auto& hi : h) {
      double v = hi(t);
      sum += v;
      sq += v * v;
    }
    return 0.25 * (sum * sum - 2.0 * sq - 2.0 * trace_r(t));
  };
}

}  // namespace qcomp
