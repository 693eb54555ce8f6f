#include "qcomp/effpot.hpp"

#include <algorithm>
#include <cmath>

#include "qcomp/errors.hpp"

namespace qcomp {

void BoundaryModel::validate() const {
  if (dim < 2) throw InvalidDimension("dimension must be >= 2, got " + std::to_string(dim));
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidModel("eps must be positive");
  if (depends_on(a, t_var)) throw InvalidModel("a(x) must not depend on " + t_var);
  for (const Expr* e : {&a, &phi}) {
    for (const std::string& v : free_variables(*e)) {
      if (v == t_var) continue;
      if (std::find(x_vars.begin(), x_vars.end(), v) == x_vars.end())
        throw InvalidModel("undeclared variable '" + v + "' in " + (e == &a ? "a" : "phi"));
    }
  }
  if (box.dim() != x_vars.size()) throw InvalidModel("x_box does not match x_vars");
}

double PotentialFn::operator()(double t, const std::vector<double>& x) const {
  Bindings b{{t_var, t}};
  for (std::size_t i = 0; i < x_vars.size() && i < x.size(); ++i) b[x_vars[i]] = x[i];
  return evaluate(expr, b);
}

CompiledExpr PotentialFn::compile() const {
  std::vector<std::string> vars{t_var};
  vars.insert(vars.end(), x_vars.begin(), x_vars.end());
  return CompiledExpr(expr, vars);
}

Expr log_density(const BoundaryModel& m) {
  Expr t = Expr::variable(m.t_var);
  return m.a / Expr::constant(2.0) * ln(t) + m.phi;
}

PotentialFn effective_potential(const BoundaryModel& m) {
  m.validate();
  PotentialFn v;
  v.t_var = m.t_var;
  v.x_vars = m.x_vars;
  v.box = m.box;
  v.eps = m.eps;
  Expr t = Expr::variable(m.t_var);
  Expr a = fold(m.a), phi = fold(m.phi);
  if (a.is_constant() && phi.is_constant()) {
    double c = (a.value() * a.value() - 2.0 * a.value()) / 4.0;
    v.expr = Expr::constant(c) / pow(t, Expr::constant(2.0));
    v.provenance = "(a^2 - 2a)/(4t^2) with a = " + print(a);
    return v;
  }
  Expr theta = log_density(m);
  Expr d1 = differentiate(theta, m.t_var);
  Expr d2 = differentiate(d1, m.t_var);
  v.expr = pow(d1, Expr::constant(2.0)) + d2;
  v.provenance = "(d_t vartheta)^2 + d_t^2 vartheta, vartheta = " + print(theta);
  return v;
}

BoundaryModel cone_model(int n, double alpha, double eps) {
  if (n < 2) throw InvalidDimension("cone dimension must be >= 2, got " + std::to_string(n));
  BoundaryModel m;
  m.dim = n;
  m.a = Expr::constant((n - 1) * alpha);
  m.phi = Expr::constant(0.0);
  m.eps = eps;
  return m;
}

BoundaryModel fermi_model(int n, int k, const Expr& b, std::vector<std::string> x_vars,
                          double eps) {
  if (n < 2 || k < 0 || k >= n)
    throw InvalidDimension("need n >= 2 and 0 <= k < n, got n=" + std::to_string(n) +
                           " k=" + std::to_string(k));
  BoundaryModel m;
  m.dim = n;
  m.a = Expr::constant(n - k - 1);
  m.phi = Expr::constant(0.5) * ln(b);
  m.eps = eps;
  m.box = Box::unit(x_vars);
  m.x_vars = std::move(x_vars);
  return m;
}

LeadingBehavior leading_behavior(const PotentialFn& v, const std::vector<double>& x0, double eps,
                                 int levels) {
  std::vector<long double> ts, ys;
  CompiledExpr f = v.compile();
  std::vector<double> buf(1 + x0.size());
  std::copy(x0.begin(), x0.end(), buf.begin() + 1);
  for (int j = 0; j <= levels; ++j) {
    double t = std::ldexp(eps, -j);
    buf[0] = t;
    double val = f.eval(buf);
    if (!std::isfinite(val))
      throw NonFiniteSample("V_eff not finite at t=" + std::to_string(t));
    ts.push_back(t);
    ys.push_back(static_cast<long double>(t) * t * val);
  }
  long double n = ts.size(), tm = 0, ym = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    tm += ts[j];
    ym += ys[j];
  }
  tm /= n;
  ym /= n;
  long double stt = 0, sty = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    stt += (ts[j] - tm) * (ts[j] - tm);
    sty += (ts[j] - tm) * (ys[j] - ym);
  }
  long double slope = stt > 0 ? sty / stt : 0;
  LeadingBehavior out;
  out.c2_hat = static_cast<double>(ym - slope * tm);
  out.kappa_hat = static_cast<double>(-slope);
  long double scale = 0, worst = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    scale = std::max(scale, std::fabs(ys[j]));
    long double fit = out.c2_hat - out.kappa_hat * ts[j];
    worst = std::max(worst, std::fabs(ys[j] - fit));
  }
  out.quality = scale > 0 ? static_cast<double>(worst / scale) : 0.0;
  return out;
}

}  // namespace qcomp
