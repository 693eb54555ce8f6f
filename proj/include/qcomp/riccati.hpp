#pragma once

#include <functional>
#include <string>

namespace qcomp {

// Solutions of the backward Riccati problem h' + h^2 + R(t) = 0 on (t*, eps].
enum class Asymptote { ToPlusInfinity, ToMinusInfinity, InteriorPole };
std::string to_string(Asymptote a);

struct RiccatiSolution {
  std::function<double(double)> h;  // defined on (t_star, eps]
  double eps = 1.0;
  double h_eps = 0.0;
  double t_star = 0.0;
  Asymptote asymptote = Asymptote::ToPlusInfinity;
  // h ~ leading_coefficient * (t - t_star)^(-leading_power) as t -> t_star
  double leading_coefficient = 0.0;
  double leading_power = 1.0;
  // integrate_riccati only: the integration reached t_min without blow-up,
  // so t_star = 0 means "no blow-up seen on [t_min, eps]"
  bool reached_t_min = false;

  double operator()(double t) const { return h(t); }
};

// R(t) = -(a^2-1)/(4t^2), h(eps) = (1+a+m)/(2 eps), a > 1.
struct QuadraticProblem {
  double a = 2.0;
  double m = 0.0;
  double eps = 1.0;
};

// R(t) = -c/t^r with r > 2, c > 0.
struct SuperQuadraticProblem {
  double c = 1.0;
  double r = 4.0;
  double eps = 1.0;
  double h_eps = 0.0;
};

RiccatiSolution solve_quadratic(const QuadraticProblem& p);

// Critical datum h*_eps(c, r): the largest h(eps) for which the solution
// of the super-quadratic problem exists on all of (0, eps].
double critical_datum(double c, double r, double eps);
// The companion datum built from I_nu instead of K_nu.
double critical_datum_i(double c, double r, double eps);

RiccatiSolution solve_superquadratic(const SuperQuadraticProblem& p);

struct IntegrateOptions {
  double tol = 1e-10;
  double blow_up = 1e12;
  double min_step_rel = 1e-14;
};

// Adaptive backward integration from eps down to t_min.  Near a pole the
// integrator switches to y = 1/h, which solves y' = 1 + R y^2 and crosses
// zero smoothly.
RiccatiSolution integrate_riccati(const std::function<double(double)>& R, double h_eps,
                                  double eps, double t_min, const IntegrateOptions& opt = {});

}  // namespace qcomp
