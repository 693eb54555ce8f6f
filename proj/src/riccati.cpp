#include "qcomp/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "qcomp/bessel.hpp"
#include "qcomp/errors.hpp"
#include "qcomp/ode.hpp"

namespace qcomp {

std::string to_string(Asymptote a) {
  switch (a) {
    case Asymptote::ToPlusInfinity: return "to_plus_infinity";
    case Asymptote::ToMinusInfinity: return "to_minus_infinity";
    case Asymptote::InteriorPole: return "interior_pole";
  }
  return "?";
}

// ---------------------------------------------------------------- quadratic

RiccatiSolution solve_quadratic(const QuadraticProblem& p) {
  if (!(p.a > 1.0) || !std::isfinite(p.a))
    throw InvalidProblem("quadratic problem needs a > 1, got " + std::to_string(p.a));
  if (!(p.eps > 0.0)) throw InvalidProblem("eps must be positive");
  if (2.0 * p.a + p.m == 0.0) throw DegenerateDenominator("2a + m = 0");
  const double a = p.a, m = p.m, eps = p.eps;
  RiccatiSolution s;
  s.eps = eps;
  s.h_eps = (1.0 + a + m) / (2.0 * eps);
  s.h = [a, m, eps](double t) {
    double q = std::pow(t / eps, a);
    return ((2.0 * a + m) * (a + 1.0) * q + m * (a - 1.0)) / ((2.0 * a + m) * q - m) / (2.0 * t);
  };
  if (m > 0.0) {
    s.t_star = eps * std::pow(m / (2.0 * a + m), 1.0 / a);
    s.asymptote = Asymptote::InteriorPole;
    s.leading_coefficient = 1.0;
  } else if (m == 0.0) {
    s.asymptote = Asymptote::ToPlusInfinity;
    s.leading_coefficient = (1.0 + a) / 2.0;
  } else {
    s.asymptote = Asymptote::ToMinusInfinity;
    s.leading_coefficient = (1.0 - a) / 2.0;
  }
  return s;
}

// ---------------------------------------------------------------- super-quadratic

namespace {

void check_super(double c, double r, double eps) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidProblem("c must be positive");
  if (!(r > 2.0) || !std::isfinite(r)) throw InvalidProblem("r must exceed 2");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidProblem("eps must be positive");
}

double nu_of(double r) { return 1.0 / (r - 2.0); }
double tau_of(double c, double r, double t) {
  return 2.0 * std::sqrt(c) * std::pow(t, 1.0 - r / 2.0) / (r - 2.0);
}

}  // namespace

double critical_datum(double c, double r, double eps) {
  check_super(c, r, eps);
  BesselIK b = bessel_ik_scaled(nu_of(r), tau_of(c, r, eps));
  return 1.0 / (2.0 * eps) - std::sqrt(c) / std::pow(eps, r / 2.0) * b.dk / b.k;
}

double critical_datum_i(double c, double r, double eps) {
  check_super(c, r, eps);
  BesselIK b = bessel_ik_scaled(nu_of(r), tau_of(c, r, eps));
  return 1.0 / (2.0 * eps) - std::sqrt(c) / std::pow(eps, r / 2.0) * b.di / b.i;
}

RiccatiSolution solve_superquadratic(const SuperQuadraticProblem& p) {
  check_super(p.c, p.r, p.eps);
  if (!std::isfinite(p.h_eps)) throw InvalidProblem("h_eps must be finite");
  const double c = p.c, r = p.r, eps = p.eps, nu = nu_of(r);
  const double tau_e = tau_of(c, r, eps);
  const double hk = critical_datum(c, r, eps), hi = critical_datum_i(c, r, eps);
  BesselIK be = bessel_ik_scaled(nu, tau_e);

  // w = -I_nu + b K_nu.  Everything is carried with I scaled by e^{-tau}
  // and K by e^{tau}; then w e^{-tau} = -Is + B e^{2(tau_e - tau)} Ks.
  enum class Kind { PureK, PureI, Mixed } kind = Kind::Mixed;
  double B = 0.0;
  if (p.h_eps == hk) kind = Kind::PureK;
  else if (p.h_eps == hi) kind = Kind::PureI;
  else B = be.i / be.k * (p.h_eps - hi) / (p.h_eps - hk);

  auto log_ratio = [=](double t) {  // w'(tau)/w(tau)
    double tau = tau_of(c, r, t);
    BesselIK b = bessel_ik_scaled(nu, tau);
    switch (kind) {
      case Kind::PureK: return b.dk / b.k;
      case Kind::PureI: return b.di / b.i;
      case Kind::Mixed: break;
    }
    double damp = B * std::exp(2.0 * (tau_e - tau));
    return (-b.di + damp * b.dk) / (-b.i + damp * b.k);
  };

  RiccatiSolution s;
  s.eps = eps;
  s.h_eps = p.h_eps;
  s.leading_power = r / 2.0;
  s.h = [=](double t) {
    return 1.0 / (2.0 * t) - std::sqrt(c) / std::pow(t, r / 2.0) * log_ratio(t);
  };

  if (p.h_eps < hk) {
    s.asymptote = Asymptote::ToMinusInfinity;
    s.leading_coefficient = -std::sqrt(c);
    return s;
  }
  if (kind == Kind::PureK) {
    // K'/K -> -1, so the critical solution follows the +sqrt(c) branch
    s.asymptote = Asymptote::ToPlusInfinity;
    s.leading_coefficient = std::sqrt(c);
    return s;
  }

  // h_eps > h*: w vanishes at some tau > tau_e.  g increases as t decreases.
  auto g = [=](double t) {
    double tau = tau_of(c, r, t);
    BesselIK b = bessel_ik_scaled(nu, tau);
    return std::log(b.i / b.k) + 2.0 * (tau - tau_e) - std::log(B);
  };
  double hi_t = eps, lo_t = eps;
  bool bracketed = false;
  for (int k = 0; k < 2000; ++k) {
    lo_t *= 0.5;
    if (lo_t == 0.0) break;
    if (g(lo_t) > 0.0) {
      bracketed = true;
      break;
    }
    hi_t = lo_t;
  }
  if (!bracketed || !(g(eps) < 0.0))
    throw BlowUpRootNotBracketed("no sign change of w(tau(t)) on (0, eps)");
  for (int it = 0; it < 500 && hi_t - lo_t > 1e-10 * hi_t; ++it) {
    double mid = 0.5 * (lo_t + hi_t);
    if (g(mid) > 0.0) lo_t = mid;
    else hi_t = mid;
  }
  s.t_star = 0.5 * (lo_t + hi_t);
  s.asymptote = Asymptote::InteriorPole;
  s.leading_coefficient = 1.0;
  s.leading_power = 1.0;
  return s;
}

// ---------------------------------------------------------------- numeric

namespace {

struct Node {
  double t, h, dh;
};

// Piecewise cubic Hermite interpolant over accepted steps.  Segments where
// |h| t is large are interpolated in y = 1/h, which stays smooth near poles.
class Dense {
public:
  explicit Dense(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  double operator()(double t) const {
    const double t_hi = nodes_.front().t, t_lo = nodes_.back().t;
    if (!(t <= t_hi) || !(t >= t_lo))
      throw DomainError("t outside the integrated interval");
    // nodes are ordered by decreasing t
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t,
                               [](const Node& n, double v) { return n.t > v; });
    if (it == nodes_.begin()) return it->h;
    if (it == nodes_.end()) return nodes_.back().h;
    const Node& a = *(it - 1);
    const Node& b = *it;
    if (t == b.t) return b.h;
    double big = std::min(std::fabs(a.h) * a.t, std::fabs(b.h) * b.t);
    if (big > 1.0 && a.h != 0.0 && b.h != 0.0) {
      double ya = 1.0 / a.h, yb = 1.0 / b.h;
      double dya = -a.dh / (a.h * a.h), dyb = -b.dh / (b.h * b.h);
      return 1.0 / hermite(a.t, ya, dya, b.t, yb, dyb, t);
    }
    return hermite(a.t, a.h, a.dh, b.t, b.h, b.dh, t);
  }

private:
  static double hermite(double t0, double y0, double d0, double t1, double y1, double d1,
                        double t) {
    double h = t1 - t0, s = (t - t0) / h;
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * d1;
  }
  std::vector<Node> nodes_;
};

}  // namespace

RiccatiSolution integrate_riccati(const std::function<double(double)>& R, double h_eps,
                                  double eps, double t_min, const IntegrateOptions& opt) {
  if (!(eps > 0.0) || !(t_min > 0.0) || !(t_min < eps))
    throw InvalidProblem("need 0 < t_min < eps");
  if (!std::isfinite(h_eps)) throw InvalidProblem("h_eps must be finite");

  ode::Options o;
  o.rtol = opt.tol;
  o.atol = opt.tol;
  o.min_step_rel = opt.min_step_rel;
  o.initial_step = 1e-4 * (eps - t_min);

  std::vector<Node> nodes{{eps, h_eps, -h_eps * h_eps - R(eps)}};
  double t = eps, h = h_eps;
  bool blown = false;
  double t_star = 0.0;
  constexpr double kToRecip = 100.0, kToDirect = 10.0;

  while (t > t_min && !blown) {
    ode::Status st;
    if (std::fabs(h) * t <= kToRecip) {
      ode::State<1> y{h};
      auto f = [&R](double s, const ode::State<1>& v) {
        return ode::State<1>{-v[0] * v[0] - R(s)};
      };
      st = ode::integrate<1>(f, t, y, t_min,
                             [&](double s, const ode::State<1>& v, const ode::State<1>& dv) {
                               nodes.push_back({s, v[0], dv[0]});
                               if (std::fabs(v[0]) > opt.blow_up) {
                                 blown = true;
                                 t_star = s;
                                 return false;
                               }
                               return std::fabs(v[0]) * s <= kToRecip;
                             },
                             o);
      h = y[0];
    } else {
      ode::State<1> y{1.0 / h};
      auto f = [&R](double s, const ode::State<1>& v) {
        return ode::State<1>{1.0 + R(s) * v[0] * v[0]};
      };
      double prev_t = t, prev_y = y[0];
      st = ode::integrate<1>(
          f, t, y, t_min,
          [&](double s, const ode::State<1>& v, const ode::State<1>& dv) {
            double yy = v[0];
            if (yy == 0.0 || std::signbit(yy) != std::signbit(prev_y) ||
                std::fabs(yy) < 1.0 / opt.blow_up) {
              blown = true;
              if (std::signbit(yy) != std::signbit(prev_y) && yy != 0.0)
                t_star = prev_t + (s - prev_t) * prev_y / (prev_y - yy);
              else
                t_star = s - yy / dv[0];
              return false;
            }
            double hh = 1.0 / yy;
            nodes.push_back({s, hh, -hh * hh - R(s)});
            prev_t = s;
            prev_y = yy;
            return std::fabs(hh) * s >= kToDirect;
          },
          o);
      h = 1.0 / y[0];
      if (blown) t = prev_t;
    }
    if (st == ode::Status::StepUnderflow)
      throw StepUnderflow("step size fell below " + std::to_string(opt.min_step_rel) +
                          " * t at t = " + std::to_string(t));
    if (st == ode::Status::MaxSteps) throw StepUnderflow("step budget exhausted");
  }

  RiccatiSolution s;
  s.eps = eps;
  s.h_eps = h_eps;
  auto dense = std::make_shared<Dense>(nodes);
  s.h = [dense](double tt) { return (*dense)(tt); };
  if (blown) {
    s.t_star = t_star;
    s.asymptote = Asymptote::InteriorPole;
    s.leading_coefficient = 1.0;
  } else {
    s.reached_t_min = true;
    const Node& last = nodes.back();
    s.asymptote = last.h >= 0.0 ? Asymptote::ToPlusInfinity : Asymptote::ToMinusInfinity;
    s.leading_coefficient = last.h * last.t;
  }
  return s;
}

}  // namespace qcomp
