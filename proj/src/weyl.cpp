#include "qcomp/weyl.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "qcomp/ode.hpp"

namespace qcomp {

std::string to_string(EndpointClass c) {
  switch (c) {
    case EndpointClass::LimitPoint: return "limit_point";
    case EndpointClass::LimitCircle: return "limit_circle";
    case EndpointClass::Inconclusive: return "inconclusive";
  }
  return "?";
}

EndpointClassification classify_inverse_square(double c) {
  EndpointClassification r;
  double disc = 1.0 + 4.0 * c;
  if (disc >= 0.0) {
    double s = std::sqrt(disc);
    r.p1 = (1.0 + s) / 2.0;
    r.p2 = (1.0 - s) / 2.0;
    r.cls = c >= 0.75 ? EndpointClass::LimitPoint : EndpointClass::LimitCircle;
    return r;
  }
  r.p1 = r.p2 = 0.5;
  r.oscillatory = true;
  r.cls = EndpointClass::LimitCircle;
  r.note = "complex exponents 1/2 +- " + std::to_string(std::sqrt(-disc) / 2.0) + "i";
  return r;
}

namespace {

struct Trace {
  std::vector<double> s, log_rho, theta;
  double theta_span = 0.0;
  bool ok = true;
};

// In s = ln t the system for (u, t u') is linear with matrix [[0,1],[q,1]],
// q = t^2 W.  Polar form (u, t u') = rho (sin theta, cos theta):
//   theta'   = cos^2 - sin cos - q sin^2
//   ln rho'  = sin cos + cos^2 + q sin cos
Trace trace(const std::function<double(double)>& W, double s0, const std::vector<double>& samples,
            double theta0, double tol) {
  Trace tr;
  bool finite = true;
  auto f = [&](double s, const ode::State<2>& y) {
    double t = std::exp(s);
    double q = t * t * W(t);
    if (!std::isfinite(q)) {
      finite = false;
      q = 0.0;
    }
    double sn = std::sin(y[0]), cs = std::cos(y[0]);
    return ode::State<2>{cs * cs - sn * cs - q * sn * sn, sn * cs + cs * cs + q * sn * cs};
  };
  ode::Options o;
  o.rtol = tol;
  o.atol = tol;
  o.min_step_abs = 1e-12;
  o.min_step_rel = 0.0;
  ode::State<2> y{theta0, 0.0};
  double s = s0;
  double theta_first = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    o.initial_step = std::max(1e-3, std::fabs(samples[i] - s) * 0.1);
    auto st = ode::integrate<2>(f, s, y, samples[i],
                                [](double, const ode::State<2>&, const ode::State<2>&) { return true; },
                                o);
    if (st != ode::Status::Done || !finite) {
      tr.ok = false;
      return tr;
    }
    if (i == 0) theta_first = y[0];
    tr.s.push_back(s);
    tr.log_rho.push_back(y[1]);
    tr.theta.push_back(y[0]);
  }
  tr.theta_span = std::fabs(y[0] - theta_first);
  return tr;
}

double slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo,
             std::size_t hi) {
  double n = static_cast<double>(hi - lo), mx = 0, my = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

// ln rho is a pi-periodic function of theta plus the growth term, so when
// theta turns the mean slope is read off over whole half-turns.
double half_turn_slope(const Trace& tr) {
  const double pi = std::numbers::pi;
  double turns = std::floor(tr.theta_span / pi);
  std::size_t best = 1;
  double best_gap = INFINITY;
  for (std::size_t i = 1; i < tr.theta.size(); ++i) {
    double gap = std::fabs(std::fabs(tr.theta[i] - tr.theta[0]) - turns * pi);
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return (tr.log_rho[best] - tr.log_rho[0]) / (tr.s[best] - tr.s[0]);
}

}  // namespace

EndpointClassification classify_endpoint(const std::function<double(double)>& W, double eps,
                                         const EndpointOptions& opt) {
  EndpointClassification r;
  const double s0 = std::log(eps);
  const double s_floor = std::log(opt.floor_ratio * eps);
  const double window = 2.0 * std::log(10.0);
  // samples run from the top of the fitting window down to the floor
  std::vector<double> samples;
  const int n = 201;
  for (int i = 0; i < n; ++i) samples.push_back(s_floor + window * (1.0 - i / (n - 1.0)));

  double est[2];
  bool osc = false;
  for (int k = 0; k < 2; ++k) {
    Trace tr = trace(W, s0, samples, k == 0 ? std::numbers::pi / 2 : 0.0, opt.tol);
    if (!tr.ok) {
      r.note = "integration failed (non-finite potential or step underflow)";
      return r;
    }
    osc = osc || tr.theta_span > std::numbers::pi;
    est[k] = osc ? half_turn_slope(tr) : slope(tr.s, tr.log_rho, 0, tr.s.size());
    if (!osc) {
      double upper = slope(tr.s, tr.log_rho, 0, n / 2 + 1);
      double lower = slope(tr.s, tr.log_rho, n / 2, n);
      if (std::fabs(upper - lower) > 0.02) {
        r.p2 = est[k];
        r.p1 = 1.0 - est[k];
        r.note = "exponent estimate not stabilised over the last two decades";
        return r;
      }
    }
  }
  if (std::fabs(est[0] - est[1]) > 0.02) {
    r.note = "independent solutions give different growth rates";
    return r;
  }
  double p2 = 0.5 * (est[0] + est[1]);
  r.oscillatory = osc;
  if (osc) {
    r.p1 = r.p2 = p2;
    r.note = "oscillatory solutions";
  } else {
    // Abel: the Wronskian in s grows like e^s, so the exponents sum to 1.
    r.p2 = p2;
    r.p1 = 1.0 - p2;
  }
  double d = p2 + 0.5;
  if (std::fabs(d) <= opt.resolution) {
    r.cls = EndpointClass::LimitPoint;
    r.note = "dominant exponent resolved as -1/2: solutions ~ t^{-1/2} are not square integrable";
  } else if (d <= -opt.guard) {
    r.cls = EndpointClass::LimitPoint;
  } else if (d >= opt.guard) {
    r.cls = EndpointClass::LimitCircle;
  } else {
    r.note = "dominant exponent within the guard band around -1/2";
  }
  return r;
}

}  // namespace qcomp
