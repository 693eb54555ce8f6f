#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace qcomp::ode {

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0: pick from the interval length
  double min_step_abs = 0.0;
  double min_step_rel = 1e-14;  // relative to |s|
  long max_steps = 2'000'000;
};

enum class Status { Done, Stopped, StepUnderflow, MaxSteps };

template <std::size_t N>
using State = std::array<double, N>;

// Dormand-Prince 5(4) with FSAL.  Integrates from s0 towards s1 (either
// direction).  obs(s, y, dy) is called after every accepted step; returning
// false stops the integration.  On return y holds the state at s.
template <std::size_t N, class F, class Obs>
Status integrate(F&& f, double& s, State<N>& y, double s1, Obs&& obs, const Options& opt = {}) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = s1 >= s ? 1.0 : -1.0;
  double h = opt.initial_step > 0 ? opt.initial_step : std::fabs(s1 - s) * 1e-3;
  if (h == 0.0) return Status::Done;
  State<N> k1 = f(s, y), k2, k3, k4, k5, k6, k7, tmp, ynew;
  for (long step = 0; step < opt.max_steps; ++step) {
    double remaining = std::fabs(s1 - s);
    if (remaining == 0.0) return Status::Done;
    bool last = h >= remaining;
    if (last) h = remaining;
    double floor = std::max(opt.min_step_abs, opt.min_step_rel * std::fabs(s));
    if (h < floor && !last) return Status::StepUnderflow;
    const double hs = dir * h;
    auto stage = [&](auto&& combo) {
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * combo(i);
    };
    stage([&](std::size_t i) { return a21 * k1[i]; });
    k2 = f(s + c2 * hs, tmp);
    stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
    k3 = f(s + c3 * hs, tmp);
    stage([&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
    k4 = f(s + c4 * hs, tmp);
    stage([&](std::size_t i) {
      return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
    });
    k5 = f(s + c5 * hs, tmp);
    stage([&](std::size_t i) {
      return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
    });
    k6 = f(s + hs, tmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    double snew = last ? s1 : s + hs;
    k7 = f(snew, ynew);
    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                        e7 * k7[i]);
      double sc = opt.atol + opt.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      err = std::max(err, std::fabs(ei) / sc);
      finite = finite && std::isfinite(ynew[i]) && std::isfinite(k7[i]);
    }
    if (!finite) err = 1e10;
    if (err <= 1.0) {
      s = snew;
      y = ynew;
      k1 = k7;
      if (!obs(s, y, k1)) return Status::Stopped;
      if (last) return Status::Done;
    }
    double fac = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
    h *= std::clamp(fac, 0.2, 5.0);
  }
  return Status::MaxSteps;
}

}  // namespace qcomp::ode
