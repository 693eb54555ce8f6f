#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qcomp/bessel.hpp"
#include "qcomp/errors.hpp"

using namespace qcomp;
using std::numbers::pi;

namespace {

// K_nu(z) = int_0^inf e^{-z cosh s} cosh(nu s) ds and its z-derivative.
// The integrand is smooth and even, so the trapezoid rule converges
// exponentially.
std::pair<double, double> k_quad(double nu, double z) {
  double h = 0.005, k = 0.0, dk = 0.0;
  for (int i = 0;; ++i) {
    double s = i * h, c = std::cosh(s);
    if (z * c > 750.0) break;
    double w = (i == 0 ? 0.5 : 1.0) * std::exp(-z * c) * std::cosh(nu * s);
    k += w;
    dk -= w * c;
  }
  return {k * h, dk * h};
}

// I_nu(z) = (1/pi) int_0^pi e^{z cos th} cos(nu th) dth
//           - sin(nu pi)/pi int_0^inf e^{-z cosh s - nu s} ds
std::pair<double, double> i_quad(double nu, double z) {
  const int n = 20000;  // Simpson
  double h = pi / n, a = 0.0, da = 0.0;
  for (int i = 0; i <= n; ++i) {
    double th = i * h;
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    double f = std::exp(z * std::cos(th)) * std::cos(nu * th);
    a += w * f;
    da += w * f * std::cos(th);
  }
  a *= h / 3 / pi;
  da *= h / 3 / pi;
  double sn = std::sin(nu * pi);
  if (sn != 0.0) {
    double hs = 0.005, b = 0.0, db = 0.0;
    for (int i = 0;; ++i) {
      double s = i * hs, c = std::cosh(s);
      if (z * c + nu * s > 750.0) break;
      double w = (i == 0 ? 0.5 : 1.0) * std::exp(-z * c - nu * s);
      b += w;
      db -= w * c;
    }
    // Euler-Maclaurin: subtract h^2/12 (f'(inf) - f'(0)), f'(0) = -nu e^{-z}
    b = b * hs - hs * hs / 12.0 * (nu * std::exp(-z));
    db = db * hs + hs * hs / 12.0 * (nu * std::exp(-z));
    a -= sn / pi * b;
    da -= sn / pi * db;
  }
  return {a, da};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("half-integer closed forms") {
  for (double z : {0.01, 0.5, 1.0, 1.999, 2.0, 2.001, 7.5, 24.0, 26.0, 100.0, 600.0}) {
    BesselIK b = bessel_ik(0.5, z);
    double kk = std::sqrt(pi / (2 * z)) * std::exp(-z);
    double ii = std::sqrt(2 / (pi * z)) * std::sinh(z);
    CHECK(rel(b.k, kk) < 1e-13);
    CHECK(rel(b.i, ii) < 1e-13);
    CHECK(rel(b.dk, -kk * (1 + 1 / (2 * z))) < 1e-13);
    CHECK(rel(b.di, std::sqrt(2 / (pi * z)) * (std::cosh(z) - std::sinh(z) / (2 * z))) < 1e-12);
    CHECK_FALSE(b.log_scaled);
  }
  BesselIK one = bessel_ik(0.5, 1.0);
  CHECK(one.k == doctest::Approx(std::sqrt(pi / 2) * std::exp(-1.0)).epsilon(1e-15));
  CHECK(one.i == doctest::Approx(std::sqrt(2 / pi) * std::sinh(1.0)).epsilon(1e-15));
}

TEST_CASE("quadrature oracle") {
  for (double nu : {0.0, 0.25, 1.0 / 3.0, 0.5, 1.0, 1.7, 2.0, 3.3, 6.5}) {
    for (double z : {0.05, 0.4, 1.0, 1.99, 2.0, 2.5, 5.0, 12.0, 30.0, 60.0}) {
      BesselIK b = bessel_ik(nu, z);
      auto [k, dk] = k_quad(nu, z);
      auto [i, di] = i_quad(nu, z);
      CHECK_MESSAGE(rel(b.k, k) < 1e-11, "K nu=", nu, " z=", z);
      CHECK_MESSAGE(rel(b.dk, dk) < 1e-11, "K' nu=", nu, " z=", z);
      // the representation cancels down to I from O(1) integrals, so the
      // oracle is only good to ~1e-10 absolute when I is tiny; the mpmath
      // table below covers that corner
      CHECK_MESSAGE(std::abs(b.i - i) < 1e-9 * std::max(std::abs(i), 1.0), "I nu=", nu, " z=", z);
      CHECK_MESSAGE(std::abs(b.di - di) < 1e-9 * std::max(std::abs(di), 1.0), "I' nu=", nu, " z=", z);
    }
  }
}

TEST_CASE("small argument, large order against mpmath") {
  // mpmath besseli at 40 digits
  struct Ref {
    double nu, z, i, di;
  } refs[] = {
      {6.5, 0.05, 2.0630674864818486605e-14, 2.6820565006684259384e-12},
      {6.5, 0.4, 1.537721442168018837e-8, 2.5028953640010838177e-7},
      {3.3, 0.05, 5.8352537528677128188e-7, 0.00003851606726528297594},
      {10.0, 1.0, 2.7529480398368736252e-10, 2.7654378229217985378e-9},
      {2.7, 0.001, 2.9309952176385040849e-10, 7.913687483704390507e-7},
      {12.25, 3.0, 1.8826155274384035594e-7, 7.8979883898583590978e-7},
  };
  for (const auto& r : refs) {
    BesselIK b = bessel_ik(r.nu, r.z);
    CHECK_MESSAGE(rel(b.i, r.i) < 1e-13, "nu=", r.nu, " z=", r.z);
    CHECK_MESSAGE(rel(b.di, r.di) < 1e-13, "nu=", r.nu, " z=", r.z);
  }
}

TEST_CASE("Wronskian on a 20 x 20 grid") {
  double worst = 0.0;
  for (int a = 0; a < 20; ++a) {
    double nu = 6.0 * a / 19.0;
    for (int b = 0; b < 20; ++b) {
      double z = 0.01 * std::pow(10.0, 4.0 * b / 19.0);  // 0.01 .. 100
      BesselIK r = bessel_ik(nu, z);
      double w = r.i * r.dk - r.di * r.k;
      worst = std::max(worst, std::abs(w * z + 1.0));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("scaled values and large arguments") {
  BesselIK s = bessel_ik_scaled(1.3, 5.0), u = bessel_ik(1.3, 5.0);
  CHECK(rel(s.i, u.i * std::exp(-5.0)) < 1e-14);
  CHECK(rel(s.k, u.k * std::exp(5.0)) < 1e-14);
  BesselIK big = bessel_ik(0.5, 800.0);
  CHECK(big.log_scaled);
  CHECK(rel(big.k, std::sqrt(pi / 1600.0)) < 1e-13);
  CHECK(rel(big.i, std::sqrt(2 / (pi * 800.0)) * 0.5) < 1e-13);
  CHECK(std::abs(big.i * big.dk - big.di * big.k + 1 / 800.0) < 1e-16);
}

TEST_CASE("domain") {
  CHECK_THROWS_AS(bessel_ik(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_ik(-1.0, 1.0), DomainError);
}
