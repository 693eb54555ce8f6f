#include <gmpxx.h>

#include <cmath>

#include "doctest.h"
#include "qcomp/effpot.hpp"
#include "qcomp/errors.hpp"

using namespace qcomp;

namespace {

// Exact least squares of y = c - kappa t over dyadic t_j = eps 2^-j for
// t^2 V = c2 + c1 t + c0 t^2.
struct ExactFit {
  double c, kappa, quality;
};

ExactFit exact_fit(double c2, double c1, double c0, double eps, int levels) {
  std::vector<mpq_class> ts, ys;
  mpq_class e(eps);
  for (int j = 0; j <= levels; ++j) {
    mpq_class t = e;
    mpz_class p = 1;
    p <<= j;
    t /= p;
    ts.push_back(t);
    ys.push_back(mpq_class(c2) + mpq_class(c1) * t + mpq_class(c0) * t * t);
  }
  mpq_class n = static_cast<long>(ts.size()), tm = 0, ym = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    tm += ts[j];
    ym += ys[j];
  }
  tm /= n;
  ym /= n;
  mpq_class stt = 0, sty = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    stt += (ts[j] - tm) * (ts[j] - tm);
    sty += (ts[j] - tm) * (ys[j] - ym);
  }
  mpq_class slope = sty / stt, c = ym - slope * tm;
  mpq_class worst = 0, scale = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    mpq_class r = abs(ys[j] - (c + slope * ts[j]));
    if (r > worst) worst = r;
    if (abs(ys[j]) > scale) scale = abs(ys[j]);
  }
  return {c.get_d(), -slope.get_d(), mpq_class(worst / scale).get_d()};
}

}  // namespace

TEST_CASE("cone exponents") {
  CHECK(fold(cone_model(2, -1.0).a).is_constant(-1.0));
  CHECK(fold(cone_model(2, 0.0).a).is_constant(0.0));
  CHECK(fold(cone_model(3, 1.5).a).is_constant(3.0));
  CHECK_THROWS_AS(cone_model(1, 1.0), InvalidDimension);
}

TEST_CASE("constant exponents") {
  BoundaryModel m = cone_model(2, -1.0);
  PotentialFn v = effective_potential(m);
  CHECK(v(0.5) == 3.0);
  CHECK(v(0.1) == doctest::Approx(75.0).epsilon(1e-14));
  PotentialFn z = effective_potential(cone_model(2, 0.0));
  CHECK(z(0.3) == 0.0);
  CHECK(z(1e-5) == 0.0);
}

TEST_CASE("symbolic path agrees with the constant fast path") {
  BoundaryModel m = cone_model(3, 0.7);
  m.phi = parse("0*t");  // defeats the fast path only if folding keeps it
  m.a = parse("1.4 + 0*x");
  m.x_vars = {"x"};
  m.box = Box::unit(m.x_vars);
  PotentialFn v = effective_potential(m);
  for (double t : {1.0, 0.3, 1e-3}) {
    double want = (1.4 * 1.4 - 2.8) / (4 * t * t);
    CHECK(v(t, {0.2}) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("example with t^m (t^l + f)^k matches the closed-form remainder") {
  // independent oracle: V = (a^2 - 2a)/(4t^2) + R/t with R written out by hand
  for (auto [m, k, l] : {std::tuple{-1.0, -1.0, 2.0}, {-1.0, -1.0, 4.0}, {3.0, 2.0, 1.0}, {-2.0, -0.5, 3.0}}) {
    BoundaryModel bm;
    bm.dim = 2;
    bm.a = Expr::constant(m);
    bm.phi = parse(std::to_string(k / 2) + "*ln(t^" + std::to_string(l) + " + x^2)");
    bm.x_vars = {"x"};
    bm.box = Box::unit(bm.x_vars);
    PotentialFn v = effective_potential(bm);
    for (double t : {0.9, 0.2, 0.01}) {
      for (double x : {0.3, -0.8}) {
        double f = x * x, tl = std::pow(t, l);
        double R = k * l * std::pow(t, l - 1) * ((k * l + 2 * m - 2) * tl + 2 * (l + m - 1) * f) /
                   (4 * (tl + f) * (tl + f));
        double want = (m * m - 2 * m) / (4 * t * t) + R / t;
        CHECK(v(t, {x}) == doctest::Approx(want).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("validation") {
  BoundaryModel bm = cone_model(2, 1.0);
  bm.a = parse("t");
  CHECK_THROWS_AS(effective_potential(bm), InvalidModel);
  bm.a = parse("y");
  CHECK_THROWS_AS(effective_potential(bm), InvalidModel);
  bm = cone_model(2, 1.0);
  bm.eps = 0.0;
  CHECK_THROWS_AS(effective_potential(bm), InvalidModel);
  bm.dim = 1;
  CHECK_THROWS_AS(bm.validate(), InvalidDimension);
}

TEST_CASE("fermi model of a stratum") {
  BoundaryModel f = fermi_model(5, 1, parse("1 + t*x^2"), {"x"});
  CHECK(fold(f.a).is_constant(3.0));
  PotentialFn v = effective_potential(f);
  // flat normal bundle: b = 1 gives the pure codimension term
  PotentialFn flat = effective_potential(fermi_model(5, 1, parse("1"), {"x"}));
  CHECK(flat(0.5, {0.0}) == doctest::Approx((9.0 - 6.0) / (4 * 0.25)));
  CHECK(v(0.5, {0.0}) == doctest::Approx(flat(0.5, {0.0})));
  CHECK_THROWS_AS(fermi_model(3, 3, parse("1"), {}), InvalidDimension);
}

TEST_CASE("leading behaviour against exact least squares") {
  PotentialFn v;
  v.expr = parse("3/(4*t^2)");
  LeadingBehavior lb = leading_behavior(v, {}, 1.0);
  CHECK(std::abs(lb.c2_hat - 0.75) < 1e-9);
  CHECK(std::abs(lb.kappa_hat) < 1e-9);

  v.expr = parse("0");
  lb = leading_behavior(v, {}, 1.0);
  CHECK(lb.c2_hat == 0.0);
  CHECK(lb.kappa_hat == 0.0);

  v.expr = parse("3/(4*t^2) - 2/t + 5");
  lb = leading_behavior(v, {}, 1.0);
  ExactFit ex = exact_fit(0.75, -2.0, 5.0, 1.0, 40);
  CHECK(lb.c2_hat == doctest::Approx(ex.c).epsilon(1e-9));
  CHECK(lb.kappa_hat == doctest::Approx(ex.kappa).epsilon(1e-9));
  CHECK(lb.quality == doctest::Approx(ex.quality).epsilon(1e-6));
  // on (0, 1] the 5 t^2 term still dominates the slope; the residual says so
  CHECK(lb.quality > 1e-3);

  // with eps small the O(1) remainder drops out of the fit
  lb = leading_behavior(v, {}, 1e-4);
  CHECK(lb.c2_hat == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(lb.kappa_hat == doctest::Approx(2.0).epsilon(1e-3));

  v.expr = parse("ln(t)");
  CHECK_THROWS_AS(leading_behavior(v, {}, 0.0), NonFiniteSample);
}
