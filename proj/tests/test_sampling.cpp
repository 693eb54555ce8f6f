#include <cmath>
#include <set>

#include "doctest.h"
#include "qcomp/sampling.hpp"

using namespace qcomp;

TEST_CASE("geometric grid") {
  auto t = geometric_grid(2.0, 3, 10);
  REQUIRE(t.size() == 31);
  CHECK(t.front() == 2.0);
  CHECK(t.back() == doctest::Approx(2e-3).epsilon(1e-14));
  for (std::size_t i = 1; i < t.size(); ++i)
    CHECK(t[i] / t[i - 1] == doctest::Approx(std::pow(10.0, -0.1)).epsilon(1e-13));
}

TEST_CASE("latin hypercube hits every stratum once per axis") {
  Box b{{"x", "y"}, {{-1.0, 1.0}, {0.0, 4.0}}};
  const int n = 64;
  auto pts = latin_hypercube(b, n, 42);
  REQUIRE(pts.size() == n);
  for (std::size_t k = 0; k < 2; ++k) {
    std::set<int> cells;
    for (const auto& p : pts) {
      double u = (p[k] - b.bounds[k].first) / (b.bounds[k].second - b.bounds[k].first);
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      cells.insert(static_cast<int>(u * n));
    }
    CHECK(cells.size() == n);
  }
  CHECK(latin_hypercube(b, n, 42) == pts);
  CHECK(latin_hypercube(b, n, 43) != pts);
}

TEST_CASE("parallel and serial kernels agree bit for bit") {
  Box b{{"x", "y"}, {{-1.0, 1.0}, {-1.0, 1.0}}};
  // a thin ridge that only polishing finds
  Expr f = parse("t*(sin(3*x*y) + 4*exp(-(x - 0.3)^2/t^2)/(1 + y^2)) - t*x^2");
  CompiledExpr cf(f, {"t", "x", "y"});
  auto t = geometric_grid(1.0, 4, 10);
  auto x = latin_hypercube(b, 50, 7);
  SupProfile par = sup_profile(cf, t, x, b);
  SupProfile ser = sup_profile_serial(cf, t, x, b);
  CHECK(par.sup == ser.sup);
  CHECK(par.argmax == ser.argmax);
  CHECK_FALSE(par.nonfinite);
  CHECK(evaluate_grid(cf, t, x) == evaluate_grid_serial(cf, t, x));
}

TEST_CASE("sup profile is at least the sampled maximum and polishing helps") {
  Box b{{"x"}, {{-1.0, 1.0}}};
  Expr f = parse("-(x - 0.123456)^2");
  CompiledExpr cf(f, {"t", "x"});
  auto x = latin_hypercube(b, 8, 1);
  std::vector<double> t{1.0};
  auto raw = evaluate_grid_serial(cf, t, x);
  double sampled = *std::max_element(raw.begin(), raw.end());
  SupProfile p = sup_profile_serial(cf, t, x, b);
  CHECK(p.sup[0] >= sampled);
  CHECK(p.sup[0] > -1e-12);
  CHECK(p.argmax[0][0] == doctest::Approx(0.123456).epsilon(1e-5));
}

TEST_CASE("continuation follows a ridge that shrinks with t") {
  // peak 1/t at x = t^3/2, width t^3: every fixed sample rounds to 0 below t ~ 1e-2
  Box b{{"x", "y"}, {{-1.0, 1.0}, {-1.0, 1.0}}};
  Expr f = parse("exp(-((x - t^3/2)/t^3)^2)/t + 0*y");
  CompiledExpr cf(f, {"t", "x", "y"});
  auto t = geometric_grid(1.0, 6, 10);
  auto x = latin_hypercube(b, 64, 5);
  SupProfile par = sup_profile(cf, t, x, b), ser = sup_profile_serial(cf, t, x, b);
  CHECK(par.sup == ser.sup);
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK_MESSAGE(par.sup[i] == doctest::Approx(1 / t[i]).epsilon(1e-6), "t=", t[i]);
  SupOptions off;
  off.continuation_sweeps = 0;
  CHECK(sup_profile(cf, t, x, b, off).sup.back() < 1.0);
}

TEST_CASE("non-finite samples are reported") {
  Box b{{"x"}, {{-1.0, 1.0}}};
  CompiledExpr cf(parse("ln(x)"), {"t", "x"});
  auto x = latin_hypercube(b, 16, 3);
  SupProfile p = sup_profile(cf, {1.0, 0.5}, x, b);
  CHECK(p.nonfinite);
  CHECK(p.bad_t == 1.0);
  REQUIRE(p.bad_x.size() == 1);
  CHECK(p.bad_x[0] <= 0.0);
}

TEST_CASE("empty box gives the one-dimensional profile") {
  CompiledExpr cf(parse("1/t"), {"t"});
  SupProfile p = sup_profile(cf, {1.0, 0.1}, {}, Box{});
  CHECK(p.sup == std::vector<double>{1.0, 10.0});
}
