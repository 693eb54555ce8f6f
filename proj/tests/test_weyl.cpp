#include <cmath>

#include "doctest.h"
#include "qcomp/weyl.hpp"

using namespace qcomp;

TEST_CASE("inverse-square closed form") {
  auto e = classify_inverse_square(0.75);
  CHECK(e.cls == EndpointClass::LimitPoint);
  CHECK(e.p1 == 1.5);
  CHECK(e.p2 == -0.5);
  e = classify_inverse_square(0.0);
  CHECK(e.cls == EndpointClass::LimitCircle);
  CHECK(e.p1 == 1.0);
  CHECK(e.p2 == 0.0);
  e = classify_inverse_square(2.0);
  CHECK(e.cls == EndpointClass::LimitPoint);
  CHECK(e.p1 == doctest::Approx(2.0));
  CHECK(e.p2 == doctest::Approx(-1.0));
  e = classify_inverse_square(-1.0);
  CHECK(e.cls == EndpointClass::LimitCircle);
  CHECK(e.oscillatory);
  CHECK(e.p1 == 0.5);
  CHECK_FALSE(e.note.empty());
  CHECK(classify_inverse_square(0.7499).cls == EndpointClass::LimitCircle);
}

TEST_CASE("numerical classification matches the closed form") {
  for (double c : {-0.2, 0.0, 0.4, 0.76, 2.0, 6.0}) {
    auto exact = classify_inverse_square(c);
    auto num = classify_endpoint([c](double t) { return c / (t * t); }, 1.0);
    CHECK_MESSAGE(num.cls == exact.cls, "c=", c);
    CHECK_MESSAGE(num.p2 == doctest::Approx(exact.p2).epsilon(0.02), "c=", c);
    CHECK_MESSAGE(std::abs(num.p1 - exact.p1) < 0.02, "c=", c);
  }
  auto w34 = classify_endpoint([](double t) { return 0.75 / (t * t); }, 1.0);
  CHECK(w34.cls == EndpointClass::LimitPoint);
  CHECK(w34.p2 == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(classify_endpoint([](double) { return 0.0; }, 1.0).cls == EndpointClass::LimitCircle);
}

TEST_CASE("lower-order terms do not change the class") {
  // 2/t^2 + 7/t: the Coulomb term is subordinate
  auto e = classify_endpoint([](double t) { return 2 / (t * t) + 7 / t; }, 1.0);
  CHECK(e.cls == EndpointClass::LimitPoint);
  CHECK(e.p2 == doctest::Approx(-1.0).epsilon(0.01));
  auto f = classify_endpoint([](double t) { return 0.3 / (t * t) - 4 / t + 1; }, 0.5);
  CHECK(f.cls == EndpointClass::LimitCircle);
}

TEST_CASE("oscillatory potentials are limit circle") {
  auto e = classify_endpoint([](double t) { return -1.0 / (t * t); }, 1.0);
  CHECK(e.cls == EndpointClass::LimitCircle);
  CHECK(e.oscillatory);
}

TEST_CASE("cone zero mode") {
  for (double alpha : {-2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0}) {
    double a = alpha;
    auto e = classify_endpoint([a](double t) { return (a * a - 2 * a) / (4 * t * t); }, 1.0);
    bool lp = alpha <= -1.0 || alpha >= 3.0;
    CHECK_MESSAGE((e.cls == EndpointClass::LimitPoint) == lp, "alpha=", alpha);
    CHECK(e.cls != EndpointClass::Inconclusive);
  }
}
