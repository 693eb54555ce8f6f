#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qcomp/expr.hpp"

namespace qcomp {

using Rational = mpq_class;

// Exact value of a decimal literal such as "12", "-0.25" or "1.5e-3".
Rational parse_rational(std::string_view text);

// Sparse multivariate polynomial with rational coefficients.
class Polynomial {
public:
  using Monomial = std::vector<unsigned>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}
  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t i);
  // Accepts expressions built from numbers, variables, + - * /, and ^ with
  // a non-negative integer exponent.  Division only by nonzero constants.
  static Polynomial from_expr(const Expr& e, const std::vector<std::string>& vars);

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial scaled(const Rational& c) const;
  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

  Polynomial derivative(std::size_t i) const;
  Rational evaluate(const std::vector<Rational>& x) const;
  double evaluate(const std::vector<double>& x) const;
  // Largest j with var_i^j dividing the polynomial (0 for the zero polynomial).
  unsigned min_degree(std::size_t i) const;
  Polynomial divide_by_power(std::size_t i, unsigned j) const;
  Polynomial set_zero(std::size_t i) const;

  Expr to_expr(const std::vector<std::string>& vars) const;
  std::string to_string(const std::vector<std::string>& vars) const;

private:
  void add_term(const Monomial& m, const Rational& c);
  std::size_t nvars_;
  std::map<Monomial, Rational> terms_;
};

// Polynomial vector field: one component per coordinate.
using PolyVectorField = std::vector<Polynomial>;

// [X, Y]^j = sum_i X^i d_i Y^j - Y^i d_i X^j
PolyVectorField lie_bracket(const PolyVectorField& x, const PolyVectorField& y);

}  // namespace qcomp
