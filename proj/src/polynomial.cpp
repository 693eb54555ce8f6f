#include "qcomp/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <functional>

#include "qcomp/errors.hpp"

namespace qcomp {

Rational parse_rational(std::string_view text) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
  std::string digits;
  long exp10 = 0;
  bool any = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    digits += text[i++];
    any = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits += text[i++];
      --exp10;
      any = true;
    }
  }
  if (!any) throw InvalidModel("not a number: '" + std::string(text) + "'");
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    std::string e(text.substr(i));
    try {
      exp10 += std::stol(e);
    } catch (const std::exception&) {
      throw InvalidModel("bad exponent in '" + std::string(text) + "'");
    }
    i = text.size();
  }
  if (i != text.size()) throw InvalidModel("not a number: '" + std::string(text) + "'");
  mpz_class num(digits, 10), ten = 1;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  Rational r = exp10 >= 0 ? Rational(num * ten) : Rational(num, ten);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m[i] = 1;
  p.add_term(m, 1);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial r(nvars_);
  if (c == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r(nvars_);
  Monomial m(nvars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      for (std::size_t k = 0; k < nvars_; ++k) m[k] = ma[k] + mb[k];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::derivative(std::size_t i) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    Monomial d = m;
    --d[i];
    r.add_term(d, c * m[i]);
  }
  return r;
}

Rational Polynomial::evaluate(const std::vector<Rational>& x) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (m[k] == 0) continue;
      mpq_class pw;
      mpz_pow_ui(pw.get_num_mpz_t(), x[k].get_num_mpz_t(), m[k]);
      mpz_pow_ui(pw.get_den_mpz_t(), x[k].get_den_mpz_t(), m[k]);
      term *= pw;
    }
    sum += term;
  }
  return sum;
}

double Polynomial::evaluate(const std::vector<double>& x) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double term = c.get_d();
    for (std::size_t k = 0; k < nvars_; ++k)
      if (m[k] != 0) term *= std::pow(x[k], static_cast<int>(m[k]));
    sum += term;
  }
  return sum;
}

unsigned Polynomial::min_degree(std::size_t i) const {
  if (terms_.empty()) return 0;
  unsigned lo = ~0u;
  for (const auto& [m, c] : terms_) lo = std::min(lo, m[i]);
  return lo;
}

Polynomial Polynomial::divide_by_power(std::size_t i, unsigned j) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[i] < j) throw InvalidModel("polynomial not divisible by the requested power");
    Monomial d = m;
    d[i] -= j;
    r.add_term(d, c);
  }
  return r;
}

Polynomial Polynomial::set_zero(std::size_t i) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_)
    if (m[i] == 0) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::from_expr(const Expr& e, const std::vector<std::string>& vars) {
  const std::size_t n = vars.size();
  std::function<Polynomial(const Expr&)> go = [&](const Expr& x) -> Polynomial {
    switch (x.op()) {
      case Op::Const:
        if (!x.literal().empty()) return constant(n, parse_rational(x.literal()));
        if (!std::isfinite(x.value())) throw InvalidModel("non-finite coefficient");
        return constant(n, Rational(x.value()));
      case Op::Var: {
        for (std::size_t i = 0; i < n; ++i)
          if (vars[i] == x.name()) return variable(n, i);
        throw InvalidModel("unknown variable '" + x.name() + "' in polynomial");
      }
      case Op::Neg: return -go(x.args()[0]);
      case Op::Add: return go(x.args()[0]) + go(x.args()[1]);
      case Op::Sub: return go(x.args()[0]) - go(x.args()[1]);
      case Op::Mul: return go(x.args()[0]) * go(x.args()[1]);
      case Op::Div: {
        Polynomial d = go(x.args()[1]);
        if (d.is_zero()) throw InvalidModel("division by zero in polynomial");
        if (d.terms_.size() != 1 || d.terms_.begin()->first != Monomial(n, 0))
          throw InvalidModel("polynomial division by a non-constant");
        return go(x.args()[0]).scaled(1 / d.terms_.begin()->second);
      }
      case Op::Pow: {
        Polynomial ex = go(x.args()[1]);
        Rational k = ex.is_zero() ? Rational(0) : ex.terms_.begin()->second;
        bool constant_exp = ex.is_zero() ||
                            (ex.terms_.size() == 1 && ex.terms_.begin()->first == Monomial(n, 0));
        if (!constant_exp || k.get_den() != 1 || k < 0 || k > 1000)
          throw InvalidModel("polynomial exponent must be a small non-negative integer");
        Polynomial base = go(x.args()[0]), r = constant(n, 1);
        for (long i = 0; i < k.get_num().get_si(); ++i) r = r * base;
        return r;
      }
      default: throw InvalidModel("'" + op_name(x.op()) + "' is not allowed in a polynomial");
    }
  };
  return go(e);
}

Expr Polynomial::to_expr(const std::vector<std::string>& vars) const {
  Expr sum = Expr::constant(0.0);
  for (const auto& [m, c] : terms_) {
    Expr term = Expr::constant(c.get_d());
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (m[k] == 0) continue;
      Expr v = Expr::variable(vars[k]);
      term = term * (m[k] == 1 ? v : pow(v, Expr::constant(m[k])));
    }
    sum = sum + term;
  }
  return sum;
}

std::string Polynomial::to_string(const std::vector<std::string>& vars) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  // highest total degree first reads more naturally
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational a = abs(c);
    if (first) out += c < 0 ? "-" : "";
    else out += c < 0 ? " - " : " + ";
    first = false;
    std::string mono;
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (m[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars[k];
      if (m[k] > 1) mono += "^" + std::to_string(m[k]);
    }
    std::string coef = a.get_str();
    if (mono.empty()) out += coef;
    else if (a == 1) out += mono;
    else out += (a.get_den() == 1 ? coef : "(" + coef + ")") + "*" + mono;
  }
  return out;
}

PolyVectorField lie_bracket(const PolyVectorField& x, const PolyVectorField& y) {
  const std::size_t n = x.size();
  std::size_t nv = n ? x[0].nvars() : 0;
  PolyVectorField out(n, Polynomial(nv));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!x[i].is_zero()) out[j] = out[j] + x[i] * y[j].derivative(i);
      if (!y[i].is_zero()) out[j] = out[j] - y[i] * x[j].derivative(i);
    }
  }
  return out;
}

}  // namespace qcomp
