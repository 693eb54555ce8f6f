#include "qcomp/ars.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <utility>

#include "qcomp/errors.hpp"

namespace qcomp {

std::string to_string(Regularity::Kind k) {
  switch (k) {
    case Regularity::Kind::Regular: return "Regular";
    case Regularity::Kind::NonRegular: return "NonRegular";
    case Regularity::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

int GeneratingFamily::t_index() const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == t_var) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> GeneratingFamily::x_vars() const {
  std::vector<std::string> out;
  for (const auto& v : vars)
    if (v != t_var) out.push_back(v);
  return out;
}

void GeneratingFamily::validate() const {
  if (vars.empty()) throw InvalidModel("no variables");
  if (fields.empty()) throw InvalidModel("no fields");
  for (const auto& f : fields)
    if (f.size() != vars.size())
      throw InvalidModel("field has " + std::to_string(f.size()) + " components, expected " +
                         std::to_string(vars.size()));
  if (!t_var.empty() && t_index() < 0) throw InvalidModel("t_var '" + t_var + "' is not a variable");
  for (int i : det_fields)
    if (i < 0 || i >= static_cast<int>(fields.size()))
      throw InvalidModel("det_fields index out of range");
  if (!t_var.empty() && box.dim() != vars.size() - 1)
    throw InvalidModel("box must cover the non-t variables");
}

GeneratingFamily GeneratingFamily::from_strings(std::vector<std::string> vars,
                                                const std::vector<std::vector<std::string>>& fields,
                                                std::string t_var) {
  GeneratingFamily f;
  f.vars = std::move(vars);
  f.t_var = std::move(t_var);
  for (const auto& comps : fields) {
    PolyVectorField x;
    for (const auto& c : comps) x.push_back(Polynomial::from_expr(parse(c), f.vars));
    f.fields.push_back(std::move(x));
  }
  f.box = Box::unit(f.t_var.empty() ? f.vars : f.x_vars());
  f.validate();
  return f;
}

// ---------------------------------------------------------------- growth vector

namespace {

using Key = std::pair<std::size_t, Polynomial::Monomial>;
using SparseVec = std::map<Key, Rational>;

SparseVec flatten(const PolyVectorField& x) {
  SparseVec v;
  for (std::size_t j = 0; j < x.size(); ++j)
    for (const auto& [m, c] : x[j].terms()) v.emplace(Key{j, m}, c);
  return v;
}

// Echelon basis over Q keyed by leading (largest) key.
class SparseEchelon {
public:
  bool insert(SparseVec v) {
    while (!v.empty()) {
      auto lead = std::prev(v.end());
      auto it = rows_.find(lead->first);
      if (it == rows_.end()) {
        rows_.emplace(lead->first, std::move(v));
        return true;
      }
      Rational f = lead->second / it->second.at(lead->first);
      for (const auto& [k, c] : it->second) {
        Rational& slot = v[k];
        slot -= f * c;
        if (slot == 0) v.erase(k);
      }
    }
    return false;
  }

private:
  std::map<Key, SparseVec> rows_;
};

class DenseEchelon {
public:
  explicit DenseEchelon(std::size_t n) : n_(n) {}
  void insert(std::vector<Rational> v) {
    for (const auto& [col, row] : rows_) {
      if (v[col] == 0) continue;
      Rational f = v[col] / row[col];
      for (std::size_t k = 0; k < n_; ++k) v[k] -= f * row[k];
    }
    for (std::size_t k = 0; k < n_; ++k) {
      if (v[k] != 0) {
        // keep rows fully reduced so the pivot columns stay independent
        for (auto& [col, row] : rows_) {
          if (row[k] == 0) continue;
          Rational f = row[k] / v[k];
          for (std::size_t j = 0; j < n_; ++j) row[j] -= f * v[j];
        }
        rows_.emplace_back(k, std::move(v));
        return;
      }
    }
  }
  std::size_t rank() const { return rows_.size(); }

private:
  std::size_t n_;
  std::vector<std::pair<std::size_t, std::vector<Rational>>> rows_;
};

}  // namespace

std::vector<int> growth_vector(const GeneratingFamily& f, const std::vector<Rational>& q,
                               int max_step) {
  f.validate();
  const std::size_t n = f.dim();
  if (q.size() != n) throw InvalidModel("point has wrong dimension");
  SparseEchelon span;
  DenseEchelon at_q(n);
  std::vector<PolyVectorField> layer;
  for (const auto& x : f.fields)
    if (span.insert(flatten(x))) layer.push_back(x);
  std::vector<int> ks;
  for (int step = 1; step <= max_step; ++step) {
    for (const auto& y : layer) {
      std::vector<Rational> v(n);
      for (std::size_t j = 0; j < n; ++j) v[j] = y[j].evaluate(q);
      at_q.insert(std::move(v));
    }
    ks.push_back(static_cast<int>(at_q.rank()));
    if (at_q.rank() == n) return ks;
    std::vector<PolyVectorField> next;
    for (const auto& y : layer) {
      for (const auto& x : f.fields) {
        PolyVectorField z = lie_bracket(y, x);
        if (span.insert(flatten(z))) next.push_back(std::move(z));
      }
    }
    if (next.empty())
      throw NotBracketGenerating("bracket flag stalls at rank " + std::to_string(at_q.rank()));
    layer = std::move(next);
  }
  throw NotBracketGenerating("rank " + std::to_string(at_q.rank()) + " < " + std::to_string(n) +
                             " after " + std::to_string(max_step) + " bracket steps");
}

// ---------------------------------------------------------------- determinant

Polynomial det_xi(const GeneratingFamily& f) {
  f.validate();
  const std::size_t n = f.dim();
  std::vector<int> rows = f.det_fields;
  if (rows.empty()) {
    if (f.fields.size() != n)
      throw NotSquare(std::to_string(f.fields.size()) + " fields in dimension " + std::to_string(n) +
                      "; declare det_fields");
    for (std::size_t i = 0; i < n; ++i) rows.push_back(static_cast<int>(i));
  }
  if (rows.size() != n) throw NotSquare("det_fields must list exactly n fields");
  std::map<unsigned long, Polynomial> memo;
  std::function<Polynomial(unsigned long)> minor = [&](unsigned long mask) -> Polynomial {
    std::size_t r = static_cast<std::size_t>(__builtin_popcountl(mask));
    if (r == n) return Polynomial::constant(n, 1);
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    Polynomial sum(n);
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
      if (mask & (1ul << c)) continue;
      const Polynomial& a = f.fields[rows[r]][c];
      if (!a.is_zero()) {
        Polynomial term = a * minor(mask | (1ul << c));
        sum = sign > 0 ? sum + term : sum - term;
      }
      sign = -sign;
    }
    memo.emplace(mask, sum);
    return sum;
  };
  return minor(0);
}

// ---------------------------------------------------------------- regularity

namespace {

// Rational grid over the box, 41 points per variable when affordable.
void for_each_grid_point(const Box& box, const std::function<bool(const std::vector<Rational>&)>& fn) {
  const std::size_t d = box.dim();
  std::size_t m = 41;
  while (d > 0 && m > 2 && std::pow(static_cast<double>(m), static_cast<double>(d)) > 2e5) --m;
  std::vector<Rational> lo(d), step(d);
  for (std::size_t k = 0; k < d; ++k) {
    lo[k] = Rational(box.bounds[k].first);
    step[k] = (Rational(box.bounds[k].second) - lo[k]) / static_cast<long>(m - 1);
  }
  std::vector<std::size_t> idx(d, 0);
  std::vector<Rational> x(d);
  for (;;) {
    for (std::size_t k = 0; k < d; ++k) x[k] = lo[k] + step[k] * static_cast<long>(idx[k]);
    if (!fn(x)) return;
    std::size_t k = 0;
    while (k < d && ++idx[k] == m) idx[k++] = 0;
    if (k == d) return;
  }
}

std::vector<Rational> with_t(const std::vector<Rational>& x, int ti, const Rational& t) {
  std::vector<Rational> p(x.begin(), x.end());
  p.insert(p.begin() + ti, t);
  return p;
}

std::string point_str(const std::vector<Rational>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + p[i].get_str();
  return s + ")";
}

}  // namespace

Regularity regularity_check(const GeneratingFamily& f) {
  f.validate();
  const int ti = f.t_index();
  if (ti < 0) throw InvalidModel("regularity check needs t_var");
  Polynomial det = det_xi(f);
  if (det.is_zero()) throw ZNotHypersurface("det vanishes identically");
  Regularity r;
  r.k = static_cast<int>(det.min_degree(ti));
  Polynomial u = det.divide_by_power(ti, r.k);

  bool vanishes = false, tangent = false;
  std::vector<Rational> where;
  for_each_grid_point(f.box, [&](const std::vector<Rational>& x) {
    std::vector<Rational> p = with_t(x, ti, 0);
    if (u.evaluate(p) == 0) {
      vanishes = true;
      where = p;
      return false;
    }
    bool transverse = std::any_of(f.fields.begin(), f.fields.end(),
                                  [&](const PolyVectorField& X) { return X[ti].evaluate(p) != 0; });
    if (!transverse) {
      tangent = true;
      where = p;
      return false;
    }
    return true;
  });

  if (r.k == 0) {
    if (vanishes)
      throw ZNotHypersurface("det has no factor of " + f.t_var + " but vanishes at " + point_str(where));
    r.kind = Regularity::Kind::Inconclusive;
    r.reason = "det does not vanish on {" + f.t_var + " = 0}";
    return r;
  }
  const std::string t_pow = r.k == 1 ? f.t_var : f.t_var + "^" + std::to_string(r.k);
  if (vanishes) {
    r.kind = Regularity::Kind::NonRegular;
    r.reason = "det = " + t_pow + " u with u = 0 at " + point_str(where);
    return r;
  }
  if (tangent) {
    r.kind = Regularity::Kind::NonRegular;
    r.reason = "tangency point at " + point_str(where);
    return r;
  }
  r.kind = Regularity::Kind::Regular;
  r.reason = "det = " + t_pow + " u with u != 0 on the sampled {" + f.t_var + " = 0}";
  return r;
}

// ---------------------------------------------------------------- effective potential

PotentialFn ars_effective_potential(const GeneratingFamily& f) {
  f.validate();
  const int ti = f.t_index();
  if (ti < 0) throw NotNormalForm("t_var is not set");
  const std::size_t n = f.dim();
  bool has_dt = false;
  for (const auto& X : f.fields) {
    bool is_dt = true;
    for (std::size_t j = 0; j < n; ++j) {
      Polynomial want = Polynomial::constant(n, j == static_cast<std::size_t>(ti) ? 1 : 0);
      if (!(X[j] == want)) is_dt = false;
    }
    if (is_dt && !has_dt) {
      has_dt = true;
      continue;
    }
    if (!X[ti].is_zero())
      throw NotNormalForm("a field other than d/d" + f.t_var + " has a " + f.t_var + "-component");
  }
  if (!has_dt) throw NotNormalForm("no field equals d/d" + f.t_var);

  Polynomial det = det_xi(f);
  if (det.is_zero()) throw DegenerateDensity("det vanishes identically");
  int k = static_cast<int>(det.min_degree(ti));
  Polynomial u = det.divide_by_power(ti, k);

  // u must not vanish for t > 0 on the sampled box
  std::vector<std::string> xv = f.x_vars();
  auto xs = latin_hypercube(f.box, 256, 7);
  // the box is connected, so a sign change means a zero
  for (double t : geometric_grid(f.eps, 6, 1)) {
    bool pos = false, neg = false;
    for (const auto& x : xs) {
      std::vector<double> p(x.begin(), x.end());
      p.insert(p.begin() + ti, t);
      double v = u.evaluate(p);
      pos |= v > 0;
      neg |= v < 0;
      if (v == 0.0 || (pos && neg))
        throw DegenerateDensity("det vanishes at t = " + std::to_string(t) + " > 0");
    }
  }

  BoundaryModel m;
  m.dim = static_cast<int>(n);
  m.t_var = f.t_var;
  m.x_vars = xv;
  m.box = f.box;
  m.eps = f.eps;
  m.a = Expr::constant(-k);
  bool constant_u = u.terms().size() == 1 && u.terms().begin()->first == Polynomial::Monomial(n, 0);
  m.phi = constant_u ? Expr::constant(0.0)
                     : Expr::constant(-0.5) * ln(apply(Op::Abs, u.to_expr(f.vars)));
  PotentialFn p = effective_potential(m);
  p.provenance = "volume dt dx/|det|, det = " + det.to_string(f.vars) + "; " + p.provenance;
  return p;
}

CriterionVerdict classify_ars(const GeneratingFamily& f, const SamplingOptions& opt) {
  Regularity reg = regularity_check(f);
  if (reg.kind == Regularity::Kind::Regular) {
    CriterionVerdict v;
    v.criterion = "ars";
    v.verdict = Verdict::Holds;
    v.reason = "regular almost-Riemannian structure: " + reg.reason;
    v.evidence["k"] = reg.k;
    return v;
  }
  CriterionVerdict v = check_main(ars_effective_potential(f), opt);
  v.criterion = "ars";
  v.evidence["k"] = reg.k;
  std::string why = to_string(reg.kind) + " (" + reg.reason + ")";
  if (v.verdict == Verdict::Holds) {
    v.reason = why + "; effective-potential criterion holds: " + v.reason;
  } else {
    // failure of a sufficient condition says nothing about self-adjointness
    v.reason = why + "; effective-potential criterion does not apply: " + v.reason;
    v.verdict = Verdict::Inconclusive;
  }
  return v;
}

}  // namespace qcomp
