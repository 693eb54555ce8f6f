#pragma once

#include <string>
#include <vector>

#include "qcomp/expr.hpp"
#include "qcomp/sampling.hpp"

namespace qcomp {

// Measure near the boundary written as e^{2 vartheta} dt dx with
//   vartheta(t, x) = (a(x)/2) ln t + phi(t, x).
struct BoundaryModel {
  int dim = 2;
  Expr a;
  Expr phi;
  double eps = 1.0;
  std::vector<std::string> x_vars;
  Box box;  // over x_vars; defaults to [-1,1]^k
  std::string t_var = "t";

  void validate() const;
};

// Effective potential as a symbolic expression in (t_var, x_vars...).
struct PotentialFn {
  Expr expr;
  std::string t_var = "t";
  std::vector<std::string> x_vars;
  Box box;
  double eps = 1.0;
  std::string provenance;

  double operator()(double t, const std::vector<double>& x = {}) const;
  CompiledExpr compile() const;
};

Expr log_density(const BoundaryModel& m);
PotentialFn effective_potential(const BoundaryModel& m);

// Model of the cone C = (0, eps) x S^{n-1} with metric dt^2 + t^{2 alpha} g.
BoundaryModel cone_model(int n, double alpha, double eps = 1.0);

// Tubular neighbourhood of a codimension n-k stratum: the Fermi-coordinate
// density t^{n-k-1} b(t, x) dt dx.  b must be positive for t > 0.
BoundaryModel fermi_model(int n, int k, const Expr& b, std::vector<std::string> x_vars,
                          double eps = 1.0);

struct LeadingBehavior {
  double c2_hat = 0.0;
  double kappa_hat = 0.0;
  double quality = 0.0;  // max residual of t^2 V relative to max |t^2 V|
};

// Least-squares fit of t^2 V(t, x0) = c2 - kappa t on t_j = eps 2^-j,
// j = 0..levels.
LeadingBehavior leading_behavior(const PotentialFn& v, const std::vector<double>& x0,
                                 double eps, int levels = 40);

}  // namespace qcomp
