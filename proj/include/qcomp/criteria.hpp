#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcomp/effpot.hpp"
#include "qcomp/expr.hpp"
#include "qcomp/sampling.hpp"

namespace qcomp {

enum class Verdict { Holds, Fails, Inconclusive };
std::string to_string(Verdict v);

struct Witness {
  double t = 0.0;
  std::vector<double> x;
  double value = 0.0;
};

struct CriterionVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::string criterion;
  std::optional<double> kappa_hat;
  std::optional<double> margin;
  std::optional<Witness> witness;
  std::string reason;
  std::map<std::string, double> evidence;
};

struct SamplingOptions {
  int grid_decades = 6;
  int per_decade = 10;
  int x_samples = 128;
  std::uint64_t seed = 20240611;
  bool parallel = true;
  SupOptions sup;
};

// V_eff(t,x) >= 3/(4t^2) - kappa/t near t = 0.
CriterionVerdict check_main(const PotentialFn& p, const SamplingOptions& opt = {});

// a(x) outside (-1, 3) and a d_t phi + t((d_t phi)^2 + d_t^2 phi) >= -kappa.
CriterionVerdict check_measure(const BoundaryModel& m, const SamplingOptions& opt = {});

// Closed form for the cone dt^2 + t^{2 alpha} g_{S^{n-1}}.
CriterionVerdict check_cone(int n, double alpha);

// The zero angular mode of the cone, -u'' + V_eff(t) u, classified
// numerically: limit point maps to Holds, limit circle to Fails.
CriterionVerdict check_cone_zero_mode(int n, double alpha, double eps = 1.0);

struct Stratum {
  int k = 0;  // dimension of the stratum; codimension n - k
  Expr V;     // potential as a function of the distance variable
};

struct KwssModel {
  int n = 2;
  std::vector<Stratum> strata;
  double eps = 1.0;
  std::optional<double> kappa;
  double nu_bound = 0.0;
  std::string d_var = "d";
};

CriterionVerdict check_kwss(const KwssModel& m, const SamplingOptions& opt = {});

struct CurvatureModel {
  int n = 2;
  std::string regime = "quadratic";  // or "superquadratic"
  double a1 = 0.0, a2 = 0.0;         // quadratic regime
  double c1 = 0.0, c2 = 0.0, r = 4.0;  // super-quadratic regime
  double eps = 1.0;
  double h_eps_max = 0.0;  // upper bound for the mean-curvature eigenvalues at eps
};

CriterionVerdict check_quadratic_curvature(const CurvatureModel& m);
CriterionVerdict check_superquadratic_curvature(const CurvatureModel& m);

// V_eff = 1/4 [ (sum h_i)^2 - 2 sum h_i^2 - 2 tr R ].
std::function<double(double)> veff_from_level_sets(std::vector<std::function<double(double)>> h,
                                                   std::function<double(double)> trace_r);

}  // namespace qcomp
