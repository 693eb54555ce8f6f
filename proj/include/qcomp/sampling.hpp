#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcomp/expr.hpp"

namespace qcomp {

// Axis-aligned box over the transverse variables.
struct Box {
  std::vector<std::string> vars;
  std::vector<std::pair<double, double>> bounds;

  std::size_t dim() const { return vars.size(); }
  static Box unit(const std::vector<std::string>& vars);  // [-1,1]^k
};

// t_i = eps * 10^(-i/per_decade), i = 0..decades*per_decade.
std::vector<double> geometric_grid(double eps, int decades, int per_decade);

// Seeded Latin hypercube sample.  Uses the raw mt19937_64 stream so the
// points do not depend on the standard library's distributions.
std::vector<std::vector<double>> latin_hypercube(const Box& box, int n, std::uint64_t seed);

struct SupOptions {
  int refine_starts = 3;      // best samples polished by pattern search
  int refine_max_evals = 400; // per start
  int continuation_sweeps = 64;  // re-polish each row from its neighbour's argmax
};

// Row-wise supremum of f(t, x) over x, for each t in the grid.
struct SupProfile {
  std::vector<double> t;
  std::vector<double> sup;
  std::vector<std::vector<double>> argmax;
  // set when some grid sample was NaN/inf; the first bad point in
  // (t-index, x-index) order is reported
  bool nonfinite = false;
  double bad_t = 0.0;
  std::vector<double> bad_x;
};

// f is compiled with variable order (t, box.vars...).  sup_profile runs
// the t-rows in parallel with OpenMP; sup_profile_serial is the reference
// implementation and must produce identical output.
SupProfile sup_profile(const CompiledExpr& f, const std::vector<double>& t,
                       const std::vector<std::vector<double>>& x, const Box& box,
                       const SupOptions& opt = {});
SupProfile sup_profile_serial(const CompiledExpr& f, const std::vector<double>& t,
                              const std::vector<std::vector<double>>& x, const Box& box,
                              const SupOptions& opt = {});

// Dense evaluation on the grid, row-major [t][x].  Same parallel/serial split.
std::vector<double> evaluate_grid(const CompiledExpr& f, const std::vector<double>& t,
                                  const std::vector<std::vector<double>>& x);
std::vector<double> evaluate_grid_serial(const CompiledExpr& f, const std::vector<double>& t,
                                         const std::vector<std::vector<double>>& x);

}  // namespace qcomp
