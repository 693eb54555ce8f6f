#pragma once

#include <string>
#include <vector>

#include "qcomp/criteria.hpp"
#include "qcomp/effpot.hpp"
#include "qcomp/polynomial.hpp"

namespace qcomp {

// Polynomial generating family of an almost-Riemannian structure on R^n.
struct GeneratingFamily {
  std::vector<std::string> vars;
  std::vector<PolyVectorField> fields;
  std::string t_var;             // coordinate transverse to the singular set
  std::vector<int> det_fields;   // n-subset used for det; empty = all fields
  Box box;                       // over the non-t coordinates
  double eps = 0.5;

  std::size_t dim() const { return vars.size(); }
  int t_index() const;  // -1 when t_var is unset
  std::vector<std::string> x_vars() const;
  void validate() const;

  // Fields given as one string per component.
  static GeneratingFamily from_strings(std::vector<std::string> vars,
                                       const std::vector<std::vector<std::string>>& fields,
                                       std::string t_var = {});
};

// Dimensions k_i of the bracket flag at q until it reaches n.
std::vector<int> growth_vector(const GeneratingFamily& f, const std::vector<Rational>& q,
                               int max_step = 12);

Polynomial det_xi(const GeneratingFamily& f);

struct Regularity {
  enum class Kind { Regular, NonRegular, Inconclusive } kind = Kind::Inconclusive;
  int k = 0;  // det = t^k u
  std::string reason;
};
std::string to_string(Regularity::Kind k);

Regularity regularity_check(const GeneratingFamily& f);

// V_eff for the Riemannian volume dt dx / |det|, i.e. vartheta = -(1/2) ln |det|.
PotentialFn ars_effective_potential(const GeneratingFamily& f);

CriterionVerdict classify_ars(const GeneratingFamily& f, const SamplingOptions& opt = {});

}  // namespace qcomp
