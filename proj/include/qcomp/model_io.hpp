#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qcomp/ars.hpp"
#include "qcomp/criteria.hpp"
#include "qcomp/effpot.hpp"

namespace qcomp {

struct ConeModel {
  int n = 2;
  double alpha = 0.0;
  double eps = 1.0;
};

using Model = std::variant<BoundaryModel, ConeModel, CurvatureModel, KwssModel, GeneratingFamily,
                           PotentialFn>;

// Validates against the model-file schema; errors name the offending field.
Model parse_model(const nlohmann::json& j);
std::string model_type(const Model& m);
void override_eps(Model& m, double eps);

std::vector<std::string> catalog_names();
nlohmann::json catalog_fixture(const std::string& name);

struct CheckResult {
  CriterionVerdict primary;
  std::vector<CriterionVerdict> cross_checks;
};
CheckResult run_check(const Model& m, const SamplingOptions& opt);

nlohmann::json to_json(const CriterionVerdict& v);
std::string fnv1a_hex(std::string_view bytes);
int exit_code(Verdict v);

}  // namespace qcomp
