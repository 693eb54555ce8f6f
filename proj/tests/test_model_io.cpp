#include <string>

#include "doctest.h"
#include "qcomp/errors.hpp"
#include "qcomp/model_io.hpp"

using namespace qcomp;
using nlohmann::json;

namespace {

std::string error_of(const json& j) {
  try {
    parse_model(j);
  } catch (const InvalidModel& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("every catalog fixture parses and holds") {
  for (const auto& name : catalog_names()) {
    Model m = parse_model(catalog_fixture(name));
    CheckResult r = run_check(m, SamplingOptions{});
    CHECK_MESSAGE(r.primary.verdict == Verdict::Holds, name, ": ", r.primary.reason);
    CHECK(exit_code(r.primary.verdict) == 0);
    for (const auto& c : r.cross_checks)
      CHECK_MESSAGE(c.verdict != Verdict::Fails, name, " cross-check ", c.criterion);
  }
  CHECK_THROWS_AS(catalog_fixture("nope"), UnknownFixture);
}

TEST_CASE("model types") {
  CHECK(model_type(parse_model(catalog_fixture("cone-n2-a3"))) == "cone");
  CHECK(model_type(parse_model(catalog_fixture("grushin"))) == "ars");
  CHECK(model_type(parse_model(json{{"type", "potential"}, {"expr", "3/(4*t^2)"}})) == "potential");
}

TEST_CASE("schema errors name the field") {
  CHECK(error_of(json{{"n", 2}}).find("'type'") != std::string::npos);
  CHECK(error_of(json{{"type", "wedge"}}).find("'type'") != std::string::npos);
  CHECK(error_of(json{{"type", "measure"}, {"n", 2}}).find("'a'") != std::string::npos);
  CHECK(error_of(json{{"type", "cone"}, {"n", 1}, {"alpha", 3}}).find("'n'") != std::string::npos);
  CHECK(error_of(json{{"type", "cone"}, {"n", 2}, {"alpha", "x"}}).find("'alpha'") != std::string::npos);
  CHECK(error_of(json{{"type", "cone"}, {"n", 2}, {"alpha", 3}, {"eps", -1}}).find("'eps'") !=
        std::string::npos);
  CHECK(error_of(json{{"type", "measure"}, {"n", 2}, {"a", "3 +"}}).find("'a'") != std::string::npos);
  CHECK(error_of(json{{"type", "curvature"}, {"n", 2}, {"regime", "cubic"}, {"h_eps_max", 0}})
            .find("'regime'") != std::string::npos);
  CHECK(error_of(json{{"type", "potential"}, {"expr", "3/(4*t^2) + q"}}).find("q") != std::string::npos);
  CHECK(error_of(json{{"type", "kwss"}, {"n", 4}}).find("'strata'") != std::string::npos);
  CHECK(error_of(json{{"type", "ars"}, {"vars", {"x", "y"}}}).find("'fields'") != std::string::npos);
  CHECK_THROWS_AS(parse_model(json::array()), InvalidModel);
}

TEST_CASE("numbers are accepted where expressions are") {
  Model m = parse_model(json{{"type", "measure"}, {"n", 2}, {"a", 3}});
  CHECK(run_check(m, SamplingOptions{}).primary.verdict == Verdict::Holds);
}

TEST_CASE("eps override") {
  Model m = parse_model(catalog_fixture("cone-n2-a3"));
  override_eps(m, 0.25);
  CHECK(std::get<ConeModel>(m).eps == 0.25);
  Model p = parse_model(json{{"type", "potential"}, {"expr", "1"}});
  override_eps(p, 0.1);
  CHECK(std::get<PotentialFn>(p).eps == 0.1);
}

TEST_CASE("verdict json") {
  CriterionVerdict v = check_cone(2, 2.0);
  json j = to_json(v);
  CHECK(j["verdict"] == "Fails");
  CHECK(j["criterion"] == v.criterion);
  CHECK(j.contains("witness"));
  CHECK(j["reason"].is_string());
  CHECK(exit_code(Verdict::Holds) == 0);
  CHECK(exit_code(Verdict::Fails) == 1);
  CHECK(exit_code(Verdict::Inconclusive) == 2);
}

TEST_CASE("fnv1a-64 test vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}
