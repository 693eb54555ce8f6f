#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qcomp/cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = qcomp::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "qcomp_cli_test";
  fs::create_directories(d);
  return d / name;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST_CASE("check on a cone model file") {
  fs::path model = scratch("cone.json");
  std::ofstream(model) << R"({"type":"cone","n":2,"alpha":3,"eps":1})";
  Run r = run({"check", model.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("Holds") != std::string::npos);

  std::ofstream(model) << R"({"type":"cone","n":2,"alpha":2,"eps":1})";
  CHECK(run({"check", model.string()}).code == 1);
}

TEST_CASE("weyl and ars subcommands") {
  Run w = run({"weyl", "--c", "0.5"});
  CHECK(w.code == 1);
  CHECK(w.out.find("limit_circle") != std::string::npos);
  CHECK(run({"weyl", "--c", "0.75"}).code == 0);
  Run g = run({"ars", "--fixture", "grushin", "--growth", "--point", "0,0"});
  CHECK(g.code == 0);
  CHECK(g.out.find("(1,2)") != std::string::npos);
  Run reg = run({"ars", "--fixture", "example-7.1", "--regular"});
  CHECK(reg.code == 1);
}

TEST_CASE("usage and model errors") {
  CHECK(run({"check"}).code == 64);
  CHECK(run({"frobnicate"}).code == 64);
  CHECK(run({"check", "--fixture", "nope"}).code == 64);
  CHECK(run({"check", "--fixture", "grushin", "--grid-decades", "0"}).code == 64);
  CHECK(run({"ars", "--fixture", "grushin", "--growth"}).code == 64);
  CHECK(run({"--version"}).code == 0);

  fs::path bad = scratch("bad.json");
  std::ofstream(bad) << R"({"type":"cone","n":1,"alpha":3})";
  Run r = run({"check", bad.string()});
  CHECK(r.code == 65);
  CHECK(r.err.find("'n'") != std::string::npos);
  std::ofstream(bad) << "{ not json";
  CHECK(run({"check", bad.string()}).code == 65);
  CHECK(run({"check", scratch("missing.json").string()}).code == 64);
}

TEST_CASE("reports are reproducible from their own model") {
  for (std::string fixture : {"example-4.1", "example-7.3", "cone-n2-a3"}) {
    fs::path rep = scratch(fixture + ".report.json");
    Run a = run({"check", "--fixture", fixture, "--json", rep.string()});
    CHECK(a.code == 0);
    json ra = read_json(rep);
    CHECK(ra["exit_code"] == 0);
    CHECK(ra["input"]["digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);

    fs::path model = scratch(fixture + ".model.json");
    std::ofstream(model) << ra["model"].dump();
    fs::path rep2 = scratch(fixture + ".report2.json");
    Run b = run({"check", model.string(), "--json", rep2.string()});
    json rb = read_json(rep2);
    CHECK(b.code == a.code);
    CHECK(rb["verdict"] == ra["verdict"]);
    CHECK(rb["primary"] == ra["primary"]);
    CHECK(rb["cross_checks"] == ra["cross_checks"]);
  }
}

TEST_CASE("serial flag does not change the report") {
  fs::path p1 = scratch("par.json"), p2 = scratch("ser.json");
  run({"check", "--fixture", "example-4.1", "--json", p1.string()});
  run({"check", "--fixture", "example-4.1", "--serial", "--json", p2.string()});
  CHECK(read_json(p1)["primary"] == read_json(p2)["primary"]);
}
