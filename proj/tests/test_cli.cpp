#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gptent/catalog.hpp"
#include "gptent/cli.hpp"
#include "gptent/model_io.hpp"

using namespace gptent;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("entropy of the firefly alpha") {
  auto r = run({"entropy", "--builtin", "firefly", "--state", "alpha", "--kind", "measurement"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("1.000000000000\n", 0) == 0);
  auto m = run({"entropy", "--builtin", "firefly", "--state", "omega", "--kind", "mixing"});
  CHECK(m.out.rfind("1.000000000000\n", 0) == 0);
  auto t = run({"--format", "json", "entropy", "--builtin", "firefly", "--state", "alpha", "--kind", "T", "--functional", "min"});
  CHECK(json_of(t)["bits"] == 1.0);
}

TEST_CASE("check exit codes follow --expect") {
  auto ssa = run({"ssa", "--builtin", "example4"});
  CHECK(ssa.code == cli::kExitCheckFailed);
  CHECK(ssa.out.find("form_d I(A:B|C) = -1.000000000000") != std::string::npos);
  CHECK(run({"--expect", "violated", "ssa", "--builtin", "example4"}).code == cli::kExitOk);
  CHECK(run({"--expect", "any", "holevo", "--builtin", "example5"}).code == cli::kExitOk);
  CHECK(run({"holevo", "--builtin", "example5"}).code == cli::kExitCheckFailed);
  CHECK(run({"nonsignaling", "--builtin", "pr_box"}).code == cli::kExitOk);
  CHECK(run({"monoentropic-scan", "--builtin", "bit"}).code == cli::kExitOk);
  CHECK(run({"monoentropic-scan", "--builtin", "firefly"}).code == cli::kExitCheckFailed);
}

TEST_CASE("input errors exit 2") {
  CHECK(run({"frobnicate"}).code == cli::kExitInputError);
  CHECK(run({"entropy", "--bogus"}).code == cli::kExitInputError);
  CHECK(run({}).code == cli::kExitInputError);
  CHECK(run({"entropy", "--model", "/nonexistent.json"}).code == cli::kExitInputError);
  CHECK(run({"entropy", "--builtin", "firefly", "--state", "nope"}).code == cli::kExitInputError);
  CHECK(run({"entropy", "--builtin", "squit", "--kind", "T", "--functional", "renyi:0"}).code == cli::kExitInputError);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("validate reports invalid content as a failed check") {
  const char* path = "test_cli_bad.json";
  {
    std::ofstream out(path);
    out << R"({"system": {"tests": [["a", "b"]]}, "states": {"s": {"a": "1/2", "b": "1/3"}}})";
  }
  auto r = run({"validate", "--model", path});
  std::remove(path);
  CHECK(r.code == cli::kExitCheckFailed);
  CHECK(r.out.find("{a,b}") != std::string::npos);
  CHECK(run({"validate", "--builtin", "vandam"}).code == cli::kExitOk);
}

TEST_CASE("chsh and ic") {
  auto c = run({"chsh", "--box", "pr"});
  CHECK(c.code == cli::kExitOk);
  CHECK(c.out == "4.000000000000\n");
  auto ic = run({"--format", "json", "ic", "vandam"});
  CHECK(ic.code == cli::kExitCheckFailed);
  auto j = json_of(ic);
  CHECK(j["lhs"] == 2.0);
  CHECK(j["entropies"]["H(E1,E2,F,B)"] == 3.0);
  CHECK(j["entropies"]["I(E1:E2|F,B)"] == -1.0);
}

TEST_CASE("concavity from a polytope file emits exact points") {
  const char* path = "test_cli_square.json";
  {
    std::ofstream out(path);
    out << R"({"polytope": {"labels": ["x", "y"], "vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]}})";
  }
  auto r = run({"--format", "json", "concavity", "--polytope", path});
  std::remove(path);
  CHECK(r.code == cli::kExitOk);
  auto j = json_of(r);
  CHECK(j["verified"] == true);
  CHECK(j["rho"][0].is_string());
  CHECK(j["gap"].get<double>() > 1e-9);
  auto na = run({"concavity", "--builtin", "tetrahedron"});
  CHECK(na.code == cli::kExitOk);
  CHECK(na.out.find("not applicable") != std::string::npos);
}

TEST_CASE("composite commands") {
  auto p = run({"--format", "json", "product", "--builtin", "squit", "--systems", "squit,squit", "--mode", "fr"});
  CHECK(json_of(p)["count"] == 12);
  auto c = run({"--format", "json", "product", "--builtin", "squit", "--systems", "squit,squit", "--mode", "cartesian"});
  CHECK(json_of(c)["count"] == 4);
  auto m = run({"--format", "json", "marginal", "--builtin", "example4", "--keep", "C"});
  CHECK(json_of(m)["values"]["e"] == "1/2");
  auto cond = run({"--format", "json", "conditional", "--builtin", "example4", "--on", "A", "--outcome", "0"});
  CHECK(json_of(cond)["probability"] == "1/2");
  auto cmi = run({"--format", "json", "cmi", "--builtin", "example4", "--a", "A", "--b", "B", "--c", "C"});
  CHECK(json_of(cmi)["bits"] == -1.0);
  auto mi = run({"--format", "json", "mutual-info", "--builtin", "example5"});
  CHECK(json_of(mi)["bits"] == 0.0);
}

TEST_CASE("geometry commands") {
  auto v = run({"--format", "json", "vertices", "--builtin", "firefly"});
  CHECK(json_of(v)["count"] == 5);
  auto f = run({"--format", "json", "facets", "--builtin", "prism"});
  CHECK(json_of(f)["count"] == 6);
  CHECK(json_of(f)["non_simplicial"] == 6);
  auto s = run({"entropy", "--builtin", "square", "--kind", "mixing", "--point", "1/2,1/2"});
  CHECK(s.out.rfind("1.000000000000\n", 0) == 0);
}

TEST_CASE("verify-paper and its filter") {
  auto all = run({"verify-paper"});
  CHECK(all.code == cli::kExitOk);
  CHECK(all.out.find("FAIL") == std::string::npos);
  auto ff = run({"--format", "json", "verify-paper", "--filter", "firefly"});
  auto j = json_of(ff);
  CHECK(j["total"].get<int>() > 0);
  for (const auto& c : j["checks"]) CHECK(c["id"].get<std::string>().find("firefly") != std::string::npos);
}

TEST_CASE("outputs are deterministic and dumps reload") {
  auto a = run({"--seed", "3", "monoentropic-scan", "--builtin", "squit", "--samples", "20"});
  auto b = run({"--seed", "3", "monoentropic-scan", "--builtin", "squit", "--samples", "20"});
  CHECK(a.out == b.out);
  auto d = run({"dump", "--builtin", "example4"});
  CHECK(parse_model(d.out) == catalog::builtin("example4"));
}
