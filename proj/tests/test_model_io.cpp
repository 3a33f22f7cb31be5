#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "gptent/catalog.hpp"
#include "gptent/model_io.hpp"

using namespace gptent;

TEST_CASE("a squit model file") {
  auto b = parse_model(R"({
    "system": {"name": "squit", "tests": [["a", "a'"], ["b", "b'"]]},
    "states": {"s": {"a": "1/2", "a'": "1/2", "b": 1, "b'": 0}}
  })");
  REQUIRE(b.systems.size() == 1);
  CHECK(b.systems.at("squit")->test_count() == 2);
  CHECK(b.states.at("s").value("a") == Rational(1, 2));
}

TEST_CASE("validation errors name the violated test") {
  try {
    parse_model(R"({
      "system": {"name": "q", "tests": [["a", "a'"], ["b", "b'"]]},
      "states": {"bad": {"a": "1/2", "a'": "1/3", "b": 1, "b'": 0}}
    })");
    FAIL("expected a ModelError");
  } catch (const ModelError& e) {
    std::string msg = e.what();
    CHECK(msg.find("bad") != std::string::npos);
    CHECK(msg.find("{a,a'}") != std::string::npos);
  }
}

TEST_CASE("parse errors carry a line") {
  try {
    parse_model("{\n  \"system\": {\n    \"tests\": [[\"a\"]]\n  ,,\n}");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), FileError);
}

TEST_CASE("builtin catalog round-trips through JSON") {
  for (const auto& name : catalog::builtin_names()) {
    CAPTURE(name);
    auto b = catalog::builtin(name);
    auto again = parse_model(to_json(b).dump());
    CHECK(again == b);
  }
  CHECK_THROWS_AS(catalog::builtin("nope"), ModelError);
}

TEST_CASE("load_model reads files") {
  const char* path = "test_model_io_tmp.json";
  {
    std::ofstream out(path);
    out << to_json(catalog::builtin("firefly")).dump(2);
  }
  auto b = load_model(path);
  std::remove(path);
  CHECK(b.states.size() == 4);
}

TEST_CASE("joint states, composites and polytopes in files") {
  auto b = parse_model(R"({
    "systems": {"A": {"tests": [["0", "1"]]}, "B": {"tests": [["0", "1"]]}},
    "composites": {"AB": {"components": ["A", "B"], "mode": "fr"}},
    "joint_states": {"corr": {"composite": "AB", "values": {"0,0": "1/2", "1,1": "1/2"}}},
    "polytopes": {"tri": {"labels": ["x", "y"], "vertices": [[0, 0], [1, 0], [0, 1]]},
                  "fromA": {"from_system": "A"}}
  })");
  CHECK(b.joint_states.at("corr").value("1,0") == 0);
  CHECK(b.polytopes.at("tri").is_simplex());
  CHECK(b.polytopes.at("fromA").vertex_count() == 2);
  CHECK_THROWS_AS(parse_model(R"({"polytope": {"labels": ["x"], "vertices": [[0], [1], ["1/2"]]}})"), GeometryError);
}

TEST_CASE("entropy formatting") {
  CHECK(format_bits(1.0) == "1.000000000000");
  CHECK(round_bits(0.1234567890123456) == doctest::Approx(0.123456789012));
}
