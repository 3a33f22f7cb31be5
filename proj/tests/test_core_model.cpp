#include <doctest.h>

#include <cmath>

#include "gptent/catalog.hpp"
#include "support.hpp"

using namespace gptent;

TEST_CASE("test spaces validate their structure") {
  auto sq = catalog::squit();
  CHECK(sq->outcome_count() == 4);
  CHECK(sq->test_count() == 2);
  CHECK_FALSE(sq->is_classical());
  CHECK(catalog::classical(3)->is_classical());
  CHECK_THROWS_AS(make_space("X", {{"a", "b"}, {"a", "b"}}), ModelError);
  CHECK_THROWS_AS(make_space("X", {}), ModelError);
  CHECK_THROWS_AS(make_space("X", {"a", "b", "c"}, {{"", {"a", "b"}}}), ModelError);  // c in no test
}

TEST_CASE("states are normalized on every test") {
  auto sq = catalog::squit();
  auto ok = validate_state(sq, RationalVector{Rational(1, 2), Rational(1, 2), Rational(1), Rational(0)});
  CHECK(ok.ok());
  auto bad = validate_state(sq, RationalVector{Rational(1, 2), Rational(1, 3), Rational(1), Rational(0)});
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.violations.front().kind == Violation::Kind::normalization);
  CHECK(bad.violations.front().message.find("{a,a'}") != std::string::npos);
  auto missing = validate_state(catalog::bit(), std::map<std::string, Rational>{{"0", Rational(1)}});
  CHECK_FALSE(missing.ok());
  auto negative = validate_state(catalog::bit(), RationalVector{Rational(-1), Rational(2)});
  CHECK_FALSE(negative.ok());
}

TEST_CASE("firefly alpha: local entropies and the minimum") {
  State alpha = catalog::firefly_state("alpha");
  for (std::size_t t = 0; t < 3; ++t) CHECK(local_entropy(alpha, t) == doctest::Approx(1.0).epsilon(1e-12));
  auto h = measurement_entropy(alpha);
  CHECK(h.bits == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.witness.test == 0);
  CHECK_FALSE(certainty_witness(alpha).has_value());
}

TEST_CASE("firefly omega has a certain outcome") {
  State omega = catalog::firefly_state("omega");
  CHECK(measurement_entropy(omega).bits == doctest::Approx(0.0));
  CHECK(certainty_witness(omega) == std::optional<std::string>("z"));
}

TEST_CASE("measurement entropy agrees with a brute-force minimum") {
  testsupport::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto space = trial % 2 ? catalog::firefly() : testsupport::random_test_space(rng);
    auto poly = enumerate_vertices(*space);
    State s = testsupport::random_state(rng, space, poly);
    CHECK(std::fabs(measurement_entropy(s).bits - testsupport::brute_measurement_entropy(s)) < 1e-12);
  }
}

TEST_CASE("mixtures of states") {
  auto sq = catalog::squit();
  State x(sq, {Rational(1), Rational(0), Rational(1), Rational(0)});
  State y(sq, {Rational(0), Rational(1), Rational(1), Rational(0)});
  State m = mix({Rational(1, 2), Rational(1, 2)}, {x, y});
  CHECK(m.values() == RationalVector{Rational(1, 2), Rational(1, 2), Rational(1), Rational(0)});
  CHECK_THROWS(mix({Rational(1, 2), Rational(1, 3)}, {x, y}));
}

TEST_CASE("generalized functionals") {
  State alpha = catalog::firefly_state("alpha");
  CHECK(generalized_entropy(alpha, SchurConcaveFunctional::min_entropy()).bits == doctest::Approx(1.0));
  CHECK(generalized_entropy(alpha, SchurConcaveFunctional::renyi(2.0)).bits == doctest::Approx(1.0));
  CHECK(SchurConcaveFunctional::renyi(1.0).kind() == SchurConcaveFunctional::Kind::shannon);
  CHECK(SchurConcaveFunctional::renyi(INFINITY).kind() == SchurConcaveFunctional::Kind::min_entropy);
  CHECK_THROWS_AS(SchurConcaveFunctional::renyi(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SchurConcaveFunctional::tsallis(1.0), std::invalid_argument);
  CHECK(SchurConcaveFunctional::parse("tsallis:2").kind() == SchurConcaveFunctional::Kind::tsallis);
  // Tsallis q = 2 on (1/2, 1/2): 1 - 1/2.
  CHECK(SchurConcaveFunctional::tsallis(2.0).uniform(2) == doctest::Approx(0.5));
  CHECK(SchurConcaveFunctional::shannon().uniform(8) == doctest::Approx(3.0));
}

TEST_CASE("shannon entropy ignores zero weights") {
  RationalVector p{Rational(1, 2), Rational(0), Rational(1, 4), Rational(1, 4)};
  CHECK(shannon_entropy(p) == doctest::Approx(1.5));
}
