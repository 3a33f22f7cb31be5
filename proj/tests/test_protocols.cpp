#include <doctest.h>

#include "gptent/catalog.hpp"
#include "gptent/protocols.hpp"
#include "support.hpp"

using namespace gptent;

TEST_CASE("PR box CHSH value") {
  auto pr = pr_box();
  CHECK(chsh_value(pr) == doctest::Approx(4.0));
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) CHECK(std::fabs(correlator(pr, a, b)) == doctest::Approx(1.0));
}

TEST_CASE("deterministic product boxes stay within the classical bound") {
  auto a = pr_side('A'), b = pr_side('B');
  for (int mask = 0; mask < 16; ++mask) {
    auto bitv = [&](int k) { return (mask >> k) & 1; };
    State sa(a, {Rational(1 - bitv(0)), Rational(bitv(0)), Rational(1 - bitv(1)), Rational(bitv(1))});
    State sb(b, {Rational(1 - bitv(2)), Rational(bitv(2)), Rational(1 - bitv(3)), Rational(bitv(3))});
    CHECK(chsh_value(product_state({sa, sb})) <= 2.0 + 1e-9);
  }
}

TEST_CASE("van Dam intermediate state") {
  auto r = van_dam_intermediate_state();
  CHECK(r.state.values() == catalog::van_dam_table().values());
  CHECK(r.h_e1fb == doctest::Approx(2.0));
  CHECK(r.h_e2fb == doctest::Approx(2.0));
  CHECK(r.h_fb == doctest::Approx(2.0));
  CHECK(r.h_e1e2fb == doctest::Approx(3.0));
  CHECK(r.cmi == doctest::Approx(-1.0));
  CHECK(is_nonsignaling(r.state).ok());
}

TEST_CASE("van Dam protocol violates information causality") {
  auto p = van_dam_protocol();
  auto r = ic_lhs(p);
  CHECK(r.lhs == doctest::Approx(2.0));
  CHECK(r.m == 1);
  CHECK_FALSE(r.satisfied);
  for (const auto& s : r.success) CHECK(s == 1);
}

TEST_CASE("classical protocol without shared state respects the bound") {
  // Alice sends E1; Bob outputs the message for k = 1 and a constant for k = 2.
  ICProtocol p;
  p.n = 2;
  p.m = 1;
  p.alice_test = {0, 0, 0, 0};
  p.alice_message = {{0}, {0}, {1}, {1}};
  p.bob_test = {{0, 0}, {0, 0}};
  p.bob_guess = {{{0}, {1}}, {{0}, {0}}};
  auto r = ic_lhs(p);
  CHECK(r.per_k[0] == doctest::Approx(1.0));
  CHECK(r.per_k[1] == doctest::Approx(0.0));
  CHECK(r.satisfied);
}

TEST_CASE("protocol tables are validated") {
  auto p = van_dam_protocol();
  p.alice_message.pop_back();
  CHECK_THROWS_AS(validate_protocol(p), ModelError);
  auto q = van_dam_protocol();
  q.alice_message[0][0] = 2;
  CHECK_THROWS_AS(validate_protocol(q), ModelError);
}

TEST_CASE("noisy PR boxes interpolate the CHSH value") {
  testsupport::Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    auto box = testsupport::random_box(rng);
    double v = chsh_value(box);
    CHECK(v <= 4.0 + 1e-9);
    CHECK(v >= -1e-9);
  }
}
