#include <doctest.h>

#include <cmath>

#include "gptent/catalog.hpp"
#include "support.hpp"

using namespace gptent;

namespace {

CompositePtr composite(std::vector<TestSpacePtr> parts, CompositeMode mode = CompositeMode::foulis_randall) {
  return std::make_shared<const CompositeSystem>(std::move(parts), mode);
}

// A's outcome reveals B's test choice.
JointState signaling_box() {
  auto a = pr_side('A'), b = pr_side('B');
  auto sys = composite({a, b});
  RationalVector v(sys->cell_count(), Rational(0));
  for (const char* key : {"a1,b1", "a2,b1", "a1',b2", "a2',b2"}) v[sys->parse_cell_key(key)] = 1;
  return JointState(sys, v);
}

}  // namespace

TEST_CASE("cells are row-major with component 0 most significant") {
  CompositeSystem sys({catalog::bit("A"), catalog::squit()}, CompositeMode::foulis_randall);
  CHECK(sys.cell_count() == 8);
  CHECK(sys.encode({1, 2}) == 6);
  CHECK(sys.decode(6) == std::vector<std::size_t>{1, 2});
  CHECK(sys.cell_key(6) == "1,b");
  CHECK(sys.parse_cell_key("1,b") == 6);
  CHECK_THROWS_AS(sys.parse_cell_key("1,q"), ModelError);
  CHECK_THROWS_AS(CompositeSystem({catalog::bit()}, CompositeMode::adaptive), ModelError);
}

TEST_CASE("Foulis-Randall counts by hand enumeration") {
  // squit (x) squit: 4 product tests; A first then a B test per A outcome gives
  // 2 * 2 * 2 = 8 trees, likewise B first; the 4 product tests are in both.
  // 8 + 8 - 4 = 12.
  CHECK(fr_product(*catalog::squit(), *catalog::squit()).size() == 12);
  // bit (x) squit: the bit has one test, so A first gives 2 * 2 = 4 trees and
  // every B-first tree is one of the 2 product tests already counted.
  CHECK(fr_product(*catalog::bit(), *catalog::squit()).size() == 4);
  CHECK(cartesian_product(*catalog::squit(), *catalog::squit()).size() == 4);
  CHECK(cartesian_product(*catalog::firefly(), *catalog::squit()).size() == 6);
}

TEST_CASE("adaptive tests over three components") {
  CompositeSystem sys({catalog::bit("A"), catalog::bit("B"), catalog::squit()}, CompositeMode::adaptive);
  auto all = adaptive_tests(sys);
  CHECK(all.size() > 12);
  for (const auto& t : all) {
    auto leaves = leaf_tuples(t, sys);
    // Every test has 2 * 2 * 2 leaves on this system.
    CHECK(leaves.size() == 8);
  }
}

TEST_CASE("non-signaling") {
  CHECK(is_nonsignaling(pr_box()).ok());
  CHECK(is_nonsignaling(catalog::example4_state()).ok());
  auto r = is_nonsignaling(signaling_box());
  REQUIRE_FALSE(r.ok());
  CHECK(r.violation->sum_a != r.violation->sum_b);
  CHECK_THROWS_AS(require_nonsignaling(signaling_box()), SignalingError);
  CHECK_THROWS_AS(marginal_state(signaling_box(), 0), SignalingError);
}

TEST_CASE("joint states are normalized on every product test") {
  auto sys = composite({catalog::bit("A"), catalog::bit("B")});
  CHECK_THROWS_AS(JointState(sys, {Rational(1, 2), Rational(0), Rational(0), Rational(0)}), ModelError);
  CHECK_THROWS_AS(JointState(sys, {Rational(2), Rational(-1), Rational(0), Rational(0)}), ModelError);
  CHECK_THROWS_AS(JointState(sys, {Rational(1)}), ModelError);
}

TEST_CASE("marginals and conditionals") {
  auto pr = pr_box();
  State ma = marginal_state(pr, 0);
  for (const auto& x : ma.values()) CHECK(x == Rational(1, 2));

  auto j = catalog::example4_state();
  State c = marginal_state(j, 2);
  CHECK(c.value("e") == Rational(1, 2));
  CHECK(c.value("f") == Rational(1, 2));
  JointState ac = marginal(j, {0, 2});
  CHECK(ac.system()->size() == 2);

  auto cond = conditional(j, 0, "1");
  CHECK(cond.probability == Rational(1, 2));
  REQUIRE(cond.joint);
  State c_given = marginal_state(*cond.joint, 1);
  CHECK(c_given.value("e'") == 1);

  // Zero-probability conditioning yields the zero vector by convention.
  auto sys = composite({catalog::bit("A"), catalog::bit("B")});
  JointState point(sys, {Rational(1), Rational(0), Rational(0), Rational(0)});
  auto z = conditional(point, 0, "1");
  CHECK(z.zero);
  CHECK_FALSE(z.state);
  for (const auto& x : z.values) CHECK(is_zero(x));
  CHECK_THROWS_AS(conditional(point, 0, "9"), ModelError);
}

TEST_CASE("product states") {
  testsupport::Rng rng(2);
  auto sq = catalog::squit();
  auto poly = enumerate_vertices(*sq);
  State x = testsupport::random_state(rng, sq, poly), y = testsupport::random_state(rng, sq, poly);
  auto p = product_state({x, y});
  CHECK(is_nonsignaling(p).ok());
  CHECK(marginal_state(p, 0) == x);
  CHECK(marginal_state(p, 1) == y);
}

TEST_CASE("chain-rule DP equals brute-force enumeration") {
  CHECK(joint_measurement_entropy(pr_box()).bits == doctest::Approx(testsupport::brute_joint_entropy(pr_box())));
  auto e4 = catalog::example4_state();
  CHECK(joint_measurement_entropy(e4).bits == doctest::Approx(testsupport::brute_joint_entropy(e4)));
  auto e5 = catalog::example5_state();
  CHECK(joint_measurement_entropy(e5).bits == doctest::Approx(testsupport::brute_joint_entropy(e5)));

  testsupport::Rng rng(17);
  auto sq = catalog::squit();
  auto ff = catalog::firefly();
  auto psq = enumerate_vertices(*sq), pff = enumerate_vertices(*ff);
  for (int trial = 0; trial < 60; ++trial) {
    JointState j = trial % 3 == 0   ? testsupport::random_box(rng)
                   : trial % 3 == 1 ? testsupport::random_separable(rng, sq, psq, sq, psq)
                                    : testsupport::random_separable(rng, ff, pff, sq, psq);
    auto dp = joint_measurement_entropy(j);
    CHECK(std::fabs(dp.bits - testsupport::brute_joint_entropy(j)) < 1e-12);
    CHECK(std::fabs(tree_entropy(j, dp.witness) - dp.bits) < 1e-12);
  }
}

TEST_CASE("cartesian mode searches product tests only") {
  auto e4 = catalog::example4_state();
  auto sys = std::make_shared<const CompositeSystem>(e4.system()->components(), CompositeMode::cartesian);
  JointState cart(sys, e4.values());
  double h = joint_measurement_entropy(cart).bits;
  CHECK(h == doctest::Approx(testsupport::brute_joint_entropy(cart)));
  CHECK(h >= joint_measurement_entropy(e4).bits - 1e-12);
}

TEST_CASE("subset entropies of the example4 state") {
  auto j = catalog::example4_state();
  CHECK(subset_entropy(j, {2}) == doctest::Approx(1.0));
  CHECK(subset_entropy(j, {0, 2}) == doctest::Approx(1.0));
  CHECK(subset_entropy(j, {1, 2}) == doctest::Approx(1.0));
  CHECK(subset_entropy(j, {0, 1, 2}) == doctest::Approx(2.0));
  CHECK(subset_entropy(j, {0, 1}) == doctest::Approx(2.0));
}
