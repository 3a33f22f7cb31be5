#include <doctest.h>

#include <cmath>

#include "gptent/catalog.hpp"
#include "support.hpp"

using namespace gptent;

namespace {

RationalVector v(std::initializer_list<Rational> xs) { return RationalVector(xs); }

// Brute-force oracle: every vertex subset, solved exactly, kept when affinely
// independent with all weights strictly positive.
std::size_t brute_decomposition_count(const StateSpacePolytope& poly, const RationalVector& p) {
  const std::size_t n = poly.vertex_count(), d = poly.ambient_dim();
  std::size_t count = 0;
  for (std::size_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) subset.push_back(i);
    linalg::Matrix m(d + 1, RationalVector(subset.size(), Rational(1)));
    RationalVector rhs(d + 1, Rational(1));
    for (std::size_t r = 0; r < d; ++r) {
      rhs[r] = p[r];
      for (std::size_t c = 0; c < subset.size(); ++c) m[r][c] = poly.vertices()[subset[c]][r];
    }
    auto sol = linalg::solve(m, rhs, subset.size());
    if (!sol.consistent || !sol.unique) continue;
    bool positive = true;
    for (const auto& x : sol.particular) positive = positive && x > 0;
    count += positive;
  }
  return count;
}

}  // namespace

TEST_CASE("vertex enumeration") {
  CHECK(enumerate_vertices(*catalog::squit()).vertex_count() == 4);
  CHECK(enumerate_vertices(*catalog::firefly()).vertex_count() == 5);
  for (std::size_t n = 1; n <= 6; ++n) CHECK(enumerate_vertices(*catalog::classical(n)).vertex_count() == n);
  auto sq = enumerate_vertices(*catalog::squit());
  CHECK(sq.dim() == 2);
  CHECK_FALSE(sq.is_simplex());
  CHECK(enumerate_vertices(*catalog::firefly()).dim() == 3);
}

TEST_CASE("polytopes reject redundant vertices, hull drops them") {
  std::vector<std::string> labels{"x", "y"};
  std::vector<RationalVector> pts{v({0, 0}), v({2, 0}), v({0, 2}), v({Rational(1, 2), Rational(1, 2)})};
  CHECK_THROWS_AS(StateSpacePolytope(labels, pts), GeometryError);
  auto hull = StateSpacePolytope::hull(labels, pts);
  CHECK(hull.vertex_count() == 3);
  CHECK(hull.is_simplex());
}

TEST_CASE("membership returns a certificate or a separator") {
  auto sq = catalog::square();
  auto in = membership(sq, v({Rational(1, 3), Rational(1, 4)}));
  REQUIRE(in.inside);
  REQUIRE(in.certificate);
  CHECK(in.certificate->reconstructs(sq));
  auto out = membership(sq, v({Rational(2), Rational(1, 2)}));
  REQUIRE_FALSE(out.inside);
  REQUIRE(out.separator);
  const auto& h = *out.separator;
  for (const auto& vert : sq.vertices()) CHECK(linalg::dot(h.normal, vert) >= h.offset);
  CHECK(linalg::dot(h.normal, v({Rational(2), Rational(1, 2)})) < h.offset);
  CHECK_THROWS_AS(membership(sq, v({Rational(1)})), GeometryError);
}

TEST_CASE("facets") {
  auto square_facets = enumerate_facets(catalog::square());
  CHECK(square_facets.size() == 4);
  auto firefly_facets = enumerate_facets(enumerate_vertices(*catalog::firefly()));
  CHECK(firefly_facets.size() == 6);
  for (const auto& f : firefly_facets) CHECK(f.simplicial);
  auto prism_facets = enumerate_facets(catalog::prism());
  CHECK(prism_facets.size() == 6);
  std::size_t non_simplicial = 0;
  for (const auto& f : prism_facets) non_simplicial += !f.simplicial;
  CHECK(non_simplicial == 6);
  CHECK(enumerate_facets(catalog::tetrahedron()).size() == 4);
}

TEST_CASE("extreme decompositions of the firefly omega") {
  auto poly = enumerate_vertices(*catalog::firefly());
  auto omega = catalog::firefly_state("omega").values();
  auto ds = extreme_decompositions(poly, omega);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].terms.size() == 2);
  CHECK(ds[0].weights() == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK(mixing_entropy(poly, omega).bits == doctest::Approx(1.0));
  CHECK(mixing_entropy(poly, catalog::firefly_state("alpha").values()).bits == doctest::Approx(0.0));
}

TEST_CASE("decomposition counts match exhaustive subset search") {
  testsupport::Rng rng(5);
  std::vector<StateSpacePolytope> polys{catalog::square(), catalog::pentagon(), catalog::prism(),
                                        enumerate_vertices(*catalog::firefly()), enumerate_vertices(*catalog::squit())};
  for (const auto& poly : polys) {
    for (int trial = 0; trial < 6; ++trial) {
      auto p = testsupport::combine(testsupport::random_weights(rng, poly.vertex_count()), poly.vertices());
      CHECK(extreme_decompositions(poly, p).size() == brute_decomposition_count(poly, p));
    }
    auto center = poly.barycenter();
    CHECK(extreme_decompositions(poly, center).size() == brute_decomposition_count(poly, center));
  }
  // Square center: only the two diagonals are strictly positive and independent.
  CHECK(extreme_decompositions(catalog::square(), v({Rational(1, 2), Rational(1, 2)})).size() == 2);
}

TEST_CASE("mixing entropy on a simplex is the entropy of the barycentric weights") {
  testsupport::Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto poly = testsupport::random_polytope(rng, 2 + trial % 2, true);
    auto w = testsupport::random_weights(rng, poly.vertex_count());
    auto p = testsupport::combine(w, poly.vertices());
    CHECK(std::fabs(mixing_entropy(poly, p).bits - testsupport::shannon(w)) < 1e-12);
  }
}

TEST_CASE("mixing entropy examples") {
  // (3/4, 1/4) lies on the anti-diagonal: 3/4 (1,0) + 1/4 (0,1).
  auto r = mixing_entropy(catalog::square(), v({Rational(3, 4), Rational(1, 4)}));
  CHECK(r.bits == doctest::Approx(testsupport::shannon(std::vector<double>{0.75, 0.25})).epsilon(1e-12));
  CHECK(r.witness.reconstructs(catalog::square()));
  CHECK_THROWS_AS(mixing_entropy(catalog::square(), v({Rational(2), Rational(0)})), GeometryError);
}

TEST_CASE("monoentropicity scan") {
  auto bit = catalog::bit();
  CHECK(monoentropicity_scan(bit, enumerate_vertices(*bit), 50, 0).clean());
  auto c3 = catalog::classical(3);
  CHECK(monoentropicity_scan(c3, enumerate_vertices(*c3), 50, 0).clean());

  auto sq = catalog::squit();
  auto report = monoentropicity_scan(sq, enumerate_vertices(*sq), 50, 0);
  bool found = false;
  for (const auto& w : report.witnesses)
    found = found || (std::fabs(w.measurement) < 1e-12 && std::fabs(w.mixing - 1.0) < 1e-12);
  CHECK(found);

  auto again = monoentropicity_scan(sq, enumerate_vertices(*sq), 50, 0);
  REQUIRE(again.witnesses.size() == report.witnesses.size());
  for (std::size_t i = 0; i < report.witnesses.size(); ++i) CHECK(again.witnesses[i].point == report.witnesses[i].point);
}
