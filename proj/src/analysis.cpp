#include "gptent/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace gptent {

namespace {

std::vector<std::size_t> intersect(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void require(bool condition, const std::string& what) {
  if (!condition) throw ConstructionError("concavity construction: " + what);
}

ConcavityResult construct(const StateSpacePolytope& poly) {
  const std::size_t d = poly.dim();
  if (d == 0) return NotApplicable{NotApplicable::Reason::degenerate, "polytope is a single point"};
  if (poly.is_simplex()) return NotApplicable{NotApplicable::Reason::simplex, "polytope is a simplex"};

  auto facets = enumerate_facets(poly);
  for (const auto& f : facets) {
    if (f.simplicial) continue;
    auto inner = construct(poly.face(f.vertices));
    auto* w = std::get_if<ConcavityWitness>(&inner);
    require(w != nullptr, "a non-simplicial facet yielded no witness");
    auto lift = [&](std::vector<std::size_t>& idx) {
      for (auto& i : idx) i = f.vertices[i];
    };
    for (auto& level : w->trace.descent) lift(level);
    w->trace.descent.insert(w->trace.descent.begin(), f.vertices);
    lift(w->trace.f1);
    lift(w->trace.f2);
    w->trace.v = f.vertices[w->trace.v];
    return inner;
  }

  // Every facet is a (d-1)-simplex with d vertices.
  const Facet* f1 = nullptr;
  const Facet* f2 = nullptr;
  std::vector<std::size_t> ridge;
  for (std::size_t i = 0; i < facets.size() && !f1; ++i)
    for (std::size_t j = i + 1; j < facets.size(); ++j) {
      auto common = intersect(facets[i].vertices, facets[j].vertices);
      if (common.size() == d - 1) {
        f1 = &facets[i];
        f2 = &facets[j];
        ridge = std::move(common);
        break;
      }
    }
  require(f1 != nullptr, "no pair of facets meets in a (d-2)-simplex");

  std::size_t v = poly.vertex_count();
  for (std::size_t i = 0; i < poly.vertex_count(); ++i) {
    bool in1 = std::binary_search(f1->vertices.begin(), f1->vertices.end(), i);
    bool in2 = std::binary_search(f2->vertices.begin(), f2->vertices.end(), i);
    if (!in1 && !in2) {
      v = i;
      break;
    }
  }
  require(v < poly.vertex_count(), "no vertex outside F1 and F2");

  ConstructionTrace tr;
  tr.dim = d;
  tr.f1 = f1->vertices;
  tr.f2 = f2->vertices;
  tr.v = v;
  tr.rho1 = poly.barycenter(f1->vertices);
  tr.rho2 = poly.barycenter(f2->vertices);
  tr.rho3 = poly.barycenter(ridge);

  // L = T n H with T = conv(rho1, rho2, rho3) and H = conv(ridge, V).
  std::vector<std::size_t> h_vertices = ridge;
  h_vertices.push_back(v);
  std::sort(h_vertices.begin(), h_vertices.end());
  const RationalVector u1 = linalg::sub(tr.rho1, tr.rho3);
  const RationalVector u2 = linalg::sub(tr.rho2, tr.rho3);
  linalg::Matrix dirs;
  for (std::size_t i = 1; i < ridge.size(); ++i) dirs.push_back(linalg::sub(poly.vertices()[ridge[i]], poly.vertices()[ridge[0]]));
  dirs.push_back(linalg::sub(poly.vertices()[v], poly.vertices()[ridge[0]]));

  const std::size_t n = poly.ambient_dim();
  const std::size_t cols = 2 + dirs.size();
  linalg::Matrix system(n, RationalVector(cols, Rational(0)));
  for (std::size_t r = 0; r < n; ++r) {
    system[r][0] = u1[r];
    system[r][1] = u2[r];
    for (std::size_t k = 0; k < dirs.size(); ++k) system[r][2 + k] = -dirs[k][r];
  }
  auto null = linalg::nullspace(system, cols);
  require(null.size() == 1, "T n H is not one-dimensional (nullspace of size " + std::to_string(null.size()) + ")");
  Rational s = null[0][0], t = null[0][1];
  if (s < 0 || t < 0) s = -s, t = -t;
  require(s >= 0 && t >= 0 && (s > 0 || t > 0), "L leaves T at rho3");

  const RationalVector dir = linalg::add(linalg::scale(u1, s), linalg::scale(u2, t));
  auto beta0 = barycentric_weights(poly, h_vertices, tr.rho3);
  auto beta1 = barycentric_weights(poly, h_vertices, linalg::add(tr.rho3, dir));
  require(beta0 && beta1, "H is not a simplex containing rho3");

  Rational tau = Rational(1) / (s + t);
  for (std::size_t k = 0; k < h_vertices.size(); ++k) {
    Rational delta = (*beta1)[k] - (*beta0)[k];
    if (delta < 0) tau = std::min(tau, Rational(-(*beta0)[k] / delta));
  }
  require(tau > 0, "L degenerates to the point rho3");

  const RationalVector rho = linalg::add(tr.rho3, linalg::scale(dir, tau));
  auto h_weights = barycentric_weights(poly, h_vertices, rho);
  require(h_weights.has_value(), "rho left the affine hull of H");
  tr.s = s;
  tr.t = t;
  tr.tau = tau;
  tr.l_start = tr.rho3;
  tr.l_end = rho;
  tr.h_weights = *h_weights;
  bool on_boundary = std::any_of(h_weights->begin(), h_weights->end(), [](const Rational& x) { return is_zero(x); });
  tr.case_number = on_boundary ? 1 : 2;

  const Rational p1 = tau * s, p2 = tau * t, p3 = 1 - tau * (s + t);
  if (!on_boundary) require(is_zero(p3), "interior rho does not lie on the segment rho1 rho2");

  tr.s_rho1 = mixing_entropy(poly, tr.rho1).bits;
  tr.s_rho2 = mixing_entropy(poly, tr.rho2).bits;
  tr.s_rho3 = mixing_entropy(poly, tr.rho3).bits;

  ConcavityWitness w;
  w.rho = rho;
  const std::pair<Rational, const RationalVector*> terms[3] = {{p1, &tr.rho1}, {p2, &tr.rho2}, {p3, &tr.rho3}};
  const double entropies[3] = {tr.s_rho1, tr.s_rho2, tr.s_rho3};
  for (std::size_t i = 0; i < 3; ++i) {
    if (is_zero(terms[i].first)) continue;
    w.mixture.push_back({terms[i].first, *terms[i].second, entropies[i]});
    w.mixture_avg += to_double(terms[i].first) * entropies[i];
  }
  w.s_rho = mixing_entropy(poly, rho).bits;
  w.gap = w.mixture_avg - w.s_rho;
  w.trace = std::move(tr);
  return w;
}

}  // namespace

ConcavityResult find_concavity_violation(const StateSpacePolytope& poly) { return construct(poly); }

bool verify_witness(const StateSpacePolytope& poly, const ConcavityWitness& w, const SchurConcaveFunctional& functional) {
  if (w.mixture.empty() || w.rho.size() != poly.ambient_dim()) return false;
  Rational total = 0;
  RationalVector sum(poly.ambient_dim(), Rational(0));
  for (const auto& term : w.mixture) {
    if (term.weight <= 0 || term.point.size() != poly.ambient_dim()) return false;
    total += term.weight;
    sum = linalg::add(sum, linalg::scale(term.point, term.weight));
  }
  if (total != 1 || sum != w.rho) return false;
  for (const auto& term : w.mixture)
    if (!membership(poly, term.point).inside) return false;
  if (!membership(poly, w.rho).inside) return false;

  double avg = 0.0;
  for (const auto& term : w.mixture) avg += to_double(term.weight) * mixing_entropy(poly, term.point, functional).bits;
  double s_rho = mixing_entropy(poly, w.rho, functional).bits;
  return avg - s_rho > kTolerance;
}

}  // namespace gptent
