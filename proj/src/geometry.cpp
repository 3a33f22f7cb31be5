#include "gptent/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace gptent {

namespace {

// Visits k-subsets of {0..n-1} in lexicographic order until `fn` returns false.
template <class Fn>
bool for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return true;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(static_cast<const std::vector<std::size_t>&>(idx))) return false;
    if (k == 0) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Barycentric weights of y over the local points in `subset` if they are
// affinely independent and the point lies on their affine hull.
std::optional<RationalVector> local_barycentric(const std::vector<RationalVector>& local,
                                                const std::vector<std::size_t>& subset, const RationalVector& y) {
  const std::size_t d = y.size();
  const std::size_t k = subset.size();
  linalg::Matrix a(d + 1, RationalVector(k));
  RationalVector b(d + 1);
  for (std::size_t row = 0; row < d; ++row) {
    for (std::size_t c = 0; c < k; ++c) a[row][c] = local[subset[c]][row];
    b[row] = y[row];
  }
  for (std::size_t c = 0; c < k; ++c) a[d][c] = 1;
  b[d] = 1;
  auto sol = linalg::solve(a, b, k);
  if (!sol.consistent || !sol.unique) return std::nullopt;
  return sol.particular;
}

// Nonnegative convex weights over some (d+1)-subset, if y is in the hull.
std::optional<std::pair<std::vector<std::size_t>, RationalVector>> find_in_hull(
    const std::vector<RationalVector>& local, const RationalVector& y) {
  const std::size_t d = y.size();
  const std::size_t k = std::min(local.size(), d + 1);
  std::optional<std::pair<std::vector<std::size_t>, RationalVector>> found;
  for_each_combination(local.size(), k, [&](const std::vector<std::size_t>& subset) {
    auto w = local_barycentric(local, subset, y);
    if (!w) return true;
    for (const auto& x : *w)
      if (x < 0) return true;
    found.emplace(subset, *w);
    return false;
  });
  return found;
}

bool point_in_hull(const std::vector<RationalVector>& points, const RationalVector& p) {
  if (points.empty()) return false;
  AffineFrame frame(points);
  auto y = frame.to_local(p);
  if (!y) return false;
  std::vector<RationalVector> local;
  for (const auto& q : points) local.push_back(*frame.to_local(q));
  return find_in_hull(local, *y).has_value();
}

Decomposition make_decomposition(const std::vector<std::size_t>& subset, const RationalVector& weights,
                                 const RationalVector& target) {
  Decomposition d;
  d.target = target;
  for (std::size_t i = 0; i < subset.size(); ++i)
    if (!is_zero(weights[i])) d.terms.push_back({weights[i], subset[i]});
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// AffineFrame

AffineFrame::AffineFrame(const std::vector<RationalVector>& points) {
  if (points.empty()) return;
  origin_ = points.front();
  const std::size_t n = origin_.size();
  for (std::size_t i = 1; i < points.size(); ++i) {
    auto candidate = basis_;
    candidate.push_back(linalg::sub(points[i], origin_));
    if (linalg::rank(candidate, n) == candidate.size()) basis_ = std::move(candidate);
  }
  const std::size_t d = basis_.size();
  pivots_ = linalg::row_reduce(basis_, n).pivots;
  // (p - o)[pivots] = B_I^T y, so y = (B_I^T)^{-1} (p - o)[pivots].
  linalg::Matrix bt(d, RationalVector(d));
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) bt[r][c] = basis_[c][pivots_[r]];
  local_map_.assign(d, RationalVector(d));
  for (std::size_t c = 0; c < d; ++c) {
    RationalVector e(d, Rational(0));
    e[c] = 1;
    auto col = linalg::solve(bt, e, d).particular;
    for (std::size_t r = 0; r < d; ++r) local_map_[r][c] = col[r];
  }
}

std::optional<RationalVector> AffineFrame::to_local(const RationalVector& p) const {
  if (p.size() != origin_.size()) return std::nullopt;
  const std::size_t d = dim();
  RationalVector diff = linalg::sub(p, origin_);
  RationalVector y(d, Rational(0));
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) y[r] += local_map_[r][c] * diff[pivots_[c]];
  if (to_ambient(y) != p) return std::nullopt;
  return y;
}

RationalVector AffineFrame::to_ambient(const RationalVector& y) const {
  RationalVector p = origin_;
  for (std::size_t k = 0; k < basis_.size(); ++k)
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += y[k] * basis_[k][i];
  return p;
}

std::pair<RationalVector, Rational> AffineFrame::lift_functional(const RationalVector& local_normal,
                                                                 const Rational& local_offset) const {
  // n.y = n.M (p - o)_I = (M^T n).(p - o)_I
  const std::size_t d = dim();
  RationalVector g(ambient_dim(), Rational(0));
  for (std::size_t c = 0; c < d; ++c) {
    Rational acc = 0;
    for (std::size_t r = 0; r < d; ++r) acc += local_map_[r][c] * local_normal[r];
    g[pivots_[c]] = acc;
  }
  return {g, local_offset + linalg::dot(g, origin_)};
}

RationalVector AffineFrame::off_hull_functional(const RationalVector& p) const {
  RationalVector diff = linalg::sub(p, origin_);
  if (basis_.empty()) return diff;
  for (auto& n : linalg::nullspace(basis_, ambient_dim()))
    if (!is_zero(linalg::dot(n, diff))) return n;
  return RationalVector(ambient_dim(), Rational(0));
}

// ---------------------------------------------------------------------------
// StateSpacePolytope

StateSpacePolytope::StateSpacePolytope(std::vector<std::string> labels, std::vector<RationalVector> vertices,
                                       Source source)
    : labels_(std::move(labels)), vertices_(std::move(vertices)), source_(source) {
  if (vertices_.empty()) throw GeometryError("polytope has no vertices");
  for (const auto& v : vertices_)
    if (v.size() != labels_.size()) throw GeometryError("vertex dimension does not match the label count");
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      if (vertices_[i] == vertices_[j]) throw GeometryError("repeated vertex " + std::to_string(j));
  for (std::size_t i = 0; i < vertices_.size() && vertices_.size() > 1; ++i) {
    std::vector<RationalVector> others;
    for (std::size_t j = 0; j < vertices_.size(); ++j)
      if (j != i) others.push_back(vertices_[j]);
    if (point_in_hull(others, vertices_[i])) {
      throw GeometryError("vertex " + std::to_string(i) + " lies in the convex hull of the others");
    }
  }
  init_frame();
}

void StateSpacePolytope::init_frame() {
  frame_ = AffineFrame(vertices_);
  local_vertices_.clear();
  for (const auto& v : vertices_) local_vertices_.push_back(*frame_.to_local(v));
}

StateSpacePolytope StateSpacePolytope::hull(std::vector<std::string> labels, const std::vector<RationalVector>& points) {
  std::vector<RationalVector> kept;
  for (const auto& p : points)
    if (std::find(kept.begin(), kept.end(), p) == kept.end()) kept.push_back(p);
  bool removed = true;
  while (removed && kept.size() > 1) {
    removed = false;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      std::vector<RationalVector> others;
      for (std::size_t j = 0; j < kept.size(); ++j)
        if (j != i) others.push_back(kept[j]);
      if (point_in_hull(others, kept[i])) {
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
        break;
      }
    }
  }
  StateSpacePolytope poly;
  poly.labels_ = std::move(labels);
  poly.vertices_ = std::move(kept);
  for (const auto& v : poly.vertices_)
    if (v.size() != poly.labels_.size()) throw GeometryError("point dimension does not match the label count");
  poly.init_frame();
  return poly;
}

RationalVector StateSpacePolytope::barycenter() const {
  std::vector<std::size_t> all(vertices_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return barycenter(all);
}

RationalVector StateSpacePolytope::barycenter(const std::vector<std::size_t>& subset) const {
  RationalVector c(ambient_dim(), Rational(0));
  for (auto i : subset) c = linalg::add(c, vertices_.at(i));
  return linalg::scale(c, Rational(1, static_cast<long>(subset.size())));
}

StateSpacePolytope StateSpacePolytope::face(const std::vector<std::size_t>& subset) const {
  std::vector<RationalVector> vs;
  for (auto i : subset) vs.push_back(vertices_.at(i));
  StateSpacePolytope poly;
  poly.labels_ = labels_;
  poly.vertices_ = std::move(vs);
  poly.source_ = Source::explicit_vertices;
  poly.init_frame();
  return poly;
}

std::optional<RationalVector> barycentric_weights(const StateSpacePolytope& poly, const std::vector<std::size_t>& subset,
                                                  const RationalVector& point) {
  auto y = poly.frame().to_local(point);
  if (!y) return std::nullopt;
  std::vector<RationalVector> local;
  for (std::size_t i = 0; i < poly.vertex_count(); ++i) local.push_back(poly.local_vertex(i));
  return local_barycentric(local, subset, *y);
}

// ---------------------------------------------------------------------------
// Decomposition

std::vector<std::size_t> Decomposition::support() const {
  std::vector<std::size_t> s;
  for (const auto& t : terms) s.push_back(t.vertex);
  return s;
}

std::vector<Rational> Decomposition::weights() const {
  std::vector<Rational> w;
  for (const auto& t : terms) w.push_back(t.weight);
  return w;
}

bool Decomposition::reconstructs(const StateSpacePolytope& poly) const {
  Rational total = 0;
  RationalVector sum(poly.ambient_dim(), Rational(0));
  for (const auto& t : terms) {
    if (t.weight <= 0 || t.vertex >= poly.vertex_count()) return false;
    total += t.weight;
    sum = linalg::add(sum, linalg::scale(poly.vertices()[t.vertex], t.weight));
  }
  return total == 1 && sum == target;
}

// ---------------------------------------------------------------------------
// Operations

StateSpacePolytope enumerate_vertices(const TestSpace& space) {
  // Omega(A) is the standard-form polyhedron {alpha >= 0 : A alpha = 1}; its
  // vertices are the basic feasible solutions, one per linearly independent
  // support with a strictly positive solution.
  const std::size_t n = space.outcome_count();
  const std::size_t m = space.test_count();
  linalg::Matrix incidence(m, RationalVector(n, Rational(0)));
  for (std::size_t t = 0; t < m; ++t)
    for (auto x : space.test_outcomes(t)) incidence[t][x] = 1;
  const std::size_t r = linalg::rank(incidence, n);

  std::vector<RationalVector> vertices;
  for (std::size_t k = 1; k <= r; ++k) {
    for_each_combination(n, k, [&](const std::vector<std::size_t>& support) {
      linalg::Matrix a(m, RationalVector(k));
      for (std::size_t t = 0; t < m; ++t)
        for (std::size_t c = 0; c < k; ++c) a[t][c] = incidence[t][support[c]];
      auto sol = linalg::solve(a, RationalVector(m, Rational(1)), k);
      if (!sol.consistent || !sol.unique) return true;
      for (const auto& x : sol.particular)
        if (x <= 0) return true;
      RationalVector v(n, Rational(0));
      for (std::size_t c = 0; c < k; ++c) v[support[c]] = sol.particular[c];
      vertices.push_back(std::move(v));
      return true;
    });
  }
  if (vertices.empty()) throw ModelError("test space '" + space.name() + "' admits no states");
  return StateSpacePolytope(space.outcomes(), std::move(vertices), StateSpacePolytope::Source::test_space);
}

Membership membership(const StateSpacePolytope& poly, const RationalVector& point) {
  if (point.size() != poly.ambient_dim()) {
    throw GeometryError("point has " + std::to_string(point.size()) + " coordinates, polytope has " +
                        std::to_string(poly.ambient_dim()));
  }
  Membership m;
  const auto& frame = poly.frame();
  auto y = frame.to_local(point);
  if (!y) {
    RationalVector n = frame.off_hull_functional(point);
    Rational at_hull = linalg::dot(n, frame.origin());
    if (linalg::dot(n, point) > at_hull) n = linalg::scale(n, Rational(-1)), at_hull = -at_hull;
    m.separator = Halfspace{n, at_hull};
    return m;
  }
  std::vector<RationalVector> local;
  for (std::size_t i = 0; i < poly.vertex_count(); ++i) local.push_back(poly.local_vertex(i));
  if (auto found = find_in_hull(local, *y)) {
    m.inside = true;
    m.certificate = make_decomposition(found->first, found->second, point);
    return m;
  }
  for (const auto& f : enumerate_facets(poly)) {
    if (linalg::dot(f.functional.normal, point) < f.functional.offset) {
      m.separator = f.functional;
      break;
    }
  }
  return m;
}

std::vector<Facet> enumerate_facets(const StateSpacePolytope& poly) {
  const std::size_t d = poly.dim();
  std::vector<Facet> facets;
  if (d == 0) return facets;
  const std::size_t n = poly.vertex_count();
  std::set<std::vector<std::size_t>> seen;
  for_each_combination(n, d, [&](const std::vector<std::size_t>& subset) {
    linalg::Matrix diffs;
    for (std::size_t j = 1; j < subset.size(); ++j)
      diffs.push_back(linalg::sub(poly.local_vertex(subset[j]), poly.local_vertex(subset[0])));
    linalg::Matrix normals = diffs.empty() ? linalg::Matrix{[&] {
      RationalVector e(d, Rational(0));
      e[0] = 1;
      return e;
    }()}
                                           : linalg::nullspace(diffs, d);
    if (normals.size() != 1) return true;
    RationalVector normal = normals.front();
    Rational offset = linalg::dot(normal, poly.local_vertex(subset[0]));
    bool any_pos = false, any_neg = false;
    std::vector<std::size_t> on;
    for (std::size_t i = 0; i < n; ++i) {
      Rational v = linalg::dot(normal, poly.local_vertex(i)) - offset;
      if (v > 0) any_pos = true;
      else if (v < 0) any_neg = true;
      else on.push_back(i);
    }
    if (any_pos && any_neg) return true;
    if (any_neg) normal = linalg::scale(normal, Rational(-1)), offset = -offset;
    if (!seen.insert(on).second) return true;
    auto [g, c] = poly.frame().lift_functional(normal, offset);
    Facet f;
    f.vertices = on;
    f.functional = Halfspace{g, c};
    f.dim = d - 1;
    f.simplicial = on.size() == d;
    facets.push_back(std::move(f));
    return true;
  });
  std::sort(facets.begin(), facets.end(), [](const Facet& a, const Facet& b) { return a.vertices < b.vertices; });
  return facets;
}

void for_each_extreme_decomposition(const StateSpacePolytope& poly, const RationalVector& point,
                                    const std::function<bool(const Decomposition&)>& visit) {
  if (point.size() != poly.ambient_dim()) throw GeometryError("point dimension does not match the polytope");
  auto y = poly.frame().to_local(point);
  auto outside = [&]() {
    auto m = membership(poly, point);
    std::string msg = "point is outside the polytope";
    if (m.separator) {
      msg += "; separating functional (";
      for (std::size_t i = 0; i < m.separator->normal.size(); ++i)
        msg += (i ? "," : "") + to_string(m.separator->normal[i]);
      msg += ") >= " + to_string(m.separator->offset);
    }
    return GeometryError(msg);
  };
  if (!y) throw outside();
  std::vector<RationalVector> local;
  for (std::size_t i = 0; i < poly.vertex_count(); ++i) local.push_back(poly.local_vertex(i));
  bool any = false;
  bool stopped = false;
  const std::size_t max_size = std::min(poly.vertex_count(), poly.dim() + 1);
  for (std::size_t k = 1; k <= max_size && !stopped; ++k) {
    for_each_combination(poly.vertex_count(), k, [&](const std::vector<std::size_t>& subset) {
      auto w = local_barycentric(local, subset, *y);
      if (!w) return true;
      for (const auto& x : *w)
        if (x <= 0) return true;
      any = true;
      if (!visit(make_decomposition(subset, *w, point))) {
        stopped = true;
        return false;
      }
      return true;
    });
  }
  if (!any) throw outside();
}

std::vector<Decomposition> extreme_decompositions(const StateSpacePolytope& poly, const RationalVector& point) {
  std::vector<Decomposition> out;
  for_each_extreme_decomposition(poly, point, [&](const Decomposition& d) {
    out.push_back(d);
    return true;
  });
  return out;
}

EntropyResult<Decomposition> mixing_entropy(const StateSpacePolytope& poly, const RationalVector& point,
                                            const SchurConcaveFunctional& functional) {
  constexpr double kTie = 1e-12;
  EntropyResult<Decomposition> best{std::numeric_limits<double>::infinity(), {}};
  for_each_extreme_decomposition(poly, point, [&](const Decomposition& d) {
    auto w = d.weights();
    double h = functional(std::span<const Rational>(w));
    if (h < best.bits - kTie || (h <= best.bits + kTie && d.support() < best.witness.support())) {
      best = {h, d};
    }
    return true;
  });
  return best;
}

MonoentropicityReport monoentropicity_scan(const TestSpacePtr& space, const StateSpacePolytope& poly,
                                           std::size_t sample_count, std::uint64_t seed) {
  if (poly.labels() != space->outcomes()) {
    throw GeometryError("polytope coordinates do not match the outcomes of '" + space->name() + "'");
  }
  MonoentropicityReport report;
  auto evaluate = [&](const std::string& kind, const RationalVector& point) {
    State state(space, point);
    double h = measurement_entropy(state).bits;
    double s = mixing_entropy(poly, point).bits;
    double gap = std::abs(h - s);
    ++report.evaluated;
    report.max_gap = std::max(report.max_gap, gap);
    if (gap > kTolerance) report.witnesses.push_back({kind, point, h, s});
  };
  const auto& vs = poly.vertices();
  for (const auto& v : vs) evaluate("vertex", v);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      evaluate("midpoint", linalg::scale(linalg::add(vs[i], vs[j]), Rational(1, 2)));
  evaluate("barycenter", poly.barycenter());
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < sample_count; ++s) {
    std::vector<long> w(vs.size());
    long total = 0;
    for (auto& x : w) total += (x = static_cast<long>(rng() % 17));
    if (total == 0) w[0] = total = 1;
    RationalVector point(poly.ambient_dim(), Rational(0));
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (w[i]) point = linalg::add(point, linalg::scale(vs[i], Rational(w[i], total)));
    evaluate("sample", point);
  }
  return report;
}

}  // namespace gptent
