#ifndef GPTENT_GEOMETRY_HPP
#define GPTENT_GEOMETRY_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gptent/core_model.hpp"
#include "gptent/linalg.hpp"

namespace gptent {

/// Exact affine coordinate system on the affine hull of a point set.
///
/// The origin is the first point and the basis is a greedy selection of
/// difference vectors. Local coordinates are recovered from a set of pivot
/// ambient coordinates on which the basis is invertible.
class AffineFrame {
 public:
  AffineFrame() = default;
  explicit AffineFrame(const std::vector<RationalVector>& points);

  std::size_t dim() const { return basis_.size(); }
  std::size_t ambient_dim() const { return origin_.size(); }
  const RationalVector& origin() const { return origin_; }
  const linalg::Matrix& basis() const { return basis_; }

  /// Local coordinates of `p`, or nullopt if `p` is off the affine hull.
  std::optional<RationalVector> to_local(const RationalVector& p) const;
  RationalVector to_ambient(const RationalVector& y) const;

  /// Ambient functional g, offset c with g.p - c = n.y(p) - offset for p on the hull.
  std::pair<RationalVector, Rational> lift_functional(const RationalVector& local_normal,
                                                      const Rational& local_offset) const;
  /// A normal n with n.p != n.origin; only valid when p is off the hull.
  RationalVector off_hull_functional(const RationalVector& p) const;

 private:
  RationalVector origin_;
  linalg::Matrix basis_;
  std::vector<std::size_t> pivots_;
  linalg::Matrix local_map_;  // d x d, y = local_map_ * (p - origin)[pivots]
};

/// A polytope given by its irredundant vertex list in labeled coordinates.
class StateSpacePolytope {
 public:
  enum class Source { test_space, explicit_vertices };

  /// Throws GeometryError if vertices repeat, differ in size, or are redundant.
  StateSpacePolytope(std::vector<std::string> labels, std::vector<RationalVector> vertices,
                     Source source = Source::explicit_vertices);

  /// Convex hull of arbitrary points; redundant and repeated points are dropped.
  static StateSpacePolytope hull(std::vector<std::string> labels, const std::vector<RationalVector>& points);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<RationalVector>& vertices() const { return vertices_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t dim() const { return frame_.dim(); }
  std::size_t ambient_dim() const { return labels_.size(); }
  Source source() const { return source_; }
  const AffineFrame& frame() const { return frame_; }
  const RationalVector& local_vertex(std::size_t i) const { return local_vertices_[i]; }

  bool is_simplex() const { return vertices_.size() == dim() + 1; }
  RationalVector barycenter() const;
  RationalVector barycenter(const std::vector<std::size_t>& subset) const;
  /// The face spanned by the given vertices, as its own explicit polytope.
  StateSpacePolytope face(const std::vector<std::size_t>& subset) const;

 private:
  StateSpacePolytope() = default;
  void init_frame();

  std::vector<std::string> labels_;
  std::vector<RationalVector> vertices_;
  Source source_ = Source::explicit_vertices;
  AffineFrame frame_;
  std::vector<RationalVector> local_vertices_;
};

/// Unique barycentric weights of `point` over an affinely independent vertex
/// subset, or nullopt when the subset is dependent or misses the point.
std::optional<RationalVector> barycentric_weights(const StateSpacePolytope& poly,
                                                  const std::vector<std::size_t>& subset,
                                                  const RationalVector& point);

struct Decomposition {
  struct Term {
    Rational weight;
    std::size_t vertex;
  };
  std::vector<Term> terms;  // ascending vertex index, every weight > 0
  RationalVector target;

  std::vector<std::size_t> support() const;
  std::vector<Rational> weights() const;
  /// Exact reconstruction check against the polytope's vertices.
  bool reconstructs(const StateSpacePolytope& poly) const;
};

/// Supporting inequality normal . v >= offset.
struct Halfspace {
  RationalVector normal;
  Rational offset;
};

struct Facet {
  std::vector<std::size_t> vertices;  // ascending
  Halfspace functional;               // every vertex satisfies it, facet vertices with equality
  std::size_t dim = 0;
  bool simplicial = false;
};

struct Membership {
  bool inside = false;
  std::optional<Decomposition> certificate;  // when inside
  std::optional<Halfspace> separator;        // when outside: vertices satisfy it, the point does not
};

/// Extreme points of Omega(A) = {alpha >= 0 : sum over each test = 1}.
/// Throws ModelError if the state space is empty.
StateSpacePolytope enumerate_vertices(const TestSpace& space);

/// Throws GeometryError on a dimension mismatch.
Membership membership(const StateSpacePolytope& poly, const RationalVector& point);

/// All facets, sorted by vertex index list. Empty for a single point.
std::vector<Facet> enumerate_facets(const StateSpacePolytope& poly);

/// Calls `visit` with every decomposition of `point` supported on an affinely
/// independent vertex subset with strictly positive weights. Supports are
/// visited by size, then lexicographically. Returning false stops the walk.
/// Throws GeometryError if the point is outside.
void for_each_extreme_decomposition(const StateSpacePolytope& poly, const RationalVector& point,
                                    const std::function<bool(const Decomposition&)>& visit);
std::vector<Decomposition> extreme_decompositions(const StateSpacePolytope& poly, const RationalVector& point);

/// Minimum of the functional over extreme decompositions; ties go to the
/// lexicographically smallest support.
EntropyResult<Decomposition> mixing_entropy(const StateSpacePolytope& poly, const RationalVector& point,
                                            const SchurConcaveFunctional& functional = SchurConcaveFunctional::shannon());

struct MonoentropicityWitness {
  std::string kind;  // vertex, midpoint, barycenter, sample
  RationalVector point;
  double measurement = 0.0;
  double mixing = 0.0;
};

struct MonoentropicityReport {
  std::size_t evaluated = 0;
  double max_gap = 0.0;
  std::vector<MonoentropicityWitness> witnesses;  // |H - S| > kTolerance
  bool clean() const { return witnesses.empty(); }
};

/// Compares measurement and mixing entropy on vertices, pairwise vertex
/// midpoints, the barycenter, and `sample_count` seeded random mixtures.
/// Throws GeometryError when the polytope's labels differ from the outcomes.
MonoentropicityReport monoentropicity_scan(const TestSpacePtr& space, const StateSpacePolytope& poly,
                                           std::size_t sample_count, std::uint64_t seed = 0);

}  // namespace gptent

#endif  // GPTENT_GEOMETRY_HPP
