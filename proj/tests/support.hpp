#ifndef GPTENT_TESTS_SUPPORT_HPP
#define GPTENT_TESTS_SUPPORT_HPP

// Seeded generators and independent floating-point oracles shared by the
// unit tests and the acceptance binary. Nothing here calls the library's
// entropy or decomposition search.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gptent/catalog.hpp"
#include "gptent/composite.hpp"
#include "gptent/geometry.hpp"
#include "gptent/protocols.hpp"

namespace testsupport {

using gptent::Rational;
using gptent::RationalVector;
using Rng = std::mt19937_64;

inline std::size_t below(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

/// Positive exact weights summing to one; some may be zero when `allow_zero`.
inline std::vector<Rational> random_weights(Rng& rng, std::size_t n, bool allow_zero = true, int scale = 12) {
  std::vector<long> raw(n);
  long total = 0;
  do {
    total = 0;
    for (auto& r : raw) {
      r = static_cast<long>(below(rng, scale + 1)) + (allow_zero ? 0 : 1);
      total += r;
    }
  } while (total == 0);
  std::vector<Rational> w;
  for (auto r : raw) w.emplace_back(r, total);
  return w;
}

inline RationalVector combine(const std::vector<Rational>& w, const std::vector<RationalVector>& points) {
  RationalVector out(points.front().size(), Rational(0));
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += w[i] * points[i][k];
  return out;
}

inline gptent::State random_state(Rng& rng, const gptent::TestSpacePtr& space, const gptent::StateSpacePolytope& poly) {
  return gptent::State(space, combine(random_weights(rng, poly.vertex_count()), poly.vertices()));
}

/// Squit state (p, 1-p, q, 1-q) in outcome order.
inline RationalVector random_squit_values(Rng& rng, int scale = 8) {
  Rational p(static_cast<long>(below(rng, scale + 1)), scale), q(static_cast<long>(below(rng, scale + 1)), scale);
  return {p, 1 - p, q, 1 - q};
}

/// Random test space on 4..7 outcomes with 2..4 tests of size 2..3 and a
/// nonempty, not necessarily classical, state space.
inline gptent::TestSpacePtr random_test_space(Rng& rng) {
  while (true) {
    std::size_t n = 4 + below(rng, 4);
    std::size_t k = 2 + below(rng, 3);
    std::vector<std::string> outcomes;
    for (std::size_t i = 0; i < n; ++i) outcomes.push_back("o" + std::to_string(i));
    std::vector<std::vector<std::string>> tests;
    std::set<std::set<std::size_t>> seen;
    std::set<std::size_t> covered;
    for (std::size_t t = 0; t < k; ++t) {
      std::size_t size = 2 + below(rng, 2);
      std::set<std::size_t> chosen;
      while (chosen.size() < size) chosen.insert(below(rng, n));
      if (!seen.insert(chosen).second) continue;
      std::vector<std::string> test;
      for (auto c : chosen) {
        test.push_back(outcomes[c]);
        covered.insert(c);
      }
      tests.push_back(test);
    }
    if (covered.size() != n || tests.size() < 2) continue;
    try {
      auto space = gptent::make_space("R", tests);
      gptent::enumerate_vertices(*space);
      return space;
    } catch (const gptent::Error&) {
    }
  }
}

/// Random integer points in [0, range]^dim until the hull is full-dimensional
/// and, when `simplex` is false, not a simplex.
inline gptent::StateSpacePolytope random_polytope(Rng& rng, std::size_t dim, bool simplex, long range = 6) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < dim; ++i) labels.push_back(std::string(1, static_cast<char>('x' + i)));
  while (true) {
    std::size_t count = simplex ? dim + 1 : dim + 2 + below(rng, 4);
    std::vector<RationalVector> pts;
    for (std::size_t i = 0; i < count; ++i) {
      RationalVector p;
      for (std::size_t k = 0; k < dim; ++k) p.emplace_back(static_cast<long>(below(rng, range + 1)));
      pts.push_back(p);
    }
    try {
      auto poly = gptent::StateSpacePolytope::hull(labels, pts);
      if (poly.dim() != dim) continue;
      if (poly.is_simplex() == simplex) return poly;
    } catch (const gptent::Error&) {
    }
  }
}

/// Random non-signaling state on the PR composite: a mixture of the PR box
/// and product states of the two sides.
inline gptent::JointState random_box(Rng& rng) {
  auto pr = gptent::pr_box();
  auto a = gptent::pr_side('A'), b = gptent::pr_side('B');
  std::vector<RationalVector> parts{pr.values()};
  for (int i = 0; i < 2; ++i) {
    gptent::State sa(a, random_squit_values(rng)), sb(b, random_squit_values(rng));
    parts.push_back(gptent::product_state({sa, sb}).values());
  }
  return gptent::JointState(pr.system(), combine(random_weights(rng, parts.size()), parts));
}

/// sum_i w_i (x_i (x) y_i) on the Foulis-Randall product of two spaces.
inline gptent::JointState random_separable(Rng& rng, const gptent::TestSpacePtr& a, const gptent::StateSpacePolytope& pa,
                                           const gptent::TestSpacePtr& b, const gptent::StateSpacePolytope& pb,
                                           std::size_t terms = 2) {
  std::vector<RationalVector> parts;
  gptent::CompositePtr sys;
  for (std::size_t i = 0; i < terms; ++i) {
    auto j = gptent::product_state({random_state(rng, a, pa), random_state(rng, b, pb)});
    sys = j.system();
    parts.push_back(j.values());
  }
  return gptent::JointState(sys, combine(random_weights(rng, terms), parts));
}

/// omega(a, b, c) = p(a, c) beta_ac(b) on (bit A, squit B, bit C); A and C
/// classical, B arbitrary.
inline gptent::JointState random_classical_ends(Rng& rng) {
  auto a = gptent::catalog::bit("A"), c = gptent::catalog::bit("C");
  auto b = gptent::catalog::squit();
  auto sys = std::make_shared<const gptent::CompositeSystem>(std::vector<gptent::TestSpacePtr>{a, b, c},
                                                             gptent::CompositeMode::adaptive);
  auto p = random_weights(rng, 4);
  RationalVector values(sys->cell_count(), Rational(0));
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t z = 0; z < 2; ++z) {
      auto beta = random_squit_values(rng);
      for (std::size_t y = 0; y < 4; ++y) values[sys->encode({x, y, z})] = p[2 * x + z] * beta[y];
    }
  return gptent::JointState(sys, values);
}

// ---- floating-point oracles ----

inline double shannon(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

inline double shannon(const std::vector<Rational>& p) {
  std::vector<double> d;
  for (const auto& x : p) d.push_back(gptent::to_double(x));
  return shannon(d);
}

/// Minimum local Shannon entropy over the tests of the state's space.
inline double brute_measurement_entropy(const gptent::State& s) {
  double best = INFINITY;
  const auto& space = *s.space();
  for (std::size_t t = 0; t < space.test_count(); ++t) {
    std::vector<Rational> p;
    for (auto o : space.test_outcomes(t)) p.push_back(s[o]);
    best = std::min(best, shannon(p));
  }
  return best;
}

/// Leaf distributions of every test on the composite, built by explicit
/// enumeration: all component orders and every conditional test choice in
/// adaptive modes, product tests only in cartesian mode.
inline std::vector<std::vector<double>> brute_leaf_distributions(const gptent::JointState& joint) {
  const auto& sys = *joint.system();
  const std::size_t n = sys.size();
  std::vector<std::size_t> tuple(n, 0);
  if (!sys.adaptive()) {
    std::vector<std::vector<double>> out;
    std::vector<std::size_t> choice(n, 0);
    while (true) {
      std::vector<double> leaves;
      std::function<void(std::size_t)> fill = [&](std::size_t c) {
        if (c == n) {
          leaves.push_back(gptent::to_double(joint.value(tuple)));
          return;
        }
        for (auto o : sys.component(c).test_outcomes(choice[c])) {
          tuple[c] = o;
          fill(c + 1);
        }
      };
      fill(0);
      out.push_back(leaves);
      std::size_t c = n;
      while (c > 0 && ++choice[c - 1] == sys.component(c - 1).test_count()) choice[--c] = 0;
      if (c == 0) return out;
    }
  }
  std::function<std::vector<std::vector<double>>(std::vector<bool>&)> trees = [&](std::vector<bool>& done) {
    std::vector<std::vector<double>> out;
    bool all = std::all_of(done.begin(), done.end(), [](bool b) { return b; });
    if (all) return std::vector<std::vector<double>>{{gptent::to_double(joint.value(tuple))}};
    for (std::size_t c = 0; c < n; ++c) {
      if (done[c]) continue;
      done[c] = true;
      for (std::size_t t = 0; t < sys.component(c).test_count(); ++t) {
        std::vector<std::vector<double>> acc{{}};
        for (auto o : sys.component(c).test_outcomes(t)) {
          tuple[c] = o;
          auto sub = trees(done);
          std::vector<std::vector<double>> next;
          for (const auto& prefix : acc)
            for (const auto& s : sub) {
              auto joined = prefix;
              joined.insert(joined.end(), s.begin(), s.end());
              next.push_back(std::move(joined));
            }
          acc = std::move(next);
        }
        out.insert(out.end(), acc.begin(), acc.end());
      }
      done[c] = false;
    }
    return out;
  };
  std::vector<bool> done(n, false);
  return trees(done);
}

inline double brute_joint_entropy(const gptent::JointState& joint) {
  double best = INFINITY;
  for (const auto& leaves : brute_leaf_distributions(joint)) best = std::min(best, shannon(leaves));
  return best;
}

/// Basis of the nullspace of a dense matrix (rows x cols) by Gaussian
/// elimination with partial pivoting.
inline std::vector<std::vector<double>> nullspace(std::vector<std::vector<double>> m, std::size_t cols, double eps = 1e-10) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t best = row;
    for (std::size_t r = row; r < m.size(); ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[best][c])) best = r;
    if (std::fabs(m[best][c]) < eps) continue;
    std::swap(m[row], m[best]);
    double inv = 1.0 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r)
      if (r != row && m[r][c] != 0.0) {
        double f = m[r][c];
        for (std::size_t k = 0; k < cols; ++k) m[r][k] -= f * m[row][k];
      }
    pivots.push_back(c);
    ++row;
  }
  std::vector<std::vector<double>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<double> v(cols, 0.0);
    v[free] = 1.0;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
    basis.push_back(v);
  }
  return basis;
}

/// Random search over {lambda >= 0 : V lambda = p, sum lambda = 1}: a random
/// start is projected onto the fiber by alternating projections, then walked
/// to a vertex of the fiber along null directions, always keeping the endpoint
/// of lower Shannon value (concavity puts segment minima at endpoints).
class DecompositionSampler {
 public:
  DecompositionSampler(const gptent::StateSpacePolytope& poly, const RationalVector& point) {
    n_ = poly.vertex_count();
    const std::size_t dim = poly.ambient_dim();
    a_.assign(dim + 1, std::vector<double>(n_, 1.0));
    b_.assign(dim + 1, 1.0);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t j = 0; j < n_; ++j) a_[r][j] = gptent::to_double(poly.vertices()[j][r]);
      b_[r] = gptent::to_double(point[r]);
    }
    build_projector();
  }

  /// Shannon value at one sampled fiber vertex, or NaN if projection failed.
  double sample(Rng& rng) {
    std::vector<double> lambda(n_);
    std::exponential_distribution<double> expo(1.0);
    double total = 0.0;
    for (auto& x : lambda) total += (x = expo(rng));
    for (auto& x : lambda) x /= total;
    for (int iter = 0; iter < 400; ++iter) {
      project_affine(lambda);
      bool clean = true;
      for (auto& x : lambda)
        if (x < 0.0) {
          clean = clean && x > -1e-13;
          x = 0.0;
        }
      if (clean && residual(lambda) < 1e-12) break;
    }
    if (residual(lambda) > 1e-9) return NAN;
    walk_to_vertex(lambda);
    return shannon(lambda);
  }

 private:
  double residual(const std::vector<double>& x) const {
    double worst = 0.0;
    for (std::size_t r = 0; r < a_.size(); ++r) {
      double s = -b_[r];
      for (std::size_t j = 0; j < n_; ++j) s += a_[r][j] * x[j];
      worst = std::max(worst, std::fabs(s));
    }
    return worst;
  }

  // x <- x - A^T (A A^T)^+ (A x - b), using an orthonormal row basis.
  void build_projector() {
    for (const auto& row : a_) {
      std::vector<double> v = row;
      double rhs = b_[&row - &a_[0]];
      for (std::size_t q = 0; q < q_.size(); ++q) {
        double d = 0.0;
        for (std::size_t j = 0; j < n_; ++j) d += q_[q][j] * v[j];
        for (std::size_t j = 0; j < n_; ++j) v[j] -= d * q_[q][j];
        rhs -= d * qb_[q];
      }
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm < 1e-10) continue;
      for (auto& x : v) x /= norm;
      q_.push_back(v);
      qb_.push_back(rhs / norm);
    }
  }

  void project_affine(std::vector<double>& x) const {
    for (std::size_t q = 0; q < q_.size(); ++q) {
      double d = -qb_[q];
      for (std::size_t j = 0; j < n_; ++j) d += q_[q][j] * x[j];
      for (std::size_t j = 0; j < n_; ++j) x[j] -= d * q_[q][j];
    }
  }

  void walk_to_vertex(std::vector<double>& lambda) const {
    while (true) {
      std::vector<std::size_t> support;
      for (std::size_t j = 0; j < n_; ++j)
        if (lambda[j] > 1e-12) support.push_back(j);
        else lambda[j] = 0.0;
      std::vector<std::vector<double>> m(a_.size(), std::vector<double>(support.size()));
      for (std::size_t r = 0; r < a_.size(); ++r)
        for (std::size_t c = 0; c < support.size(); ++c) m[r][c] = a_[r][support[c]];
      auto null = nullspace(m, support.size());
      if (null.empty()) return;
      const auto& d = null.front();
      double up = INFINITY, down = INFINITY;
      for (std::size_t c = 0; c < support.size(); ++c) {
        double x = lambda[support[c]];
        if (d[c] < -1e-14) up = std::min(up, -x / d[c]);
        if (d[c] > 1e-14) down = std::min(down, x / d[c]);
      }
      auto at = [&](double t) {
        std::vector<double> y = lambda;
        for (std::size_t c = 0; c < support.size(); ++c) y[support[c]] = std::max(0.0, y[support[c]] + t * d[c]);
        return y;
      };
      auto plus = at(up), minus = at(-down);
      lambda = shannon(plus) <= shannon(minus) ? plus : minus;
    }
  }

  std::size_t n_ = 0;
  std::vector<std::vector<double>> a_;
  std::vector<double> b_;
  std::vector<std::vector<double>> q_;
  std::vector<double> qb_;
};

}  // namespace testsupport

#endif  // GPTENT_TESTS_SUPPORT_HPP
