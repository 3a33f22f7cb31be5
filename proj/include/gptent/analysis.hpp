#ifndef GPTENT_ANALYSIS_HPP
#define GPTENT_ANALYSIS_HPP

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "gptent/geometry.hpp"

namespace gptent {

struct MixtureTerm {
  Rational weight;
  RationalVector point;
  double entropy = 0.0;  // S(point)
};

/// Every step of the facet-pair construction. Vertex indices refer to the
/// input polytope.
struct ConstructionTrace {
  std::vector<std::vector<std::size_t>> descent;  // non-simplicial facets recursed into, outermost first
  std::size_t dim = 0;                            // dimension where the construction ran
  std::vector<std::size_t> f1, f2;                // simplicial facets meeting in a (dim-2)-simplex
  std::size_t v = 0;                              // first vertex outside F1 and F2
  RationalVector rho1, rho2, rho3;                // barycenters of F1, F2 and F1 n F2
  double s_rho1 = 0, s_rho2 = 0, s_rho3 = 0;
  Rational s, t;                                  // direction of L: s (rho1 - rho3) + t (rho2 - rho3)
  Rational tau;                                   // L = rho3 + [0, tau] * direction
  RationalVector l_start, l_end;
  std::vector<Rational> h_weights;                // rho in the basis of H = conv(F1 n F2, V)
  int case_number = 0;                            // 1: rho on the relative boundary of H, 2: interior
};

struct ConcavityWitness {
  RationalVector rho;
  std::vector<MixtureTerm> mixture;  // positive weights summing to one
  double s_rho = 0.0;
  double mixture_avg = 0.0;
  double gap = 0.0;  // mixture_avg - s_rho
  ConstructionTrace trace;
};

struct NotApplicable {
  enum class Reason { simplex, degenerate };
  Reason reason;
  std::string message;
};

using ConcavityResult = std::variant<ConcavityWitness, NotApplicable>;

/// Runs the facet-pair construction, descending into the first non-simplicial
/// facet while one exists. Throws ConstructionError if an invariant of the
/// construction fails.
ConcavityResult find_concavity_violation(const StateSpacePolytope& poly);

/// Recomputes every entropy with `functional` and checks exact
/// reconstruction, positive weights, membership and gap > kTolerance.
bool verify_witness(const StateSpacePolytope& poly, const ConcavityWitness& witness,
                    const SchurConcaveFunctional& functional = SchurConcaveFunctional::shannon());

}  // namespace gptent

#endif  // GPTENT_ANALYSIS_HPP
