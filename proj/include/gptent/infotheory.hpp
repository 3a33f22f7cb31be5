#ifndef GPTENT_INFOTHEORY_HPP
#define GPTENT_INFOTHEORY_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "gptent/composite.hpp"

namespace gptent {

/// Ascending component indices of a joint state.
using Subset = std::vector<std::size_t>;

/// H(AB) - H(B). Throws ModelError when the subsets overlap.
double conditional_entropy(const JointState& joint, const Subset& target, const Subset& given);
/// H(A) + H(B) - H(AB).
double mutual_information(const JointState& joint, const Subset& a, const Subset& b);
/// H(A|C) + H(B|C) - H(AB|C). May be negative.
double conditional_mutual_information(const JointState& joint, const Subset& a, const Subset& b, const Subset& c);

/// Strong subadditivity in its four equivalent forms, C being the conditioner:
///   a = I(A:BC) - I(A:C)         >= 0
///   b = H(A|C) - H(A|BC)         >= 0
///   c = H(ABC) - H(AC) - H(BC) + H(C) <= 0
///   d = I(A:B|C)                 >= 0
struct SSAReport {
  double h_a = 0, h_c = 0, h_ac = 0, h_bc = 0, h_abc = 0;
  double form_a = 0, form_b = 0, form_c = 0, form_d = 0;
  bool satisfied_a = false, satisfied_b = false, satisfied_c = false, satisfied_d = false;
  bool satisfied = false;    // form_d >= -kTolerance
  bool forms_agree = false;  // all four flags equal and a = b = d = -c within kTolerance
};

SSAReport ssa_report(const JointState& joint, const Subset& a, const Subset& b, const Subset& c);

/// Weighted states of one system; weights positive and summing to one.
struct Ensemble {
  std::vector<Rational> weights;
  std::vector<State> states;
  std::vector<std::string> labels;  // record outcomes; defaults to x1, x2, ...
};

/// Throws InvalidDistribution or ModelError.
void validate_ensemble(const Ensemble& ensemble);

/// The classical record state sum_x p_x delta_x (x) beta_x on (record, B).
JointState record_state(const Ensemble& ensemble);

struct HolevoReport {
  double chi = 0;        // H(average) - sum_x p_x H(beta_x)
  double mutual_ab = 0;  // I(A:B) on the record state
  double max_product_info = 0;
  std::size_t best_test = 0;  // B test attaining max_product_info
  std::string best_test_id;
  bool chi_matches_mutual = false;
  bool satisfied = false;  // max_product_info <= chi + kTolerance
};

HolevoReport holevo_report(const Ensemble& ensemble);

/// I(X:Y) of a classical joint distribution given as a matrix of exact weights.
double classical_mutual_information(const std::vector<RationalVector>& joint);

}  // namespace gptent

#endif  // GPTENT_INFOTHEORY_HPP
