#ifndef GPTENT_PROTOCOLS_HPP
#define GPTENT_PROTOCOLS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gptent/composite.hpp"

namespace gptent {

/// Squit A with tests {a1,a1'}, {a2,a2'} and squit B with {b1,b1'}, {b2,b2'}.
TestSpacePtr pr_side(char party);

/// The PR box on pr_side('A') (x) pr_side('B'): anti-correlated on test pairs
/// (1,1), (1,2), (2,1) and correlated on (2,2), each cell 1/2.
JointState pr_box();

/// Two tests per side, by index. Outcome k = 0 of a test counts +1, k = 1 counts -1.
struct ChshSettings {
  std::size_t a0 = 0, a1 = 1, b0 = 0, b1 = 1;
};

/// Correlator E(x, y) = sum over cells of (+-1)(+-1) p on tests (x, y).
double correlator(const JointState& box, std::size_t test_a, std::size_t test_b);
/// E00 + E01 + E10 + E11 with the minus sign on term `minus` (0..3 in that order).
double chsh_expression(const JointState& box, const ChshSettings& settings, std::size_t minus);
/// Maximum |S| over the four minus-sign placements. Throws ModelError for a
/// non-bipartite box or a test without exactly two outcomes.
double chsh_value(const JointState& box, const ChshSettings& settings = {});

/// A one-way protocol with uniform input bits E1..EN (E1 the most significant
/// bit of the input index) and an m-bit message.
///
/// Without a shared state Alice and Bob each see a single dummy outcome.
struct ICProtocol {
  std::size_t n = 0;
  std::size_t m = 0;
  std::optional<JointState> shared;                          // bipartite A (x) B
  std::vector<std::size_t> alice_test;                       // [input] -> A test
  std::vector<std::vector<std::size_t>> alice_message;       // [input][k-th outcome of that test] -> message
  std::vector<std::vector<std::size_t>> bob_test;            // [k][message] -> B test
  std::vector<std::vector<std::vector<int>>> bob_guess;      // [k][message][j-th outcome] -> bit
};

/// Throws ModelError when a table is not total or a message exceeds m bits.
void validate_protocol(const ICProtocol& protocol);

struct ICReport {
  std::vector<double> per_k;        // I(E_k : b_k | G = k)
  std::vector<double> per_k_joint;  // I(E_k : X_k), X_k the joint (message, B outcome) readout
  std::vector<Rational> success;    // P(b_k = E_k)
  double lhs = 0;
  std::size_t m = 0;
  bool satisfied = false;  // lhs <= m + kTolerance
};

ICReport ic_lhs(const ICProtocol& protocol);

/// Joint state of E1..EN, F and B after Alice has measured and sent F,
/// averaged over her outcome. Requires a shared state.
JointState intermediate_state(const ICProtocol& protocol);

/// The van Dam strategy on the PR box: Alice measures test 1 when E1 xor E2
/// is 0 and test 2 otherwise, sends F = a xor E1 xor 1 (unprimed a = 0), and
/// Bob measures test k and guesses F xor b.
ICProtocol van_dam_protocol();

struct VanDamReport {
  JointState state;  // components E1, E2, F, B
  double h_e1fb = 0, h_e2fb = 0, h_fb = 0, h_e1e2fb = 0;
  double cmi = 0;  // I(E1:E2|F,B)
};

VanDamReport van_dam_intermediate_state();

}  // namespace gptent

#endif  // GPTENT_PROTOCOLS_HPP
