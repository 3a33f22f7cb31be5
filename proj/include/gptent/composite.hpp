#ifndef GPTENT_COMPOSITE_HPP
#define GPTENT_COMPOSITE_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gptent/core_model.hpp"

namespace gptent {

enum class CompositeMode { cartesian, foulis_randall, adaptive };

std::string to_string(CompositeMode mode);
/// "cartesian", "fr", "foulis_randall", "adaptive". Throws ModelError otherwise.
CompositeMode parse_mode(std::string_view text);

/// Ordered components and the test family used for joint entropies.
///
/// Joint values live on the Cartesian cells: one outcome index per component,
/// row-major with component 0 most significant. With more than two components
/// FR mode denotes the fully adaptive family.
class CompositeSystem {
 public:
  /// Throws ModelError with fewer than two components.
  CompositeSystem(std::vector<TestSpacePtr> components, CompositeMode mode);

  const std::vector<TestSpacePtr>& components() const { return components_; }
  const TestSpace& component(std::size_t i) const { return *components_.at(i); }
  std::size_t size() const { return components_.size(); }
  CompositeMode mode() const { return mode_; }
  /// True when tests may be conditioned on earlier outcomes.
  bool adaptive() const { return mode_ != CompositeMode::cartesian; }

  std::size_t cell_count() const { return cells_; }
  std::size_t encode(const std::vector<std::size_t>& tuple) const;
  std::vector<std::size_t> decode(std::size_t cell) const;
  /// Comma-joined outcome labels in component order.
  std::string cell_key(std::size_t cell) const;
  /// Inverse of cell_key. Throws ModelError on an unknown label or arity.
  std::size_t parse_cell_key(std::string_view key) const;

  /// The subsystem on `keep` (ascending, at least two) with the same mode.
  CompositeSystem subsystem(const std::vector<std::size_t>& keep) const;

 private:
  std::vector<TestSpacePtr> components_;
  CompositeMode mode_;
  std::vector<std::size_t> strides_;
  std::size_t cells_ = 1;
};

using CompositePtr = std::shared_ptr<const CompositeSystem>;

/// Decision tree of component measurements. `next[k]` is the subtree after the
/// k-th outcome of `test` (in the test's declared order); it is empty exactly
/// at the last measured component.
struct AdaptiveTest {
  std::size_t component = 0;
  std::size_t test = 0;
  std::vector<AdaptiveTest> next;

  friend bool operator==(const AdaptiveTest&, const AdaptiveTest&) = default;
};

/// Full outcome tuples (outcome index per component) at the leaves, sorted.
std::vector<std::vector<std::size_t>> leaf_tuples(const AdaptiveTest& tree, const CompositeSystem& system);

/// Human-readable form, e.g. "A{a,a'} -> [a: B{b,b'}, a': B{c,c'}]".
std::string describe(const AdaptiveTest& tree, const CompositeSystem& system);

/// Product tests E x F as outcome-pair lists, in test-declaration order.
std::vector<std::vector<std::pair<std::string, std::string>>> cartesian_product(const TestSpace& a,
                                                                               const TestSpace& b);

/// All A-first and B-first two-stage tests, deduplicated by leaf set
/// (first occurrence kept, A-first trees first).
std::vector<AdaptiveTest> fr_product(const TestSpace& a, const TestSpace& b);

/// Every adaptive test over the components (each measured once, any order,
/// full conditioning). Returning false from `visit` stops the walk.
void for_each_adaptive_test(const CompositeSystem& system, const std::function<bool(const AdaptiveTest&)>& visit);
/// for_each_adaptive_test deduplicated by leaf set.
std::vector<AdaptiveTest> adaptive_tests(const CompositeSystem& system);

/// Exact values on every Cartesian cell, normalized on every product test.
class JointState {
 public:
  /// Throws ModelError for bad sizes, values outside [0,1], or a product test
  /// whose cells do not sum to one. Non-signaling is not checked here.
  JointState(CompositePtr system, RationalVector values);

  const CompositePtr& system() const { return system_; }
  const RationalVector& values() const { return values_; }
  const Rational& value(const std::vector<std::size_t>& tuple) const { return values_[system_->encode(tuple)]; }
  const Rational& value(std::string_view key) const { return values_[system_->parse_cell_key(key)]; }

  friend bool operator==(const JointState& a, const JointState& b) { return a.values_ == b.values_; }

 private:
  CompositePtr system_;
  RationalVector values_;
};

struct SignalingViolation {
  std::size_t component = 0;               // the party whose test choice is varied
  std::vector<std::string> others;         // fixed outcomes on the other components, in order ("" at `component`)
  std::size_t test_a = 0, test_b = 0;      // two tests of `component`
  Rational sum_a, sum_b;
  std::string message;
};

struct NonSignalingResult {
  std::optional<SignalingViolation> violation;
  bool ok() const { return !violation.has_value(); }
};

/// For every component and every outcome assignment to the others, the cell
/// sum over a test of that component is the same for all of its tests.
NonSignalingResult is_nonsignaling(const JointState& joint);
/// Throws SignalingError describing the first violation.
void require_nonsignaling(const JointState& joint);

/// Marginal on one component. Throws SignalingError.
State marginal_state(const JointState& joint, std::size_t component);
/// Marginal on at least two components (ascending). Throws SignalingError.
JointState marginal(const JointState& joint, const std::vector<std::size_t>& keep);

struct ConditionalView {
  std::vector<std::size_t> components;  // remaining components, ascending
  Rational probability;                 // of the conditioning outcome
  bool zero = false;                    // probability 0: values are all zero by convention
  RationalVector values;                // on the Cartesian cells of `components`
  std::optional<State> state;           // one component remains and not zero
  std::optional<JointState> joint;      // two or more remain and not zero
};

/// Throws ModelError for an unknown label, SignalingError for signaling input.
ConditionalView conditional(const JointState& joint, std::size_t component, std::string_view outcome);

JointState product_state(const std::vector<State>& states, CompositeMode mode = CompositeMode::foulis_randall);

/// Shannon entropy of the leaf distribution of `tree`.
double tree_entropy(const JointState& joint, const AdaptiveTest& tree);

/// Minimum over the mode's test family, via memoized chain-rule recursion in
/// adaptive modes and direct search over product tests in cartesian mode.
/// Throws SignalingError.
EntropyResult<AdaptiveTest> joint_measurement_entropy(const JointState& joint);

/// H of the marginal on `subset` (one or more components, ascending).
double subset_entropy(const JointState& joint, const std::vector<std::size_t>& subset);

}  // namespace gptent

#endif  // GPTENT_COMPOSITE_HPP
