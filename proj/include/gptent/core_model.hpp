#ifndef GPTENT_CORE_MODEL_HPP
#define GPTENT_CORE_MODEL_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gptent/errors.hpp"
#include "gptent/rational.hpp"

namespace gptent {

/// Comparison tolerance for entropy values (probabilities are exact).
inline constexpr double kTolerance = 1e-9;

/// One measurement, identified with its set of outcome labels.
struct Test {
  std::string id;
  std::vector<std::string> outcomes;
};

/// Label "{a,b,c}" built from the outcome list.
std::string default_test_id(const std::vector<std::string>& outcomes);

/// A locally finite test space: outcome set X and a list of tests covering it.
class TestSpace {
 public:
  /// Validates on construction and throws ModelError. When `outcomes` is empty
  /// X is taken to be the union of the tests in first-appearance order. Tests
  /// with an empty id get default_test_id.
  TestSpace(std::string name, std::vector<std::string> outcomes, std::vector<Test> tests);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<Test>& tests() const { return tests_; }
  std::size_t outcome_count() const { return outcomes_.size(); }
  std::size_t test_count() const { return tests_.size(); }
  bool is_classical() const { return tests_.size() == 1; }

  /// Outcome indices of test `t`, in the test's declared order.
  const std::vector<std::size_t>& test_outcomes(std::size_t t) const { return test_indices_.at(t); }

  std::optional<std::size_t> find_outcome(std::string_view label) const;
  /// Throws ModelError for an unknown label.
  std::size_t outcome_index(std::string_view label) const;
  /// Tests are equal iff their outcome sets are equal.
  std::optional<std::size_t> find_test(const std::vector<std::string>& outcomes) const;
  std::optional<std::size_t> find_test_id(std::string_view id) const;

  /// Diagnostics that do not invalidate the space (single-outcome tests).
  const std::vector<std::string>& warnings() const { return warnings_; }

  friend bool operator==(const TestSpace& a, const TestSpace& b) {
    return a.name_ == b.name_ && a.outcomes_ == b.outcomes_ && a.test_indices_ == b.test_indices_;
  }

 private:
  std::string name_;
  std::vector<std::string> outcomes_;
  std::vector<Test> tests_;
  std::vector<std::vector<std::size_t>> test_indices_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::string> warnings_;
};

using TestSpacePtr = std::shared_ptr<const TestSpace>;

TestSpacePtr make_space(std::string name, std::vector<std::string> outcomes, std::vector<Test> tests);
TestSpacePtr make_space(std::string name, std::vector<std::vector<std::string>> tests);
/// The classical system ({E}, Delta(E)).
TestSpacePtr classical_space(std::string name, std::vector<std::string> outcomes);

struct Violation {
  enum class Kind { missing_outcome, unknown_outcome, out_of_range, normalization };
  Kind kind;
  std::string subject;  // outcome label or test id
  Rational value;       // offending value or test sum
  Rational deficit;     // value - 1 for normalization, distance to [0,1] for bounds
  std::string message;
};

/// A probability assignment on X normalized on every test. Immutable.
class State {
 public:
  /// Throws ModelError describing every violation.
  State(TestSpacePtr space, RationalVector values);

  const TestSpacePtr& space() const { return space_; }
  const RationalVector& values() const { return values_; }
  const Rational& operator[](std::size_t outcome) const { return values_[outcome]; }
  const Rational& value(std::string_view label) const { return values_[space_->outcome_index(label)]; }
  RationalVector restriction(std::size_t test) const;

  friend bool operator==(const State& a, const State& b) {
    return *a.space_ == *b.space_ && a.values_ == b.values_;
  }

 private:
  TestSpacePtr space_;
  RationalVector values_;
};

/// Convex combination sum_i weights[i] * states[i]; all states share one space.
State mix(const std::vector<Rational>& weights, const std::vector<State>& states);

struct StateValidation {
  std::optional<State> state;
  std::vector<Violation> violations;
  bool ok() const { return state.has_value(); }
};

std::vector<Violation> find_violations(const TestSpace& space, const RationalVector& values);
StateValidation validate_state(const TestSpacePtr& space, const std::map<std::string, Rational>& candidate);
StateValidation validate_state(const TestSpacePtr& space, const RationalVector& values);

/// -sum p log2 p with 0 log 0 = 0. Weights must sum to exactly one.
double shannon_entropy(std::span<const Rational> weights);
/// Floating-point variant; the sum must be within kTolerance of one.
double shannon_entropy(std::span<const double> weights);

template <class Witness>
struct EntropyResult {
  double bits = 0.0;
  Witness witness;
};

struct TestWitness {
  std::size_t test = 0;
  std::string id;
};

double local_entropy(const State& state, std::size_t test);
/// Throws ModelError when `test` is not a test of the state's space.
double local_entropy(const State& state, const Test& test);

/// Minimum local entropy over all tests; ties go to the first test declared.
EntropyResult<TestWitness> measurement_entropy(const State& state);

/// Some outcome with probability exactly one, if any.
std::optional<std::string> certainty_witness(const State& state);

/// A symmetric Schur-concave functional on finite distributions.
class SchurConcaveFunctional {
 public:
  enum class Kind { shannon, renyi, tsallis, min_entropy };

  static SchurConcaveFunctional shannon() { return {Kind::shannon, 1.0}; }
  /// alpha = 1 is routed to shannon, alpha = inf to min_entropy; alpha <= 0 throws.
  static SchurConcaveFunctional renyi(double alpha);
  /// q <= 0 or q = 1 throws std::invalid_argument.
  static SchurConcaveFunctional tsallis(double q);
  static SchurConcaveFunctional min_entropy() { return {Kind::min_entropy, 0.0}; }
  /// "shannon", "min", "renyi:<alpha>", "tsallis:<q>".
  static SchurConcaveFunctional parse(std::string_view spec);

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  std::string name() const;
  bool strictly_schur_concave() const { return kind_ != Kind::min_entropy; }

  double operator()(std::span<const double> p) const;
  double operator()(std::span<const Rational> p) const;
  /// Value on the uniform distribution over d alternatives.
  double uniform(std::size_t d) const;

 private:
  SchurConcaveFunctional(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}
  Kind kind_;
  double parameter_;
};

EntropyResult<TestWitness> generalized_entropy(const State& state, const SchurConcaveFunctional& functional);

}  // namespace gptent

#endif  // GPTENT_CORE_MODEL_HPP
