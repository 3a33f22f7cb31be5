#include "gptent/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gptent {

std::string default_test_id(const std::vector<std::string>& outcomes) {
  std::string id = "{";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (i) id += ",";
    id += outcomes[i];
  }
  return id + "}";
}

TestSpace::TestSpace(std::string name, std::vector<std::string> outcomes, std::vector<Test> tests)
    : name_(std::move(name)), outcomes_(std::move(outcomes)), tests_(std::move(tests)) {
  if (tests_.empty()) throw ModelError("test space '" + name_ + "' has no tests");

  const bool derive = outcomes_.empty();
  for (const auto& test : tests_) {
    for (const auto& x : test.outcomes) {
      if (derive && std::find(outcomes_.begin(), outcomes_.end(), x) == outcomes_.end()) outcomes_.push_back(x);
    }
  }
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (!index_.emplace(outcomes_[i], i).second) {
      throw ModelError("test space '" + name_ + "': duplicate outcome '" + outcomes_[i] + "'");
    }
  }

  std::vector<bool> covered(outcomes_.size(), false);
  std::set<std::vector<std::size_t>> seen;
  for (auto& test : tests_) {
    if (test.id.empty()) test.id = default_test_id(test.outcomes);
    if (test.outcomes.empty()) throw ModelError("test space '" + name_ + "': test " + test.id + " is empty");
    std::vector<std::size_t> indices;
    for (const auto& x : test.outcomes) {
      auto it = index_.find(x);
      if (it == index_.end()) {
        throw ModelError("test space '" + name_ + "': test " + test.id + " uses unknown outcome '" + x + "'");
      }
      if (std::find(indices.begin(), indices.end(), it->second) != indices.end()) {
        throw ModelError("test space '" + name_ + "': test " + test.id + " repeats outcome '" + x + "'");
      }
      indices.push_back(it->second);
      covered[it->second] = true;
    }
    std::vector<std::size_t> key = indices;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) {
      throw ModelError("test space '" + name_ + "': test " + test.id + " duplicates an earlier test");
    }
    if (indices.size() == 1) {
      warnings_.push_back("test " + test.id + " has a single outcome; every state has measurement entropy 0");
    }
    test_indices_.push_back(std::move(indices));
  }
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (!covered[i]) {
      throw ModelError("test space '" + name_ + "': outcome '" + outcomes_[i] + "' belongs to no test");
    }
  }
}

std::optional<std::size_t> TestSpace::find_outcome(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t TestSpace::outcome_index(std::string_view label) const {
  auto found = find_outcome(label);
  if (!found) throw ModelError("unknown outcome '" + std::string(label) + "' in test space '" + name_ + "'");
  return *found;
}

std::optional<std::size_t> TestSpace::find_test(const std::vector<std::string>& outcomes) const {
  std::vector<std::size_t> key;
  for (const auto& x : outcomes) {
    auto idx = find_outcome(x);
    if (!idx) return std::nullopt;
    key.push_back(*idx);
  }
  std::sort(key.begin(), key.end());
  for (std::size_t t = 0; t < test_indices_.size(); ++t) {
    std::vector<std::size_t> other = test_indices_[t];
    std::sort(other.begin(), other.end());
    if (other == key) return t;
  }
  return std::nullopt;
}

std::optional<std::size_t> TestSpace::find_test_id(std::string_view id) const {
  for (std::size_t t = 0; t < tests_.size(); ++t)
    if (tests_[t].id == id) return t;
  return std::nullopt;
}

TestSpacePtr make_space(std::string name, std::vector<std::string> outcomes, std::vector<Test> tests) {
  return std::make_shared<const TestSpace>(std::move(name), std::move(outcomes), std::move(tests));
}

TestSpacePtr make_space(std::string name, std::vector<std::vector<std::string>> tests) {
  std::vector<Test> list;
  for (auto& t : tests) list.push_back(Test{"", std::move(t)});
  return make_space(std::move(name), {}, std::move(list));
}

TestSpacePtr classical_space(std::string name, std::vector<std::string> outcomes) {
  return make_space(std::move(name), {outcomes}, {Test{"", outcomes}});
}

// ---------------------------------------------------------------------------
// States

std::vector<Violation> find_violations(const TestSpace& space, const RationalVector& values) {
  std::vector<Violation> out;
  if (values.size() != space.outcome_count()) {
    out.push_back({Violation::Kind::missing_outcome, space.name(), Rational(values.size()), Rational(0),
                   "expected " + std::to_string(space.outcome_count()) + " values, got " +
                       std::to_string(values.size())});
    return out;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Rational& v = values[i];
    if (v < 0 || v > 1) {
      Rational deficit = v < 0 ? Rational(-v) : Rational(v - 1);
      out.push_back({Violation::Kind::out_of_range, space.outcomes()[i], v, deficit,
                     "outcome " + space.outcomes()[i] + " has value " + to_string(v) + " outside [0,1]"});
    }
  }
  for (std::size_t t = 0; t < space.test_count(); ++t) {
    Rational sum = 0;
    for (auto x : space.test_outcomes(t)) sum += values[x];
    if (sum != 1) {
      out.push_back({Violation::Kind::normalization, space.tests()[t].id, sum, Rational(sum - 1),
                     "test " + space.tests()[t].id + " sums to " + to_string(sum)});
    }
  }
  return out;
}

State::State(TestSpacePtr space, RationalVector values) : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw ModelError("state without a test space");
  auto violations = find_violations(*space_, values_);
  if (!violations.empty()) {
    std::string msg = "invalid state on '" + space_->name() + "':";
    for (const auto& v : violations) msg += " " + v.message + ";";
    msg.pop_back();
    throw ModelError(msg);
  }
}

RationalVector State::restriction(std::size_t test) const {
  RationalVector out;
  for (auto x : space_->test_outcomes(test)) out.push_back(values_[x]);
  return out;
}

State mix(const std::vector<Rational>& weights, const std::vector<State>& states) {
  if (weights.size() != states.size() || states.empty()) throw ModelError("mix: weight/state count mismatch");
  RationalVector values(states.front().values().size(), Rational(0));
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(*states[i].space() == *states.front().space())) throw ModelError("mix: states on different spaces");
    for (std::size_t x = 0; x < values.size(); ++x) values[x] += weights[i] * states[i][x];
  }
  return State(states.front().space(), std::move(values));
}

StateValidation validate_state(const TestSpacePtr& space, const RationalVector& values) {
  StateValidation result;
  result.violations = find_violations(*space, values);
  if (result.violations.empty()) result.state.emplace(space, values);
  return result;
}

StateValidation validate_state(const TestSpacePtr& space, const std::map<std::string, Rational>& candidate) {
  StateValidation result;
  RationalVector values(space->outcome_count(), Rational(0));
  for (const auto& [label, value] : candidate) {
    auto idx = space->find_outcome(label);
    if (!idx) {
      result.violations.push_back({Violation::Kind::unknown_outcome, label, value, Rational(0),
                                   "outcome " + label + " is not in test space '" + space->name() + "'"});
      continue;
    }
    values[*idx] = value;
  }
  for (std::size_t i = 0; i < space->outcome_count(); ++i) {
    if (!candidate.count(space->outcomes()[i])) {
      result.violations.push_back({Violation::Kind::missing_outcome, space->outcomes()[i], Rational(0), Rational(0),
                                   "outcome " + space->outcomes()[i] + " has no value"});
    }
  }
  if (!result.violations.empty()) return result;
  return validate_state(space, values);
}

// ---------------------------------------------------------------------------
// Entropies

namespace {

double plogp_sum(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h <= 0.0 ? 0.0 : h;
}

std::vector<double> to_doubles(std::span<const Rational> weights) {
  std::vector<double> out;
  out.reserve(weights.size());
  for (const auto& w : weights) out.push_back(to_double(w));
  return out;
}

}  // namespace

double shannon_entropy(std::span<const Rational> weights) {
  Rational sum = 0;
  for (const auto& w : weights) {
    if (w < 0) throw InvalidDistribution("negative weight " + to_string(w));
    sum += w;
  }
  if (sum != 1) throw InvalidDistribution("weights sum to " + to_string(sum) + ", not 1");
  auto p = to_doubles(weights);
  return plogp_sum(p);
}

double shannon_entropy(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0 || std::isnan(w)) throw InvalidDistribution("negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kTolerance) throw InvalidDistribution("weights do not sum to 1");
  return plogp_sum(weights);
}

double local_entropy(const State& state, std::size_t test) {
  if (test >= state.space()->test_count()) throw ModelError("test index out of range");
  auto restricted = state.restriction(test);
  return shannon_entropy(std::span<const Rational>(restricted));
}

double local_entropy(const State& state, const Test& test) {
  auto idx = state.space()->find_test(test.outcomes);
  if (!idx) throw ModelError("test " + default_test_id(test.outcomes) + " is not in '" + state.space()->name() + "'");
  return local_entropy(state, *idx);
}

EntropyResult<TestWitness> measurement_entropy(const State& state) {
  return generalized_entropy(state, SchurConcaveFunctional::shannon());
}

std::optional<std::string> certainty_witness(const State& state) {
  for (std::size_t i = 0; i < state.values().size(); ++i)
    if (state[i] == 1) return state.space()->outcomes()[i];
  return std::nullopt;
}

SchurConcaveFunctional SchurConcaveFunctional::renyi(double alpha) {
  if (std::isnan(alpha) || alpha <= 0.0) throw std::invalid_argument("Renyi order must be positive");
  if (alpha == 1.0) return shannon();
  if (std::isinf(alpha)) return min_entropy();
  return {Kind::renyi, alpha};
}

SchurConcaveFunctional SchurConcaveFunctional::tsallis(double q) {
  if (std::isnan(q) || q <= 0.0 || std::isinf(q)) throw std::invalid_argument("Tsallis index must be positive and finite");
  if (q == 1.0) throw std::invalid_argument("Tsallis q = 1 is the (natural-log) Shannon limit; use shannon");
  return {Kind::tsallis, q};
}

SchurConcaveFunctional SchurConcaveFunctional::parse(std::string_view spec) {
  if (spec == "shannon") return shannon();
  if (spec == "min" || spec == "min_entropy") return min_entropy();
  auto colon = spec.find(':');
  if (colon != std::string_view::npos) {
    std::string head(spec.substr(0, colon));
    std::string arg(spec.substr(colon + 1));
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = arg == "inf" ? std::numeric_limits<double>::infinity() : std::stod(arg, &used);
      if (arg != "inf" && used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad functional parameter '" + arg + "'");
    }
    if (head == "renyi") return renyi(value);
    if (head == "tsallis") return tsallis(value);
  }
  throw std::invalid_argument("unknown functional '" + std::string(spec) + "'");
}

std::string SchurConcaveFunctional::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::shannon: return "shannon";
    case Kind::min_entropy: return "min_entropy";
    case Kind::renyi: os << "renyi:" << parameter_; return os.str();
    case Kind::tsallis: os << "tsallis:" << parameter_; return os.str();
  }
  return "?";
}

double SchurConcaveFunctional::operator()(std::span<const double> p) const {
  switch (kind_) {
    case Kind::shannon: return shannon_entropy(p);
    case Kind::min_entropy: {
      double m = 0.0;
      for (double x : p) m = std::max(m, x);
      double v = -std::log2(m);
      return v <= 0.0 ? 0.0 : v;
    }
    case Kind::renyi: {
      double s = 0.0;
      for (double x : p)
        if (x > 0.0) s += std::pow(x, parameter_);
      double v = std::log2(s) / (1.0 - parameter_);
      return std::abs(v) < 1e-15 ? 0.0 : v;
    }
    case Kind::tsallis: {
      double s = 0.0;
      for (double x : p)
        if (x > 0.0) s += std::pow(x, parameter_);
      double v = (1.0 - s) / (parameter_ - 1.0);
      return std::abs(v) < 1e-15 ? 0.0 : v;
    }
  }
  return 0.0;
}

double SchurConcaveFunctional::operator()(std::span<const Rational> p) const {
  if (kind_ == Kind::shannon) return shannon_entropy(p);
  Rational sum = 0;
  for (const auto& w : p) {
    if (w < 0) throw InvalidDistribution("negative weight " + to_string(w));
    sum += w;
  }
  if (sum != 1) throw InvalidDistribution("weights sum to " + to_string(sum) + ", not 1");
  auto d = to_doubles(p);
  return (*this)(std::span<const double>(d));
}

double SchurConcaveFunctional::uniform(std::size_t d) const {
  std::vector<double> u(d, 1.0 / static_cast<double>(d));
  if (kind_ == Kind::shannon) return std::log2(static_cast<double>(d));
  double s = 0.0;
  for (double x : u) s += x;
  for (double& x : u) x /= s;
  return (*this)(std::span<const double>(u));
}

EntropyResult<TestWitness> generalized_entropy(const State& state, const SchurConcaveFunctional& functional) {
  const auto& space = *state.space();
  EntropyResult<TestWitness> best{std::numeric_limits<double>::infinity(), {}};
  for (std::size_t t = 0; t < space.test_count(); ++t) {
    auto restricted = state.restriction(t);
    double h = functional(std::span<const Rational>(restricted));
    if (h < best.bits) best = {h, {t, space.tests()[t].id}};
  }
  return best;
}

}  // namespace gptent
